use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cswalls_core::rational::parse_rational;
use cswalls_core::{ComplexRational, Flag, NumClass, PlanePoint, Rational};

use crate::config::{Format, Overrides};

fn class(s: &str) -> Result<NumClass, String> {
    NumClass::parse(s).map_err(|e| e.to_string())
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<PlanePoint, String> {
    PlanePoint::parse(s).map_err(|e| e.to_string())
}

fn complex(s: &str) -> Result<ComplexRational, String> {
    ComplexRational::parse(s).map_err(|e| e.to_string())
}

fn flag(s: &str) -> Result<Flag, String> {
    Flag::parse(s).map_err(|e| e.to_string())
}

/// Three phase lifts separated by commas; `_` leaves a lift unspecified.
fn lifts(s: &str) -> Result<[Option<f64>; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected three comma-separated lifts, got {s:?}"));
    };
    let one = |t: &str| -> Result<Option<f64>, String> {
        if t == "_" {
            return Ok(None);
        }
        let x: f64 = match parse_rational(t) {
            Ok(q) => cswalls_core::rational::to_f64(&q),
            Err(_) => t.parse().map_err(|_| format!("bad lift {t:?}"))?,
        };
        if x.is_finite() {
            Ok(Some(x))
        } else {
            Err(format!("bad lift {t:?}"))
        }
    };
    Ok([one(a)?, one(b)?, one(c)?])
}

#[derive(Debug, Parser)]
#[command(name = "cswalls", version, about = "Exact wall-and-chamber computations for coherent systems on curves")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Genus of the curve.
    #[arg(long, global = true)]
    pub genus: Option<i64>,
    /// Envelope model: general, mercat, elliptic, or user:<path>.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Search window `b_min,b_max,w_min,w_max`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Largest destabilizer rank searched.
    #[arg(long, global = true)]
    pub rank_bound: Option<u32>,
    /// Tolerance for comparisons of real phases.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Directory for cached wall computations.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Ignore any configured cache directory.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            genus: self.genus,
            model: self.model.clone(),
            window: self.window.clone(),
            rank_bound: self.rank_bound,
            tol: self.tol,
            format: self.format,
            cache_dir: self.cache_dir.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct ClassArg {
    /// A class `r,d,n`.
    #[arg(long = "class", value_parser = class, allow_hyphen_values = true)]
    pub class: NumClass,
}

#[derive(Debug, Args)]
pub struct PointArg {
    /// A point `b,w` of the slice.
    #[arg(long, value_parser = point, allow_hyphen_values = true)]
    pub point: PlanePoint,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Euler pairing χ(v1, v2).
    Euler {
        #[arg(long, value_parser = class, allow_hyphen_values = true)]
        v1: NumClass,
        #[arg(long, value_parser = class, allow_hyphen_values = true)]
        v2: NumClass,
    },
    /// Class of the Serre functor applied to a class.
    Serre(ClassArg),
    /// Class of the dual.
    Dual(ClassArg),
    /// Left mutation through an exceptional class.
    Mutate {
        /// The exceptional class, such as 0,0,1 or 1,0,1.
        #[arg(long, value_parser = class, allow_hyphen_values = true)]
        by: NumClass,
        #[command(flatten)]
        class: ClassArg,
    },
    /// Projection Π(r,d,n) = (d/r, n/r).
    Project(ClassArg),
    /// Envelope values at a point, or the whole model as JSON.
    Bn {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        x: Option<Rational>,
    },
    /// Membership of a point in the region above the Brill–Noether function.
    Region {
        #[command(flatten)]
        point: PointArg,
        /// Test the region above the four-piece bound instead.
        #[arg(long)]
        uf: bool,
    },
    /// Central charge Z_{b,w}(v).
    Charge {
        #[command(flatten)]
        class: ClassArg,
        #[command(flatten)]
        point: PointArg,
    },
    /// Slope ν_{b,w}(v).
    Nu {
        #[command(flatten)]
        class: ClassArg,
        #[command(flatten)]
        point: PointArg,
    },
    /// Slope μ_α(v) = d/r + α·n/r.
    Mualpha {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        alpha: Rational,
    },
    /// Walls of a class inside the window.
    Walls {
        #[command(flatten)]
        class: ClassArg,
        /// Keep candidates that the support form rules out.
        #[arg(long)]
        no_prune: bool,
    },
    /// Chambers cut out by the walls of a class.
    Chambers(ClassArg),
    /// The line of slope −1/α through Π(v).
    Ray {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        alpha: Rational,
    },
    /// Bogomolov-type verdict from the four-piece bound.
    Feasible(ClassArg),
    /// Region classification of charge data.
    Classify {
        /// Charge of (0,0,1) as `re,im`.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z1: ComplexRational,
        /// Charge of (0,1,0).
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z2: ComplexRational,
        /// Charge of (1,0,0).
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z3: ComplexRational,
        /// Phase lifts `φ1,φ2,φ3`; `_` marks a missing lift.
        #[arg(long, value_parser = lifts, allow_hyphen_values = true)]
        lifts: Option<[Option<f64>; 3]>,
        /// Asserted stable objects: stable_O0, stable_pt, stable_sheafO, stable_OO.
        #[arg(long, value_delimiter = ',', value_parser = flag)]
        flags: Vec<Flag>,
    },
    /// Gluing presentation of a point with b < 0 and w > 0.
    Glue(PointArg),
    /// SVG diagram of the walls of a class.
    Plot {
        #[command(flatten)]
        class: ClassArg,
        /// Output file; the document goes to standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
