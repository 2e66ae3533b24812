//! One function per subcommand, each producing a [`Report`] or raw output.

use cswalls_core::bnfunction::{region_uc, region_uf};
use cswalls_core::charge::{central_charge, gluing_presentation, heart_phase, mu_alpha, nu};
use cswalls_core::numgro::{dual_class, euler, mutate_left, project, serre_class};
use cswalls_core::walls::{bogomolov_verdict, chamber_decomposition, enumerate_walls_with, ray_line, ChamberBounds, EnumerateOptions};
use cswalls_core::{classify_regions, BNModel, ChargeData, NumClass, PLFunction, Wall};
use serde::Serialize;

use crate::args::Command;
use crate::cache::{CacheKey, WallCache};
use crate::config::Config;
use crate::error::CliError;
use crate::output::{to_json, Report, Table};
use crate::svg;

/// What a command prints on success.
pub enum Output {
    Report(Report),
    /// Printed as is, whatever the format.
    Raw(String),
}

/// Everything a command may read besides its own arguments.
pub struct Context<'a> {
    pub config: &'a Config,
    pub use_cache: bool,
    /// Warnings for standard error.
    pub warnings: Vec<String>,
}

impl Context<'_> {
    fn model(&self) -> Result<BNModel, CliError> {
        self.config.build_model()
    }

    fn walls(&mut self, v: &NumClass, model: &BNModel, prune: bool) -> Result<Vec<Wall>, CliError> {
        let cfg = self.config;
        let compute = || {
            let opts = EnumerateOptions { prune_q: prune, ..EnumerateOptions::default() };
            enumerate_walls_with(v, cfg.genus, &cfg.window, cfg.rank_bound, model, opts)
        };
        let cache = match (&cfg.cache_dir, self.use_cache) {
            (Some(dir), true) => WallCache::new(dir),
            _ => return Ok(compute()),
        };
        let key = CacheKey::new(v, cfg.genus.get(), &cfg.window, cfg.rank_bound, model, prune);
        if let Some(walls) = cache.load(&key) {
            return Ok(walls);
        }
        let walls = compute();
        if let Err(e) = cache.store(&key, &walls) {
            self.warnings.push(format!("warning: could not write cache entry: {e}"));
        }
        Ok(walls)
    }
}

fn class_text(v: &NumClass) -> String {
    v.to_string()
}

fn class_report(name: &str, v: &NumClass) -> Result<Report, CliError> {
    Report::scalar(name, class_text(v), v)
}

pub fn execute(command: Command, ctx: &mut Context<'_>) -> Result<Output, CliError> {
    let g = ctx.config.genus;
    let report = match command {
        Command::Euler { v1, v2 } => {
            let x = euler(&v1, &v2, g);
            Report::scalar("euler", x.to_string(), &x.to_string())?
        }
        Command::Serre(a) => class_report("serre", &serre_class(&a.class, g))?,
        Command::Dual(a) => class_report("dual", &dual_class(&a.class))?,
        Command::Mutate { by, class } => class_report("mutation", &mutate_left(&by, &class.class, g)?)?,
        Command::Project(a) => {
            let p = project(&a.class)?;
            Report::new(p.to_string(), to_json(&p)?, Table::new(["b", "w"]).row([p.b.to_string(), p.w.to_string()]))
        }
        Command::Bn { x } => {
            let model = ctx.model()?;
            match x {
                Some(x) => bn_at(&model, &x)?,
                None => bn_model(&model)?,
            }
        }
        Command::Region { point, uf } => {
            let p = point.point;
            if uf {
                let inside = region_uf(&p, g)?;
                Report::scalar("in_uf", inside.to_string(), &inside)?
            } else {
                let m = region_uc(&p, &ctx.model()?);
                Report::scalar("membership", m.to_string(), &m)?
            }
        }
        Command::Charge { class, point } => {
            let z = central_charge(&class.class, &point.point);
            let phase = heart_phase(&class.class, &point.point).ok();
            #[derive(Serialize)]
            struct Charge<'a> {
                charge: &'a cswalls_core::ComplexRational,
                phase: Option<f64>,
            }
            let text = match phase {
                Some(phi) => format!("{z}\nphase {phi}"),
                None => format!("{z}\nphase undefined"),
            };
            let csv = Table::new(["re", "im", "phase"]).row([
                z.re.to_string(),
                z.im.to_string(),
                phase.map(|p| p.to_string()).unwrap_or_default(),
            ]);
            Report::new(text, to_json(&Charge { charge: &z, phase })?, csv)
        }
        Command::Nu { class, point } => {
            let s = nu(&class.class, &point.point);
            Report::scalar("nu", s.to_string(), &s)?
        }
        Command::Mualpha { class, alpha } => {
            let s = mu_alpha(&class.class, &alpha)?;
            Report::scalar("mu_alpha", s.to_string(), &s)?
        }
        Command::Walls { class, no_prune } => {
            let model = ctx.model()?;
            let walls = ctx.walls(&class.class, &model, !no_prune)?;
            walls_report(&class.class, ctx.config, &walls, !no_prune)?
        }
        Command::Chambers(a) => {
            let model = ctx.model()?;
            let walls = ctx.walls(&a.class, &model, true)?;
            let report = chamber_decomposition(&a.class, &walls, &ctx.config.window, &model)?;
            chambers_report(&report)?
        }
        Command::Ray { class, alpha } => {
            let line = ray_line(&class.class, &alpha)?;
            let [a, b, c] = line.coefficients();
            Report::new(line.to_string(), to_json(&line)?, Table::new(["A", "B", "C"]).row([a, b, c].map(|x| x.to_string())))
        }
        Command::Feasible(a) => {
            let verdict = bogomolov_verdict(&a.class, g);
            Report::scalar("verdict", verdict.to_string(), &verdict)?
        }
        Command::Classify { z1, z2, z3, lifts, flags } => {
            let mut data = ChargeData::new(z1, z2, z3).with_flags(flags);
            if let Some(l) = lifts {
                data.lifts = l;
            }
            let res = classify_regions(&data, &ctx.model()?, ctx.config.tol);
            classify_report(&res)?
        }
        Command::Glue(p) => {
            let el = gluing_presentation(&p.point)?;
            #[derive(Serialize)]
            struct Glue<'a> {
                element: &'a cswalls_core::GLElement,
                f0: f64,
            }
            let inv = el.inverse_matrix();
            let text = format!(
                "M^-1 = [[{}, {}], [{}, {}]]\nwinding {}\nf(0) = {}",
                inv[0][0],
                inv[0][1],
                inv[1][0],
                inv[1][1],
                el.winding(),
                el.f0()
            );
            let m = el.matrix();
            let csv = Table::new(["m11", "m12", "m21", "m22", "winding", "f0"]).row([
                m[0][0].to_string(),
                m[0][1].to_string(),
                m[1][0].to_string(),
                m[1][1].to_string(),
                el.winding().to_string(),
                el.f0().to_string(),
            ]);
            Report::new(text, to_json(&Glue { element: &el, f0: el.f0() })?, csv)
        }
        Command::Plot { class, out } => {
            let model = ctx.model()?;
            let walls = ctx.walls(&class.class, &model, true)?;
            let window = &ctx.config.window;
            return match out {
                Some(path) => {
                    svg::write_svg(&path, &class.class, &walls, window, &model)?;
                    Ok(Output::Raw(format!("wrote {}\n", path.display())))
                }
                None => Ok(Output::Raw(svg::render_svg(&class.class, &walls, window, &model))),
            };
        }
    };
    Ok(Output::Report(report))
}

fn bn_at(model: &BNModel, x: &cswalls_core::Rational) -> Result<Report, CliError> {
    let (lo, hi) = (model.lower_at(x), model.upper_at(x));
    #[derive(Serialize)]
    struct At {
        model: String,
        x: String,
        lower: String,
        upper: String,
    }
    let json = At { model: model.name.clone(), x: x.to_string(), lower: lo.to_string(), upper: hi.to_string() };
    let text = format!("lower {lo}\nupper {hi}");
    let csv = Table::new(["x", "lower", "upper"]).row([x.to_string(), lo.to_string(), hi.to_string()]);
    Ok(Report::new(text, to_json(&json)?, csv))
}

fn pieces_text(name: &str, f: &PLFunction, text: &mut String, csv: &mut Table) {
    for p in f.pieces() {
        let point = p.point.as_ref().map(|x| x.to_string()).unwrap_or_default();
        text.push_str(&format!("  {name}: from {} slope {} value {}", p.at, p.slope, p.value));
        if !point.is_empty() {
            text.push_str(&format!(" (value {point} at the breakpoint)"));
        }
        text.push('\n');
        csv.push([name.to_string(), p.at.to_string(), p.slope.to_string(), p.value.to_string(), point]);
    }
}

fn bn_model(model: &BNModel) -> Result<Report, CliError> {
    let mut text = format!(
        "model {} for genus {} ({})\n",
        model.name,
        model.genus,
        if model.exact { "exact" } else { "bounds only" }
    );
    let mut csv = Table::new(["envelope", "at", "slope", "value", "point"]);
    pieces_text("lower", &model.lower, &mut text, &mut csv);
    pieces_text("upper", &model.upper, &mut text, &mut csv);
    Ok(Report::new(text, to_json(model)?, csv))
}

fn join_classes(vs: &[NumClass]) -> String {
    vs.iter().map(NumClass::to_string).collect::<Vec<_>>().join(";")
}

fn walls_report(v: &NumClass, cfg: &Config, walls: &[Wall], pruned: bool) -> Result<Report, CliError> {
    let mut text = format!(
        "class {v}, genus {}, model {}, window {}, rank bound {}{}: {} wall(s)\n",
        cfg.genus,
        cfg.model,
        cfg.window,
        cfg.rank_bound,
        if pruned { "" } else { ", unpruned" },
        walls.len()
    );
    let mut csv = Table::new([
        "nu", "A", "B", "C", "b_start", "w_start", "b_end", "w_end", "destabilizers", "im_positive", "q_nonneg",
        "feasibility", "region", "start_end", "stop_end",
    ]);
    for w in walls {
        let [p, q] = &w.segment;
        let vd = &w.verdicts;
        text.push_str(&format!(
            "nu {}  {}  from ({p}) to ({q})  by {}  [q {:?}, feasibility {:?}, region {:?}]\n",
            w.nu,
            w.line,
            join_classes(&w.destabilizers),
            vd.q_nonneg,
            vd.feasibility,
            vd.region
        ));
        let [a, b, c] = w.line.coefficients();
        let end = |e| to_json(&e).map(|s| s.trim_matches('"').to_string());
        csv.push([
            w.nu.to_string(),
            a.to_string(),
            b.to_string(),
            c.to_string(),
            p.b.to_string(),
            p.w.to_string(),
            q.b.to_string(),
            q.w.to_string(),
            join_classes(&w.destabilizers),
            format!("{:?}", vd.im_positive),
            format!("{:?}", vd.q_nonneg),
            format!("{:?}", vd.feasibility),
            format!("{:?}", vd.region),
            end(w.ends[0])?,
            end(w.ends[1])?,
        ]);
    }
    Ok(Report::new(text, to_json(walls)?, csv))
}

fn chambers_report(report: &cswalls_core::walls::ChamberReport) -> Result<Report, CliError> {
    let mut text = format!("class {}: {} chamber(s)", report.owner, report.chambers.len());
    if let Some(apex) = &report.apex {
        text.push_str(&format!(", walls meet at ({apex})"));
    }
    text.push('\n');
    let mut csv = Table::new(["index", "kind", "bounds", "meets_window", "sample", "region"]);
    for (i, c) in report.chambers.iter().enumerate() {
        let (kind, bounds) = match &c.bounds {
            ChamberBounds::Whole => ("whole", "the whole plane".to_string()),
            ChamberBounds::Sector { from, to } => ("sector", format!("directions ({from}) to ({to})")),
            ChamberBounds::Strip { slope, below, above } => {
                let show = |x: &Option<cswalls_core::rational::RatJson>, inf: &str| {
                    x.as_ref().map(|r| r.0.to_string()).unwrap_or_else(|| inf.to_string())
                };
                ("strip", format!("{} < w - ({})*b < {}", show(below, "-inf"), slope.0, show(above, "inf")))
            }
        };
        let sample = c.sample.as_ref().map(|p| p.to_string()).unwrap_or_default();
        let region = c.region.map(|m| m.to_string()).unwrap_or_default();
        text.push_str(&format!(
            "{i}: {kind} {bounds}{}{}\n",
            if c.meets_window { format!(", sample ({sample})") } else { ", outside the window".to_string() },
            if region.is_empty() { String::new() } else { format!(", region {region}") }
        ));
        csv.push([i.to_string(), kind.to_string(), bounds, c.meets_window.to_string(), sample, region]);
    }
    Ok(Report::new(text, to_json(report)?, csv))
}

fn classify_report(res: &cswalls_core::ClassificationResult) -> Result<Report, CliError> {
    let mut text = format!("in_UA {:?}\nin_UB {:?}\n", res.in_ua, res.in_ub);
    let (point, region) = match &res.typeb {
        Some(t) => (t.point.to_string(), t.region.to_string()),
        None => (String::new(), String::new()),
    };
    if let Some(t) = &res.typeb {
        text.push_str(&format!("type B point ({}) region {}\n", t.point, t.region));
    }
    let branch = res.second_branch.map(|b| format!("{b:?}")).unwrap_or_default();
    if !branch.is_empty() {
        text.push_str(&format!("gluing branch {branch}\n"));
    }
    for n in &res.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    let csv = Table::new(["in_ua", "in_ub", "typeb_point", "typeb_region", "second_branch", "notes"]).row([
        format!("{:?}", res.in_ua),
        format!("{:?}", res.in_ub),
        point,
        region,
        branch,
        res.notes.join(" | "),
    ]);
    Ok(Report::new(text, to_json(res)?, csv))
}
