//! Walls for a fixed class in the `(b, w)`-slice.
//!
//! For a class `v` and a candidate subobject class `v'`, the locus where
//! `ν(v) = ν(v')` is a rational line; for `r(v) ≠ 0` every such line passes
//! through `Π(v)`, and for `r(v) = 0` they are all parallel of slope `n/d`.

mod chambers;
mod enumerate;
mod geometry;
mod support;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bnfunction::region_uf;
use crate::numgro::{project, Genus, NumClass};

pub use chambers::{chamber_decomposition, Chamber, ChamberBounds, ChamberReport};
pub use enumerate::{enumerate_walls, enumerate_walls_with, EndKind, EnumerateOptions, Verdict, Verdicts, Wall};
pub use geometry::{ray_line, wall_line, RationalLine, WallLine, Window};
pub use support::{certify, find_delta, support_form_value, Certificate, PointCheck, SpanCheck, SupportForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BogomolovVerdict {
    Excluded,
    NotExcluded,
    Inapplicable,
}

impl fmt::Display for BogomolovVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BogomolovVerdict::Excluded => "Excluded",
            BogomolovVerdict::NotExcluded => "NotExcluded",
            BogomolovVerdict::Inapplicable => "Inapplicable",
        })
    }
}

/// `Excluded` when `Π(v)` lies in the region above the four-piece bound: then
/// no object of class `v` is semistable anywhere in that region, and no
/// `μ_α`-semistable object of class `v` exists.
pub fn bogomolov_verdict(v: &NumClass, g: Genus) -> BogomolovVerdict {
    if v.r.is_zero() || g.get() <= 3 {
        return BogomolovVerdict::Inapplicable;
    }
    let p = project(v).expect("rank is nonzero");
    match region_uf(&p, g) {
        Ok(true) => BogomolovVerdict::Excluded,
        _ => BogomolovVerdict::NotExcluded,
    }
}
