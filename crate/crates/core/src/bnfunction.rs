//! Brill–Noether envelopes and membership in the regions above them.
//!
//! The Brill–Noether function of a general curve is not known exactly, so a
//! [`BNModel`] carries a lower and an upper piecewise-linear envelope and the
//! region test answers `In`, `Out`, or `Unknown`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charge::PlanePoint;
use crate::error::{Error, Result};
use crate::numgro::Genus;
use crate::piecewise::{PLFunction, Piece};
use crate::rational::{int, Rational};

/// Clifford-type upper bound: `0` for `x < 0`, `x/2 + 1` on `[0, 2g − 2]`, `x + 1 − g` beyond.
pub fn general_upper(x: &Rational, g: Genus) -> Rational {
    let gq = g.rational();
    let top = int(2) * (&gq - int(1));
    if x < &Rational::zero() {
        Rational::zero()
    } else if x > &top {
        x + int(1) - gq
    } else if g.get() == 1 {
        Rational::one()
    } else {
        x / int(2) + int(1)
    }
}

/// Riemann–Roch lower bound: `0` for `x < 0`, `max(0, x + 1 − g)` for `x ≥ 0`.
pub fn lower_envelope(x: &Rational, g: Genus) -> Rational {
    if x < &Rational::zero() {
        return Rational::zero();
    }
    let rr = x + int(1) - g.rational();
    rr.max(Rational::zero())
}

/// Breakpoints `2 + 2/(g−2)`, `2g − 4 − 2/(g−2)`, `3g − 3` of the four-piece bound.
pub fn mercat_breakpoints(g: Genus) -> Result<[Rational; 3]> {
    require_mercat_genus(g)?;
    let gq = g.rational();
    let t = int(2) / (&gq - int(2));
    Ok([int(2) + &t, int(2) * &gq - int(4) - &t, int(3) * &gq - int(3)])
}

fn require_mercat_genus(g: Genus) -> Result<()> {
    if g.get() < 4 {
        return Err(Error::GenusOutOfRange { got: g.get(), need: "g >= 4" });
    }
    Ok(())
}

/// The four-piece bound `f(b)` for curves of first Clifford index at least two,
/// defined for `b > 0`. The Clifford-index hypothesis is the caller's to check.
pub fn mercat_upper(x: &Rational, g: Genus) -> Result<Rational> {
    let [b1, b2, b3] = mercat_breakpoints(g)?;
    if x <= &Rational::zero() {
        return Err(Error::DomainError(format!("the four-piece bound is defined for b > 0, got {x}")));
    }
    let gq = g.rational();
    let inv = Rational::one() / &gq;
    Ok(if x < &b1 {
        &inv * x + int(1) - &inv
    } else if x < &b2 {
        x / int(2)
    } else if x < &b3 {
        (int(1) - &inv) * x + int(4) - &gq - int(3) * &inv
    } else {
        x + int(1) - gq
    })
}

/// Slopes of the four pieces, in order.
pub fn mercat_slopes(g: Genus) -> Result<[Rational; 4]> {
    require_mercat_genus(g)?;
    let inv = Rational::one() / g.rational();
    Ok([inv.clone(), Rational::new(1.into(), 2.into()), int(1) - inv, int(1)])
}

pub fn general_upper_pl(g: Genus) -> PLFunction {
    let gq = g.rational();
    let pieces = if g.get() == 1 {
        vec![Piece::new(int(-1), int(0), int(0)), Piece::new(int(0), int(1), int(0)).with_point(int(1))]
    } else {
        let top = int(2) * (&gq - int(1));
        vec![
            Piece::new(int(-1), int(0), int(0)),
            Piece::new(int(0), Rational::new(1.into(), 2.into()), int(1)),
            Piece::new(top, int(1), &gq - int(1)).with_point(gq),
        ]
    };
    PLFunction::new(pieces).expect("static breakpoints are ordered")
}

pub fn lower_pl(g: Genus) -> PLFunction {
    let gq = g.rational();
    let mut pieces = vec![Piece::new(int(-1), int(0), int(0))];
    pieces.push(Piece::new(gq - int(1), int(1), int(0)));
    PLFunction::new(pieces).expect("static breakpoints are ordered")
}

/// The four-piece bound on `b > 0`, glued to the Clifford bound on `b ≤ 0`.
pub fn mercat_pl(g: Genus) -> Result<PLFunction> {
    let [b1, b2, b3] = mercat_breakpoints(g)?;
    let [s0, s1, s2, s3] = mercat_slopes(g)?;
    let at_zero = Rational::one() - Rational::one() / g.rational();
    let mut pieces = vec![Piece::new(int(-1), int(0), int(0)), Piece::new(int(0), s0, at_zero).with_point(int(1))];
    for (b, s) in [(b1, s1), (b2, s2), (b3, s3)] {
        let v = mercat_upper(&b, g)?;
        // At g = 4 the middle piece has zero length.
        if pieces.last().is_some_and(|p| p.at == b) {
            pieces.pop();
        }
        pieces.push(Piece::new(b, s, v));
    }
    PLFunction::new(pieces)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    General,
    Mercat,
    Elliptic,
    User,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::General => "general",
            ModelKind::Mercat => "mercat",
            ModelKind::Elliptic => "elliptic",
            ModelKind::User => "user",
        })
    }
}

/// Caller-supplied envelopes, the JSON document accepted for user models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserEnvelopes {
    pub lower: PLFunction,
    pub upper: PLFunction,
    #[serde(default)]
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BNModel {
    pub name: String,
    pub genus: Genus,
    pub exact: bool,
    pub lower: PLFunction,
    pub upper: PLFunction,
}

impl BNModel {
    /// Checks ordering of the envelopes, exactness, and the forced tails.
    pub fn validate(&self) -> Result<()> {
        if !self.upper.dominates(&self.lower) {
            return Err(Error::InvalidEnvelope("lower envelope exceeds upper envelope somewhere".into()));
        }
        if self.exact && !self.upper.pointwise_eq(&self.lower) {
            return Err(Error::InvalidEnvelope("model marked exact but envelopes differ".into()));
        }
        let gq = self.genus.rational();
        let top = int(2) * (&gq - int(1));
        for (label, f) in [("lower", &self.lower), ("upper", &self.upper)] {
            if !f.agrees_with_line_on(None, Some(&Rational::zero()), &int(0), &int(0)) {
                return Err(Error::InvalidEnvelope(format!("{label} envelope must vanish for x < 0")));
            }
            if !f.agrees_with_line_on(Some(&top), None, &int(1), &(int(1) - &gq)) {
                return Err(Error::InvalidEnvelope(format!("{label} envelope must equal x + 1 - g for x > 2g - 2")));
            }
        }
        Ok(())
    }

    pub fn lower_at(&self, x: &Rational) -> Rational {
        self.lower.eval(x)
    }

    pub fn upper_at(&self, x: &Rational) -> Rational {
        self.upper.eval(x)
    }
}

pub fn make_model(kind: ModelKind, g: Genus, user: Option<UserEnvelopes>) -> Result<BNModel> {
    let model = match kind {
        ModelKind::General => BNModel {
            name: "general".into(),
            genus: g,
            exact: false,
            lower: lower_pl(g),
            upper: general_upper_pl(g),
        },
        ModelKind::Mercat => {
            let upper = general_upper_pl(g).pointwise_min(&mercat_pl(g)?);
            BNModel { name: "mercat".into(), genus: g, exact: false, lower: lower_pl(g), upper }
        }
        ModelKind::Elliptic => {
            if g.get() != 1 {
                return Err(Error::GenusOutOfRange { got: g.get(), need: "g = 1" });
            }
            let phi = general_upper_pl(g);
            BNModel { name: "elliptic".into(), genus: g, exact: true, lower: phi.clone(), upper: phi }
        }
        ModelKind::User => {
            let env = user.ok_or_else(|| Error::InvalidEnvelope("user model requires envelope data".into()))?;
            BNModel { name: "user".into(), genus: g, exact: env.exact, lower: env.lower, upper: env.upper }
        }
    };
    model.validate()?;
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::In => "In",
            Membership::Out => "Out",
            Membership::Unknown => "Unknown",
        })
    }
}

/// Membership of `p` in the region strictly above the Brill–Noether function.
pub fn region_uc(p: &PlanePoint, model: &BNModel) -> Membership {
    if p.w > model.upper_at(&p.b) {
        Membership::In
    } else if p.w <= model.lower_at(&p.b) {
        Membership::Out
    } else {
        Membership::Unknown
    }
}

/// Membership in the convex region `{b > 0, w > f(b)}` cut out by the four-piece bound.
pub fn region_uf(p: &PlanePoint, g: Genus) -> Result<bool> {
    require_mercat_genus(g)?;
    if p.b <= Rational::zero() {
        return Ok(false);
    }
    Ok(p.w > mercat_upper(&p.b, g)?)
}
