//! Which open region of the stability manifold a set of charge data lies in,
//! conditional on caller-asserted stability of the distinguished objects.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bnfunction::{region_uc, BNModel, Membership};
use crate::charge::{normalize_typeb, ChargeData, Flag, PlanePoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
    Insufficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Gl1,
    Gl2,
    Inconsistent,
    Insufficient,
}

/// Outcome of a strict chain of inequalities tested with a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenCheck {
    pub holds: bool,
    /// Smallest slack among the inequalities; the check holds when it exceeds the tolerance.
    pub margin: f64,
    pub note: Option<String>,
}

impl OpenCheck {
    fn from_margin(margin: f64, tol: f64, what: &str) -> OpenCheck {
        let note = (margin.abs() <= tol).then(|| format!("{what}: boundary within tolerance (margin {margin:e})"));
        OpenCheck { holds: margin > tol, margin, note }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeB {
    pub point: PlanePoint,
    pub region: Membership,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    pub ua: Option<f64>,
    pub ub: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub in_ua: Answer,
    pub in_ub: Answer,
    pub typeb: Option<TypeB>,
    pub second_branch: Option<Branch>,
    pub margins: Margins,
    pub notes: Vec<String>,
}

/// `φ1 − 1 < φ3 < φ2 < φ3 + 1`, each with slack above `tol`.
pub fn in_ua(lifts: [f64; 3], tol: f64) -> OpenCheck {
    let [p1, p2, p3] = lifts;
    let margin = (p3 - (p1 - 1.0)).min(p2 - p3).min(p3 + 1.0 - p2);
    OpenCheck::from_margin(margin, tol, "U_A")
}

fn all_lifts(c: &ChargeData) -> Option<[f64; 3]> {
    match c.lifts {
        [Some(a), Some(b), Some(d)] => Some([a, b, d]),
        _ => None,
    }
}

pub fn classify_regions(c: &ChargeData, model: &BNModel, tol: f64) -> ClassificationResult {
    let mut notes = Vec::new();
    let consistent = match c.validate(tol) {
        Ok(()) => true,
        Err(e) => {
            notes.push(format!("charge data rejected: {e}"));
            false
        }
    };

    let mut margins = Margins { ua: None, ub: None };
    let ua_flags = [Flag::StableO0, Flag::StablePt, Flag::StableSheafO].iter().all(|f| c.has(*f));
    let in_ua_answer = match all_lifts(c) {
        Some(lifts) if ua_flags => {
            let check = in_ua(lifts, tol);
            margins.ua = Some(check.margin);
            notes.extend(check.note);
            if check.holds && consistent {
                Answer::Yes
            } else {
                Answer::No
            }
        }
        _ => Answer::Insufficient,
    };

    let ub_flags = c.has(Flag::StableO0) && c.has(Flag::StablePt);
    let mut typeb = None;
    let in_ub_answer = match (c.lifts[0], c.lifts[1]) {
        (Some(p1), Some(p2)) if ub_flags => {
            // The normalized model has φ1 − φ2 = 1/2; the group action keeps the gap in (0, 1).
            let gap = p1 - p2;
            let check = OpenCheck::from_margin(gap.min(1.0 - gap), tol, "U_B phase order");
            margins.ub = Some(check.margin);
            notes.extend(check.note);
            if !check.holds {
                if gap >= 1.0 - tol {
                    notes.push("U_B: phase gap between [O->0] and the skyscraper is at least 1".into());
                }
                Answer::No
            } else if !consistent {
                Answer::No
            } else {
                match normalize_typeb(c) {
                    Ok(point) => {
                        let region = region_uc(&point, model);
                        typeb = Some(TypeB { point, region });
                        Answer::Yes
                    }
                    Err(Error::DegenerateFrame) => {
                        notes.push(
                            "U_B: z1 and z2 are collinear; such data arises only as a limit of type A data".into(),
                        );
                        Answer::No
                    }
                    Err(e) => {
                        notes.push(format!("U_B: {e}"));
                        Answer::No
                    }
                }
            }
        }
        _ => Answer::Insufficient,
    };

    let second_branch = if c.has(Flag::StableSheafO) && c.has(Flag::StablePt) {
        match second_gluing_branch(c, tol) {
            Ok(b) => Some(b),
            Err(e) => {
                notes.push(format!("second gluing branch: {e}"));
                None
            }
        }
    } else {
        None
    };

    ClassificationResult { in_ua: in_ua_answer, in_ub: in_ub_answer, typeb, second_branch, margins, notes }
}

/// Decides between the two gluing forms when `j_*O` and the skyscraper are stable.
///
/// With `[O→0]` stable the first form applies. Otherwise, with `[O→O]` stable,
/// phases are rotated so that `[O→O]` has phase 1, and the second form needs
/// `φ3 ≤ 0` and `φ3 < φ2 < φ3 + 1 ≤ 1`.
pub fn second_gluing_branch(c: &ChargeData, tol: f64) -> Result<Branch> {
    let (Some(p2), Some(p3)) = (c.lifts[1], c.lifts[2]) else {
        return Ok(Branch::Insufficient);
    };
    if !(c.has(Flag::StableSheafO) && c.has(Flag::StablePt)) {
        return Ok(Branch::Insufficient);
    }
    if c.has(Flag::StableO0) {
        return Ok(Branch::Gl1);
    }
    if !c.has(Flag::StableOO) {
        return Ok(Branch::Insufficient);
    }
    let z = c.z_oo();
    if z.is_zero() {
        return Err(Error::ZeroCharge);
    }
    // The lift of (1,0,1) in (φ3, φ3 + 2].
    let a = z.arg_over_pi();
    let p_oo = a + 2.0 * ((p3 + 2.0 - a) / 2.0).floor();
    let shift = 1.0 - p_oo;
    let (q2, q3) = (p2 + shift, p3 + shift);
    let ok = q3 <= tol && q2 - q3 > tol && q3 + 1.0 - q2 > tol && q3 + 1.0 <= 1.0 + tol;
    Ok(if ok { Branch::Gl2 } else { Branch::Inconsistent })
}

/// Phase of `z` in `(−1, 1]`, for building test data.
pub fn principal_phase(re: f64, im: f64) -> f64 {
    im.atan2(re) / PI
}
