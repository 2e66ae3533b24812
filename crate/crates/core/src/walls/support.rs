use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::bnfunction::BNModel;
use crate::error::{Error, Result};
use crate::numgro::NumClass;
use crate::piecewise::PLFunction;
use crate::rational::{from_big, int, rat_str, Rational};

/// The quadratic form `Q(r,d,n) = δ⁻¹(d − b0·r)² + r²(w0 − δ) − n·r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportForm {
    #[serde(with = "rat_str")]
    pub b0: Rational,
    #[serde(with = "rat_str")]
    pub w0: Rational,
    #[serde(with = "rat_str")]
    pub delta: Rational,
}

impl SupportForm {
    pub fn new(b0: Rational, w0: Rational, delta: Rational) -> Result<SupportForm> {
        if !delta.is_positive() {
            return Err(Error::DomainError(format!("delta must be positive, got {delta}")));
        }
        Ok(SupportForm { b0, w0, delta })
    }

    /// `Q` on a class with rational coordinates, such as the kernel class `(1, b0, w0)`.
    pub fn value(&self, r: &Rational, d: &Rational, n: &Rational) -> Rational {
        let t = d - &self.b0 * r;
        &t * &t / &self.delta + r * r * (&self.w0 - &self.delta) - n * r
    }

    /// `δ⁻¹(x − b0)² + w0 − δ`, the parabola that must clear the upper envelope.
    pub fn parabola(&self, x: &Rational) -> Rational {
        let t = x - &self.b0;
        &t * &t / &self.delta + &self.w0 - &self.delta
    }
}

pub fn support_form_value(v: &NumClass, sf: &SupportForm) -> Rational {
    sf.value(&from_big(&v.r), &from_big(&v.d), &from_big(&v.n))
}

/// Minimum of `parabola − line` over the closure of one linear span of the envelope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCheck {
    #[serde(with = "opt_rat")]
    pub lo: Option<Rational>,
    #[serde(with = "opt_rat")]
    pub hi: Option<Rational>,
    #[serde(with = "rat_str")]
    pub argmin: Rational,
    #[serde(with = "rat_str")]
    pub margin: Rational,
}

/// `parabola − envelope` at a breakpoint, using the stored point value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCheck {
    #[serde(with = "rat_str")]
    pub x: Rational,
    #[serde(with = "rat_str")]
    pub margin: Rational,
}

/// Exact per-piece evidence that the parabola of a support form lies strictly
/// above an envelope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub spans: Vec<SpanCheck>,
    pub points: Vec<PointCheck>,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.spans.iter().all(|s| s.margin.is_positive()) && self.points.iter().all(|p| p.margin.is_positive())
    }
}

/// Builds the certificate of `sf` against `upper`.
///
/// On each span the difference is a convex quadratic; its minimum over the
/// closed span sits at the vertex `b0 + slope·δ/2` or at the nearer endpoint.
pub fn certify(sf: &SupportForm, upper: &PLFunction) -> Certificate {
    let spans = upper
        .spans()
        .into_iter()
        .map(|s| {
            let vertex = &sf.b0 + &s.slope * &sf.delta / int(2);
            let argmin = match (&s.lo, &s.hi) {
                (Some(lo), _) if vertex < *lo => lo.clone(),
                (_, Some(hi)) if vertex > *hi => hi.clone(),
                _ => vertex,
            };
            let margin = sf.parabola(&argmin) - s.eval(&argmin);
            SpanCheck { lo: s.lo, hi: s.hi, argmin, margin }
        })
        .collect();
    let points = upper
        .breakpoints()
        .map(|x| PointCheck { x: x.clone(), margin: sf.parabola(x) - upper.eval(x) })
        .collect();
    Certificate { spans, points }
}

const MAX_HALVINGS: u32 = 4096;

/// The largest `δ = (w0 − upper(b0))·2⁻ᵏ`, `k ≥ 1`, whose parabola clears the upper envelope.
pub fn find_delta(b0: &Rational, w0: &Rational, model: &BNModel) -> Result<(SupportForm, Certificate)> {
    let top = model.upper.limsup(b0);
    if *w0 <= top {
        return Err(Error::NotAboveEnvelope(b0.to_string(), w0.to_string()));
    }
    let mut delta = (w0 - &top) / int(2);
    for _ in 0..MAX_HALVINGS {
        let sf = SupportForm::new(b0.clone(), w0.clone(), delta.clone())?;
        let cert = certify(&sf, &model.upper);
        if cert.holds() {
            return Ok((sf, cert));
        }
        delta /= int(2);
    }
    Err(Error::DomainError(format!("no valid delta found at ({b0}, {w0})")))
}

mod opt_rat {
    use super::*;
    use serde::{Deserializer, Serializer};

    use crate::rational::RatJson;

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.clone().map(RatJson).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Ok(Option::<RatJson>::deserialize(d)?.map(|r| r.0))
    }
}
