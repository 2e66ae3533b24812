//! Central charges on the `(b, w)`-slice, slope functions, phases, and the
//! action of the universal cover of `GL⁺(2, R)` on charge data.
//!
//! A covering element `(M, f)` satisfies `M·u(πφ) ∈ R₊·u(π f(φ))`, where
//! `u(θ) = (cos θ, sin θ)`. It acts on a charge by `Z ↦ M⁻¹·Z` and on phases
//! by `φ ↦ f⁻¹(φ)`.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numgro::NumClass;
use crate::rational::{from_big, int, to_f64, RatJson, Rational, Slope};

/// A point `(b, w)` of the slice; serialized as `["b", "w"]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    pub b: Rational,
    pub w: Rational,
}

impl PlanePoint {
    pub fn new(b: Rational, w: Rational) -> PlanePoint {
        PlanePoint { b, w }
    }

    /// Parses `b,w`.
    pub fn parse(s: &str) -> Result<PlanePoint> {
        let (b, w) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected b,w, got {s:?}")))?;
        Ok(PlanePoint { b: crate::rational::parse_rational(b)?, w: crate::rational::parse_rational(w)? })
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.b, self.w)
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (RatJson(self.b.clone()), RatJson(self.w.clone())).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlanePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (b, w) = <(RatJson, RatJson)>::deserialize(d)?;
        Ok(PlanePoint { b: b.0, w: w.0 })
    }
}

/// An exact complex number; serialized as `["re", "im"]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> ComplexRational {
        ComplexRational { re, im }
    }

    pub fn zero() -> ComplexRational {
        ComplexRational::new(Rational::zero(), Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> ComplexRational {
        ComplexRational::new(&self.re * k, &self.im * k)
    }

    /// `arg(z)/π` in `(−1, 1]`; exact at the axes.
    pub fn arg_over_pi(&self) -> f64 {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) if self.re.is_negative() => 1.0,
            (_, true) => 0.0,
            (true, false) => {
                if self.im.is_positive() {
                    0.5
                } else {
                    -0.5
                }
            }
            _ => to_f64(&self.im).atan2(to_f64(&self.re)) / PI,
        }
    }

    /// Parses `re,im`.
    pub fn parse(s: &str) -> Result<ComplexRational> {
        let p = PlanePoint::parse(s)?;
        Ok(ComplexRational::new(p.b, p.w))
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.re, self.im)
    }
}

impl Add for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, o: &ComplexRational) -> ComplexRational {
        ComplexRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &ComplexRational {
    type Output = ComplexRational;
    fn sub(self, o: &ComplexRational) -> ComplexRational {
        ComplexRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational::new(-&self.re, -&self.im)
    }
}

impl Serialize for ComplexRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (RatJson(self.re.clone()), RatJson(self.im.clone())).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (re, im) = <(RatJson, RatJson)>::deserialize(d)?;
        Ok(ComplexRational::new(re.0, im.0))
    }
}

pub type Matrix2 = [[Rational; 2]; 2];

pub fn det2(m: &Matrix2) -> Rational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn inverse2(m: &Matrix2) -> Option<Matrix2> {
    let det = det2(m);
    if det.is_zero() {
        return None;
    }
    Some([
        [&m[1][1] / &det, -&m[0][1] / &det],
        [-&m[1][0] / &det, &m[0][0] / &det],
    ])
}

pub fn apply2(m: &Matrix2, z: &ComplexRational) -> ComplexRational {
    ComplexRational::new(&m[0][0] * &z.re + &m[0][1] * &z.im, &m[1][0] * &z.re + &m[1][1] * &z.im)
}

pub fn mul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// An element of the universal cover of `GL⁺(2, R)` with rational matrix part.
///
/// The lift is recorded through `winding`: `f(0) = atan2(m21, m11)/π + 2·winding`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLElement {
    m: Matrix2,
    winding: i64,
}

#[derive(Serialize, Deserialize)]
struct GLElementJson {
    m: [[RatJson; 2]; 2],
    winding: i64,
}

impl Serialize for GLElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = |i: usize, j: usize| RatJson(self.m[i][j].clone());
        GLElementJson { m: [[r(0, 0), r(0, 1)], [r(1, 0), r(1, 1)]], winding: self.winding }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GLElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GLElementJson::deserialize(d)?;
        let [[a, b], [c, e]] = j.m;
        GLElement::new([[a.0, b.0], [c.0, e.0]], j.winding).map_err(serde::de::Error::custom)
    }
}

impl GLElement {
    pub fn new(m: Matrix2, winding: i64) -> Result<GLElement> {
        if !det2(&m).is_positive() {
            return Err(Error::NonPositiveDeterminant);
        }
        Ok(GLElement { m, winding })
    }

    pub fn identity() -> GLElement {
        GLElement { m: [[int(1), int(0)], [int(0), int(1)]], winding: 0 }
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn inverse_matrix(&self) -> Matrix2 {
        inverse2(&self.m).expect("determinant is positive")
    }

    /// The lift value `f(0)`.
    pub fn f0(&self) -> f64 {
        ComplexRational::new(self.m[0][0].clone(), self.m[1][0].clone()).arg_over_pi() + 2.0 * self.winding as f64
    }

    /// `f(0) < 1/2`, decided from signs of the first column and the winding.
    pub fn f0_below_half(&self) -> bool {
        let (m11, m21) = (&self.m[0][0], &self.m[1][0]);
        self.winding < 0 || (self.winding == 0 && !(!m11.is_positive() && !m21.is_negative()))
    }

    /// `0 < f(0) < 1/2`, decided exactly.
    pub fn f0_in_open_quarter(&self) -> bool {
        self.winding == 0 && self.m[0][0].is_positive() && self.m[1][0].is_positive()
    }

    /// The circle map `f`, continuous with `f(φ + 1) = f(φ) + 1`.
    pub fn lift(&self, phi: f64) -> f64 {
        let target = phi + self.f0();
        let (c, s) = ((PI * phi).cos(), (PI * phi).sin());
        let m = self.float_matrix();
        let image = (m[1][0] * c + m[1][1] * s).atan2(m[0][0] * c + m[0][1] * s) / PI;
        nearest_branch(image, target)
    }

    /// The inverse circle map `f⁻¹`.
    pub fn unlift(&self, psi: f64) -> f64 {
        let target = psi - self.f0();
        let (c, s) = ((PI * psi).cos(), (PI * psi).sin());
        let inv = self.inverse_matrix();
        let m = [[to_f64(&inv[0][0]), to_f64(&inv[0][1])], [to_f64(&inv[1][0]), to_f64(&inv[1][1])]];
        let image = (m[1][0] * c + m[1][1] * s).atan2(m[0][0] * c + m[0][1] * s) / PI;
        nearest_branch(image, target)
    }

    fn float_matrix(&self) -> [[f64; 2]; 2] {
        [[to_f64(&self.m[0][0]), to_f64(&self.m[0][1])], [to_f64(&self.m[1][0]), to_f64(&self.m[1][1])]]
    }
}

/// The representative of `angle + 2ℤ` closest to `target`.
fn nearest_branch(angle: f64, target: f64) -> f64 {
    angle + 2.0 * ((target - angle) / 2.0).round()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Flag {
    #[serde(rename = "stable_O0")]
    StableO0,
    #[serde(rename = "stable_pt")]
    StablePt,
    #[serde(rename = "stable_sheafO")]
    StableSheafO,
    #[serde(rename = "stable_OO")]
    StableOO,
}

impl Flag {
    pub const ALL: [Flag; 4] = [Flag::StableO0, Flag::StablePt, Flag::StableSheafO, Flag::StableOO];

    pub fn name(self) -> &'static str {
        match self {
            Flag::StableO0 => "stable_O0",
            Flag::StablePt => "stable_pt",
            Flag::StableSheafO => "stable_sheafO",
            Flag::StableOO => "stable_OO",
        }
    }

    pub fn parse(s: &str) -> Result<Flag> {
        Flag::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown flag {s:?}")))
    }
}

/// Values of a charge on `(0,0,1)`, `(0,1,0)`, `(1,0,0)`, optional phase lifts
/// for them, and caller-asserted stability of the distinguished objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeData {
    pub z1: ComplexRational,
    pub z2: ComplexRational,
    pub z3: ComplexRational,
    #[serde(default)]
    pub lifts: [Option<f64>; 3],
    #[serde(default)]
    pub flags: BTreeSet<Flag>,
}

impl ChargeData {
    pub fn new(z1: ComplexRational, z2: ComplexRational, z3: ComplexRational) -> ChargeData {
        ChargeData { z1, z2, z3, lifts: [None; 3], flags: BTreeSet::new() }
    }

    pub fn with_lifts(mut self, lifts: [f64; 3]) -> ChargeData {
        self.lifts = lifts.map(Some);
        self
    }

    pub fn with_flags(mut self, flags: impl IntoIterator<Item = Flag>) -> ChargeData {
        self.flags.extend(flags);
        self
    }

    pub fn has(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn z(&self, i: usize) -> &ComplexRational {
        [&self.z1, &self.z2, &self.z3][i]
    }

    /// Charge of `(1,0,1) = (0,0,1) + (1,0,0)`.
    pub fn z_oo(&self) -> ComplexRational {
        &self.z1 + &self.z3
    }

    /// Checks that referenced charges are nonzero and that lifts match their directions.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let referenced = [
            self.lifts[0].is_some() || self.has(Flag::StableO0),
            self.lifts[1].is_some() || self.has(Flag::StablePt),
            self.lifts[2].is_some() || self.has(Flag::StableSheafO),
        ];
        for (i, used) in referenced.iter().enumerate() {
            if *used && self.z(i).is_zero() {
                return Err(Error::ZeroCharge);
            }
        }
        if self.has(Flag::StableOO) && self.z_oo().is_zero() {
            return Err(Error::ZeroCharge);
        }
        for (i, lift) in self.lifts.iter().enumerate() {
            if let Some(phi) = lift {
                if !lift_matches(self.z(i), *phi, tol) {
                    return Err(Error::InconsistentLift { index: i + 1 });
                }
            }
        }
        Ok(())
    }
}

/// Whether `phi` is a phase of `z`, up to `tol`.
pub fn lift_matches(z: &ComplexRational, phi: f64, tol: f64) -> bool {
    if z.is_zero() || !phi.is_finite() {
        return false;
    }
    let a = z.arg_over_pi();
    (nearest_branch(a, phi) - phi).abs() <= tol.max(1e-12)
}

/// `Z_{b,w}(v) = (−n + w·r) + i·(d − b·r)`.
pub fn central_charge(v: &NumClass, p: &PlanePoint) -> ComplexRational {
    let (r, d, n) = (from_big(&v.r), from_big(&v.d), from_big(&v.n));
    ComplexRational::new(-n + &p.w * &r, d - &p.b * r)
}

/// `ν_{b,w}(v) = (n − w·r)/(d − b·r)`, infinite where the denominator vanishes.
pub fn nu(v: &NumClass, p: &PlanePoint) -> Slope {
    let z = central_charge(v, p);
    Slope::ratio(-z.re, z.im)
}

/// `μ_α(v) = d/r + α·n/r`, infinite for torsion classes.
pub fn mu_alpha(v: &NumClass, alpha: &Rational) -> Result<Slope> {
    if alpha.is_negative() {
        return Err(Error::NegativeAlpha(alpha.to_string()));
    }
    if v.r.is_zero() {
        return Ok(Slope::Infinite);
    }
    let r = from_big(&v.r);
    Ok(Slope::Finite((from_big(&v.d) + alpha * from_big(&v.n)) / r))
}

/// Phase in `(0, 1]` of a charge in the upper half plane or on the negative real axis.
pub fn heart_phase(v: &NumClass, p: &PlanePoint) -> Result<f64> {
    phase_of(&central_charge(v, p))
}

pub fn phase_of(z: &ComplexRational) -> Result<f64> {
    if z.is_zero() {
        return Err(Error::ZeroCharge);
    }
    if z.im.is_negative() || (z.im.is_zero() && z.re.is_positive()) {
        return Err(Error::LowerHalfPlane);
    }
    Ok(z.arg_over_pi())
}

/// Applies a covering element: charges by `M⁻¹`, lifts by `f⁻¹`.
pub fn gl_act(c: &ChargeData, g: &GLElement) -> ChargeData {
    let inv = g.inverse_matrix();
    ChargeData {
        z1: apply2(&inv, &c.z1),
        z2: apply2(&inv, &c.z2),
        z3: apply2(&inv, &c.z3),
        lifts: c.lifts.map(|l| l.map(|phi| g.unlift(phi))),
        flags: c.flags.clone(),
    }
}

/// Charges of the basis classes under `Z_{b,w}`: `(−1, i, w − i·b)`.
pub fn typeb_charge_triple(p: &PlanePoint) -> ChargeData {
    ChargeData::new(
        ComplexRational::new(int(-1), int(0)),
        ComplexRational::new(int(0), int(1)),
        ComplexRational::new(p.w.clone(), -&p.b),
    )
}

/// Recovers `(b, w)` from charge data by the unique orientation-preserving
/// normalization sending `z1 ↦ −1` and `z2 ↦ i`.
pub fn normalize_typeb(c: &ChargeData) -> Result<PlanePoint> {
    let frame: Matrix2 = [[c.z1.re.clone(), c.z2.re.clone()], [c.z1.im.clone(), c.z2.im.clone()]];
    let det = det2(&frame);
    if det.is_zero() {
        return Err(Error::DegenerateFrame);
    }
    if det.is_positive() {
        return Err(Error::WrongOrientation);
    }
    let flip: Matrix2 = [[int(-1), int(0)], [int(0), int(1)]];
    let m = mul2(&flip, &inverse2(&frame).expect("nonzero determinant"));
    let image = apply2(&m, &c.z3);
    Ok(PlanePoint { b: -image.im, w: image.re })
}

/// The covering element whose inverse matrix sends `(−d, r)` to `(w·r, d − b·r)`,
/// with lift value `f(0) = atan2(1, −b)/π ∈ (0, 1/2)`.
pub fn gluing_presentation(p: &PlanePoint) -> Result<GLElement> {
    if !p.b.is_negative() || !p.w.is_positive() {
        return Err(Error::DomainError(format!("gluing presentation needs b < 0 and w > 0, got ({}, {})", p.b, p.w)));
    }
    // Images of (−d, r) for the classes (0,1,·) and (1,0,·) fix the two columns.
    let col_d = ComplexRational::new(int(0), int(1));
    let col_r = ComplexRational::new(p.w.clone(), -&p.b);
    let m_inv: Matrix2 = [[-&col_d.re, col_r.re.clone()], [-&col_d.im, col_r.im.clone()]];
    let m = inverse2(&m_inv).expect("determinant w is positive");
    GLElement::new(m, 0)
}

/// The glued sheaf-part charge `M⁻¹·(−d, r)` plus the section term `−n`.
pub fn glued_charge(v: &NumClass, g: &GLElement) -> ComplexRational {
    let inv = g.inverse_matrix();
    let sheaf = apply2(&inv, &ComplexRational::new(-from_big(&v.d), from_big(&v.r)));
    ComplexRational::new(sheaf.re - from_big(&v.n), sheaf.im)
}
