use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charge::PlanePoint;
use crate::error::{Error, Result};
use crate::numgro::NumClass;
use crate::rational::{bigint_json, from_big, parse_rational, RatJson, Rational, Slope};

/// The line `A·b + B·w = C`, reduced so that `gcd(A, B, C) = 1` and the first
/// nonzero coefficient among `A`, `B` is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalLine {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl RationalLine {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<RationalLine> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::DomainError("a line needs (A, B) != (0, 0)".into()));
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(RationalLine { a, b, c })
    }

    /// Clears denominators of rational coefficients before reducing.
    pub fn from_rationals(a: &Rational, b: &Rational, c: &Rational) -> Result<RationalLine> {
        let l = a.denom().lcm(b.denom()).lcm(c.denom());
        let scale = |x: &Rational| x.numer() * (&l / x.denom());
        RationalLine::new(scale(a), scale(b), scale(c))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn coefficients(&self) -> [&BigInt; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `A·b + B·w − C`.
    pub fn residual(&self, p: &PlanePoint) -> Rational {
        from_big(&self.a) * &p.b + from_big(&self.b) * &p.w - from_big(&self.c)
    }

    pub fn contains(&self, p: &PlanePoint) -> bool {
        self.residual(p).is_zero()
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// Slope `dw/db = −A/B`, infinite for vertical lines.
    pub fn slope(&self) -> Slope {
        Slope::ratio(-from_big(&self.a), from_big(&self.b))
    }

    /// `(slope, intercept)` of `w = slope·b + intercept`, for non-vertical lines.
    pub fn as_graph(&self) -> Option<(Rational, Rational)> {
        if self.b.is_zero() {
            return None;
        }
        let bb = from_big(&self.b);
        Some((-from_big(&self.a) / &bb, from_big(&self.c) / bb))
    }

    pub fn w_at(&self, b: &Rational) -> Option<Rational> {
        self.as_graph().map(|(s, t)| s * b + t)
    }

    /// The unique common point, if the lines are not parallel.
    pub fn intersect(&self, other: &RationalLine) -> Option<PlanePoint> {
        let det = &self.a * &other.b - &self.b * &other.a;
        if det.is_zero() {
            return None;
        }
        let det = from_big(&det);
        let b = from_big(&(&self.c * &other.b - &self.b * &other.c)) / &det;
        let w = from_big(&(&self.a * &other.c - &self.c * &other.a)) / &det;
        Some(PlanePoint { b, w })
    }

    pub fn is_parallel(&self, other: &RationalLine) -> bool {
        (&self.a * &other.b - &self.b * &other.a).is_zero()
    }
}

impl fmt::Display for RationalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*b + {}*w = {}", self.a, self.b, self.c)
    }
}

#[derive(Serialize, Deserialize)]
struct LineJson(
    #[serde(with = "bigint_json")] BigInt,
    #[serde(with = "bigint_json")] BigInt,
    #[serde(with = "bigint_json")] BigInt,
);

impl Serialize for RationalLine {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LineJson(self.a.clone(), self.b.clone(), self.c.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalLine {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let LineJson(a, b, c) = LineJson::deserialize(d)?;
        let line = RationalLine::new(a.clone(), b.clone(), c.clone()).map_err(serde::de::Error::custom)?;
        if line.a != a || line.b != b || line.c != c {
            return Err(serde::de::Error::custom("line coefficients are not normalized"));
        }
        Ok(line)
    }
}

/// Outcome of comparing `ν` of two classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallLine {
    Line(RationalLine),
    NoWall,
    EverywhereEqual,
}

/// The locus where `ν(v) = ν(v')`, from cross-multiplying the two slopes.
pub fn wall_line(v: &NumClass, vs: &NumClass) -> WallLine {
    let a = &v.n * &vs.r - &vs.n * &v.r;
    let b = &v.r * &vs.d - &vs.r * &v.d;
    let c = &v.n * &vs.d - &vs.n * &v.d;
    match (a.is_zero() && b.is_zero(), c.is_zero()) {
        (true, true) => WallLine::EverywhereEqual,
        (true, false) => WallLine::NoWall,
        _ => WallLine::Line(RationalLine::new(a, b, c).expect("(A, B) is nonzero")),
    }
}

/// The line of slope `−1/α` through `Π(v)`.
pub fn ray_line(v: &NumClass, alpha: &Rational) -> Result<RationalLine> {
    if v.r.is_zero() {
        return Err(Error::ZeroRank(v.to_string()));
    }
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    let r = from_big(&v.r);
    let rhs = from_big(&v.d) / &r + alpha * from_big(&v.n) / &r;
    RationalLine::from_rationals(&Rational::one(), alpha, &rhs)
}

/// A closed search rectangle `[b_min, b_max] × [w_min, w_max]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    pub b_min: Rational,
    pub b_max: Rational,
    pub w_min: Rational,
    pub w_max: Rational,
}

impl Window {
    pub fn new(b_min: Rational, b_max: Rational, w_min: Rational, w_max: Rational) -> Result<Window> {
        if b_min >= b_max || w_min >= w_max {
            return Err(Error::DomainError(format!("empty window [{b_min},{b_max}]x[{w_min},{w_max}]")));
        }
        Ok(Window { b_min, b_max, w_min, w_max })
    }

    /// Parses `b_min,b_max,w_min,w_max`.
    pub fn parse(s: &str) -> Result<Window> {
        let parts: Vec<&str> = s.split(',').collect();
        let [a, b, c, d] = parts.as_slice() else {
            return Err(Error::Parse(format!("expected b_min,b_max,w_min,w_max, got {s:?}")));
        };
        Window::new(parse_rational(a)?, parse_rational(b)?, parse_rational(c)?, parse_rational(d)?)
    }

    pub fn contains(&self, p: &PlanePoint) -> bool {
        self.b_min <= p.b && p.b <= self.b_max && self.w_min <= p.w && p.w <= self.w_max
    }

    pub fn on_boundary(&self, p: &PlanePoint) -> bool {
        self.contains(p) && (p.b == self.b_min || p.b == self.b_max || p.w == self.w_min || p.w == self.w_max)
    }

    pub fn center(&self) -> PlanePoint {
        PlanePoint {
            b: (&self.b_min + &self.b_max) / Rational::from_integer(2.into()),
            w: (&self.w_min + &self.w_max) / Rational::from_integer(2.into()),
        }
    }

    /// Corners in counter-clockwise order starting at `(b_min, w_min)`.
    pub fn corners(&self) -> [PlanePoint; 4] {
        [
            PlanePoint::new(self.b_min.clone(), self.w_min.clone()),
            PlanePoint::new(self.b_max.clone(), self.w_min.clone()),
            PlanePoint::new(self.b_max.clone(), self.w_max.clone()),
            PlanePoint::new(self.b_min.clone(), self.w_max.clone()),
        ]
    }

    /// The closed `b`-interval on which a non-vertical line stays inside the window.
    pub fn clip_graph(&self, slope: &Rational, intercept: &Rational) -> Option<(Rational, Rational)> {
        let (mut lo, mut hi) = (self.b_min.clone(), self.b_max.clone());
        if slope.is_zero() {
            if *intercept < self.w_min || *intercept > self.w_max {
                return None;
            }
        } else {
            let at_min = (&self.w_min - intercept) / slope;
            let at_max = (&self.w_max - intercept) / slope;
            let (a, b) = if at_min <= at_max { (at_min, at_max) } else { (at_max, at_min) };
            lo = lo.max(a);
            hi = hi.min(b);
        }
        (lo <= hi).then_some((lo, hi))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.b_min, self.b_max, self.w_min, self.w_max)
    }
}

impl Serialize for Window {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.b_min, &self.b_max, &self.w_min, &self.w_max].map(|x| RatJson(x.clone())).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c, e] = <[RatJson; 4]>::deserialize(d)?;
        Window::new(a.0, b.0, c.0, e.0).map_err(serde::de::Error::custom)
    }
}
