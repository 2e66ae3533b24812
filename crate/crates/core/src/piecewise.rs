//! Exact piecewise-linear functions on the rational line.
//!
//! A function is a list of pieces `(at, slope, value)` with strictly
//! increasing breakpoints. Piece `i` covers `[at_i, at_{i+1})` with the line
//! through `(at_i, value_i)`; the first piece also extends to `-∞` and the last
//! to `+∞`. A piece may carry an explicit `point` value overriding the line at
//! its own breakpoint, which is how upper envelopes with isolated jumps (the
//! value `1` at `x = 0`, `g` at `x = 2g − 2`) are encoded.

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{int, midpoint, rat_str::RatRepr, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub at: Rational,
    pub slope: Rational,
    pub value: Rational,
    pub point: Option<Rational>,
}

impl Piece {
    pub fn new(at: Rational, slope: Rational, value: Rational) -> Piece {
        Piece { at, slope, value, point: None }
    }

    pub fn with_point(mut self, point: Rational) -> Piece {
        self.point = if point == self.value { None } else { Some(point) };
        self
    }

    fn line_at(&self, x: &Rational) -> Rational {
        &self.value + &self.slope * (x - &self.at)
    }

    fn intercept(&self) -> Rational {
        &self.value - &self.slope * &self.at
    }
}

/// A line `slope·x + intercept` valid on the open interval `(lo, hi)`;
/// `None` stands for an infinite end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
    pub slope: Rational,
    pub intercept: Rational,
}

impl Span {
    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    pieces: Vec<Piece>,
}

impl PLFunction {
    pub fn new(pieces: Vec<Piece>) -> Result<PLFunction> {
        if pieces.is_empty() {
            return Err(Error::InvalidEnvelope("no pieces".into()));
        }
        for w in pieces.windows(2) {
            if w[0].at >= w[1].at {
                return Err(Error::InvalidEnvelope(format!(
                    "breakpoints must be strictly increasing ({} then {})",
                    w[0].at, w[1].at
                )));
            }
        }
        let pieces = pieces
            .into_iter()
            .map(|p| match p.point {
                Some(ref q) if *q == p.value => Piece { point: None, ..p },
                _ => p,
            })
            .collect();
        Ok(PLFunction { pieces })
    }

    /// The constant or affine function `slope·x + intercept` everywhere.
    pub fn line(slope: Rational, intercept: Rational) -> PLFunction {
        let value = intercept.clone();
        PLFunction { pieces: vec![Piece::new(Rational::zero(), slope, value)] }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Rational> {
        self.pieces.iter().map(|p| &p.at)
    }

    /// Index of the piece whose half-open interval contains `x`.
    fn index_le(&self, x: &Rational) -> Option<usize> {
        match self.pieces.binary_search_by(|p| p.at.cmp(x)) {
            Ok(i) => Some(i),
            Err(0) => None,
            Err(i) => Some(i - 1),
        }
    }

    /// Index of the piece covering a left neighbourhood of `x`.
    fn index_lt(&self, x: &Rational) -> usize {
        match self.pieces.binary_search_by(|p| p.at.cmp(x)) {
            Ok(0) | Err(0) => 0,
            Ok(i) => i - 1,
            Err(i) => i - 1,
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self.index_le(x) {
            None => self.pieces[0].line_at(x),
            Some(i) => {
                let p = &self.pieces[i];
                if p.at == *x {
                    p.point.clone().unwrap_or_else(|| p.value.clone())
                } else {
                    p.line_at(x)
                }
            }
        }
    }

    pub fn left_limit(&self, x: &Rational) -> Rational {
        self.pieces[self.index_lt(x)].line_at(x)
    }

    pub fn right_limit(&self, x: &Rational) -> Rational {
        let i = self.index_le(x).unwrap_or(0);
        self.pieces[i].line_at(x)
    }

    /// Largest of the value and both one-sided limits at `x`.
    pub fn limsup(&self, x: &Rational) -> Rational {
        let a = self.eval(x);
        let b = self.left_limit(x);
        let c = self.right_limit(x);
        a.max(b).max(c)
    }

    /// Open intervals of linearity, from `-∞` to `+∞`.
    pub fn spans(&self) -> Vec<Span> {
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        let first = &self.pieces[0];
        out.push(Span { lo: None, hi: Some(first.at.clone()), slope: first.slope.clone(), intercept: first.intercept() });
        for (i, p) in self.pieces.iter().enumerate() {
            out.push(Span {
                lo: Some(p.at.clone()),
                hi: self.pieces.get(i + 1).map(|q| q.at.clone()),
                slope: p.slope.clone(),
                intercept: p.intercept(),
            });
        }
        out
    }

    pub fn left_tail_slope(&self) -> &Rational {
        &self.pieces[0].slope
    }

    pub fn right_tail_slope(&self) -> &Rational {
        &self.pieces[self.pieces.len() - 1].slope
    }

    /// Value and both one-sided limits agree at every breakpoint.
    pub fn is_continuous(&self) -> bool {
        self.pieces.iter().enumerate().all(|(i, p)| {
            p.point.is_none() && (i == 0 || self.pieces[i - 1].line_at(&p.at) == p.value)
        })
    }

    /// Continuous with nondecreasing slopes.
    pub fn is_convex(&self) -> bool {
        self.is_continuous() && self.pieces.windows(2).all(|w| w[0].slope <= w[1].slope)
    }

    /// Drops pieces that continue the previous line without a point override.
    pub fn simplified(&self) -> PLFunction {
        let mut out: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            if let Some(prev) = out.last() {
                if p.point.is_none() && prev.slope == p.slope && prev.line_at(&p.at) == p.value {
                    continue;
                }
            }
            out.push(p.clone());
        }
        PLFunction { pieces: out }
    }

    /// Exact pointwise minimum.
    pub fn pointwise_min(&self, other: &PLFunction) -> PLFunction {
        let mut xs: Vec<Rational> = self.breakpoints().chain(other.breakpoints()).cloned().collect();
        xs.sort();
        xs.dedup();
        // Crossings inside each interval of joint linearity, tails included.
        let mut crossings = Vec::new();
        let mut bounds: Vec<(Option<Rational>, Option<Rational>)> = Vec::new();
        bounds.push((None, xs.first().cloned()));
        for w in xs.windows(2) {
            bounds.push((Some(w[0].clone()), Some(w[1].clone())));
        }
        bounds.push((xs.last().cloned(), None));
        for (lo, hi) in &bounds {
            let t = sample_point(lo.as_ref(), hi.as_ref());
            let (s1, c1) = self.line_near(&t);
            let (s2, c2) = other.line_near(&t);
            if s1 != s2 {
                let x = (&c2 - &c1) / (&s1 - &s2);
                let inside = lo.as_ref().is_none_or(|l| *l < x) && hi.as_ref().is_none_or(|h| x < *h);
                if inside {
                    crossings.push(x);
                }
            }
        }
        xs.extend(crossings);
        xs.sort();
        xs.dedup();
        // Sentinel so the leftward extension of the first piece is the left tail minimum.
        let sentinel = &xs[0] - int(1);
        xs.insert(0, sentinel);
        let mut pieces = Vec::with_capacity(xs.len());
        for (i, x) in xs.iter().enumerate() {
            let t = sample_point(Some(x), xs.get(i + 1));
            let (s1, c1) = self.line_near(&t);
            let (s2, c2) = other.line_near(&t);
            let (slope, intercept) = if &s1 * &t + &c1 <= &s2 * &t + &c2 { (s1, c1) } else { (s2, c2) };
            let value = &slope * x + &intercept;
            let point = self.eval(x).min(other.eval(x));
            pieces.push(Piece::new(x.clone(), slope, value).with_point(point));
        }
        PLFunction { pieces }.simplified()
    }

    /// Line `(slope, intercept)` of the piece covering the open neighbourhood of a non-breakpoint `t`.
    fn line_near(&self, t: &Rational) -> (Rational, Rational) {
        let i = self.index_le(t).unwrap_or(0);
        (self.pieces[i].slope.clone(), self.pieces[i].intercept())
    }

    /// `self(x) ≥ other(x)` for every rational `x`, decided exactly.
    pub fn dominates(&self, other: &PLFunction) -> bool {
        let mut xs: Vec<&Rational> = self.breakpoints().chain(other.breakpoints()).collect();
        xs.sort();
        xs.dedup();
        for x in &xs {
            if self.eval(x) < other.eval(x)
                || self.left_limit(x) < other.left_limit(x)
                || self.right_limit(x) < other.right_limit(x)
            {
                return false;
            }
        }
        // Tails: the difference must not decrease towards either infinity.
        self.left_tail_slope() <= other.left_tail_slope() && self.right_tail_slope() >= other.right_tail_slope()
    }

    pub fn pointwise_eq(&self, other: &PLFunction) -> bool {
        self.dominates(other) && other.dominates(self)
    }

    /// Whether the function equals `slope·x + intercept` on the open interval `(lo, hi)`.
    pub fn agrees_with_line_on(
        &self,
        lo: Option<&Rational>,
        hi: Option<&Rational>,
        slope: &Rational,
        intercept: &Rational,
    ) -> bool {
        let overlaps = |s: &Span| {
            let left_ok = match (&s.hi, lo) {
                (Some(sh), Some(l)) => sh > l,
                _ => true,
            };
            let right_ok = match (&s.lo, hi) {
                (Some(sl), Some(h)) => sl < h,
                _ => true,
            };
            left_ok && right_ok
        };
        let spans_ok = self
            .spans()
            .iter()
            .filter(|s| overlaps(s))
            .all(|s| s.slope == *slope && s.intercept == *intercept);
        let points_ok = self
            .breakpoints()
            .filter(|x| lo.is_none_or(|l| *x > l) && hi.is_none_or(|h| *x < h))
            .all(|x| self.eval(x) == slope * x + intercept);
        spans_ok && points_ok
    }

    /// Open sub-intervals of `(lo, hi)` on which `slope·x + intercept` exceeds the function,
    /// merged across breakpoints where the strict inequality also holds.
    pub fn strictly_below_line(
        &self,
        slope: &Rational,
        intercept: &Rational,
        lo: &Rational,
        hi: &Rational,
    ) -> Vec<(Rational, Rational)> {
        let line = |x: &Rational| slope * x + intercept;
        let mut cuts: Vec<Rational> = vec![lo.clone()];
        cuts.extend(self.breakpoints().filter(|x| *x > lo && *x < hi).cloned());
        cuts.push(hi.clone());
        let mut parts: Vec<(Rational, Rational)> = Vec::new();
        for w in cuts.windows(2) {
            let (a, c) = (&w[0], &w[1]);
            if a >= c {
                continue;
            }
            let ha = line(a) - self.right_limit(a);
            let hc = line(c) - self.left_limit(c);
            let root = || {
                // The difference is affine on (a, c); solve for its zero.
                a + (c - a) * (&ha / (&ha - &hc))
            };
            let piece = match (ha.is_positive(), hc.is_positive()) {
                (true, true) => Some((a.clone(), c.clone())),
                (true, false) => Some((a.clone(), root())),
                (false, true) => Some((root(), c.clone())),
                (false, false) => None,
            };
            if let Some((x, y)) = piece {
                if x < y {
                    match parts.last_mut() {
                        Some(last) if last.1 == x && (line(&x) - self.eval(&x)).is_positive() => last.1 = y,
                        _ => parts.push((x, y)),
                    }
                }
            }
        }
        parts
    }
}

fn sample_point(lo: Option<&Rational>, hi: Option<&Rational>) -> Rational {
    match (lo, hi) {
        (Some(a), Some(b)) => midpoint(a, b),
        (Some(a), None) => a + int(1),
        (None, Some(b)) => b - int(1),
        (None, None) => Rational::zero(),
    }
}

// JSON: a list of `[at, slope, value]` or `[at, slope, value, point]` rows.
impl Serialize for PLFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .pieces
            .iter()
            .map(|p| {
                let mut row = vec![p.at.to_string(), p.slope.to_string(), p.value.to_string()];
                if let Some(q) = &p.point {
                    row.push(q.to_string());
                }
                row
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<RatRepr>> = Vec::deserialize(d)?;
        let mut pieces = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != 3 && row.len() != 4 {
                return Err(D::Error::custom("envelope rows must be [b, slope, value] or [b, slope, value, point]"));
            }
            let mut vals = Vec::with_capacity(4);
            for v in row {
                vals.push(v.into_rational().map_err(D::Error::custom)?);
            }
            let point = if vals.len() == 4 { vals.pop() } else { None };
            let value = vals.pop().unwrap();
            let slope = vals.pop().unwrap();
            let at = vals.pop().unwrap();
            let mut piece = Piece::new(at, slope, value);
            if let Some(q) = point {
                piece = piece.with_point(q);
            }
            pieces.push(piece);
        }
        PLFunction::new(pieces).map_err(D::Error::custom)
    }
}
