use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bnfunction::{mercat_pl, region_uc, region_uf, BNModel, Membership};
use crate::charge::{central_charge, PlanePoint};
use crate::numgro::{project, Genus, NumClass};
use crate::piecewise::PLFunction;
use crate::rational::{ceil_int, floor_int, from_big, midpoint, Rational, Slope};

use super::geometry::{wall_line, RationalLine, Window, WallLine};
use super::support::{find_delta, support_form_value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Fail,
    Unknown,
    Pass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdicts {
    pub im_positive: Verdict,
    pub q_nonneg: Verdict,
    pub feasibility: Verdict,
    pub region: Verdict,
}

/// What stops a wall segment at one of its ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndKind {
    /// The window boundary.
    Window,
    /// The imaginary part of a destabilizer or its quotient vanishes.
    Heart,
    /// The line drops to the lower envelope.
    Envelope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub destabilizers: Vec<NumClass>,
    pub line: RationalLine,
    pub nu: Slope,
    pub segment: [PlanePoint; 2],
    pub verdicts: Verdicts,
    pub owner: NumClass,
    pub ends: [EndKind; 2],
}

impl Wall {
    /// `(slope, intercept)` of the wall's line; walls are never vertical.
    pub fn graph(&self) -> (Rational, Rational) {
        self.line.as_graph().expect("walls are never vertical")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Discard candidates whose support form is negative at the midpoint.
    pub prune_q: bool,
    pub parallel: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { prune_q: true, parallel: true }
    }
}

pub fn enumerate_walls(v: &NumClass, g: Genus, window: &Window, rank_bound: u32, model: &BNModel) -> Vec<Wall> {
    enumerate_walls_with(v, g, window, rank_bound, model, EnumerateOptions::default())
}

pub fn enumerate_walls_with(
    v: &NumClass,
    g: Genus,
    window: &Window,
    rank_bound: u32,
    model: &BNModel,
    opts: EnumerateOptions,
) -> Vec<Wall> {
    let ctx = Search::new(v, g, window, model, opts);
    let Some(heart) = ctx.heart_range() else {
        return Vec::new();
    };
    let bound = i64::from(rank_bound);
    let ranks: Vec<i64> = (-bound..=bound).collect();
    let found: Vec<Vec<Candidate>> = if opts.parallel {
        ranks.par_iter().map(|&rp| ctx.for_rank(&BigInt::from(rp), &heart)).collect()
    } else {
        ranks.iter().map(|&rp| ctx.for_rank(&BigInt::from(rp), &heart)).collect()
    };
    ctx.merge(found.into_iter().flatten())
}

struct Candidate {
    line: RationalLine,
    destabilizer: NumClass,
    lo: Rational,
    hi: Rational,
    q_nonneg: Verdict,
    feasibility: Verdict,
}

struct Search<'a> {
    v: &'a NumClass,
    g: Genus,
    window: &'a Window,
    model: &'a BNModel,
    opts: EnumerateOptions,
    r: Rational,
    d: Rational,
    n: Rational,
    mercat: Option<PLFunction>,
}

/// Shrinks the open interval `(lo, hi)` to where `c0 + c1·b > 0`.
fn restrict_positive(c0: &Rational, c1: &Rational, lo: &mut Rational, hi: &mut Rational) -> bool {
    if c1.is_zero() {
        return c0.is_positive();
    }
    let root = -c0 / c1;
    if c1.is_positive() {
        if root > *lo {
            *lo = root;
        }
    } else if root < *hi {
        *hi = root;
    }
    lo < hi
}

impl<'a> Search<'a> {
    fn new(v: &'a NumClass, g: Genus, window: &'a Window, model: &'a BNModel, opts: EnumerateOptions) -> Self {
        let mercat = if g.get() >= 4 { mercat_pl(g).ok() } else { None };
        Search {
            v,
            g,
            window,
            model,
            opts,
            r: from_big(&v.r),
            d: from_big(&v.d),
            n: from_big(&v.n),
            mercat,
        }
    }

    /// The closed `b`-range of the window on which `Im Z(v) ≥ 0`.
    fn heart_range(&self) -> Option<(Rational, Rational)> {
        let (mut lo, mut hi) = (self.window.b_min.clone(), self.window.b_max.clone());
        if self.r.is_zero() {
            return self.d.is_positive().then_some((lo, hi));
        }
        let root = &self.d / &self.r;
        if self.r.is_positive() {
            hi = hi.min(root);
        } else {
            lo = lo.max(root);
        }
        (lo < hi).then_some((lo, hi))
    }

    fn for_rank(&self, rp: &BigInt, heart: &(Rational, Rational)) -> Vec<Candidate> {
        let mut out = Vec::new();
        let rq = from_big(rp);
        if self.r.is_zero() && rp.is_zero() {
            return out;
        }
        let (jl, jh) = heart;
        let sub_lo = (jl * &rq).min(jh * &rq);
        let quot = |b: &Rational| &self.d + b * (&rq - &self.r);
        let sub_hi = quot(jl).max(quot(jh));
        let mut dp = floor_int(&sub_lo);
        let dp_end = ceil_int(&sub_hi);
        while dp <= dp_end {
            self.for_degree(rp, &dp, &mut out);
            dp += 1;
        }
        out
    }

    fn for_degree(&self, rp: &BigInt, dp: &BigInt, out: &mut Vec<Candidate>) {
        let (rq, dq) = (from_big(rp), from_big(dp));
        let b_coef = &self.v.r * dp - rp * &self.v.d;
        if b_coef.is_zero() {
            return;
        }
        // Open b-interval where Im Z(v') > 0 and Im Z(v − v') > 0.
        let (mut lo, mut hi) = (self.window.b_min.clone(), self.window.b_max.clone());
        if !restrict_positive(&dq, &-&rq, &mut lo, &mut hi) {
            return;
        }
        if !restrict_positive(&(&self.d - &dq), &(&rq - &self.r), &mut lo, &mut hi) {
            return;
        }
        // n' of the line through (b, w), continuous on the closed box since B ≠ 0.
        let bq = from_big(&b_coef);
        let n_at = |b: &Rational, w: &Rational| (&self.n * &dq - &self.n * &rq * b - &bq * w) / (&self.d - &self.r * b);
        let corners = [
            n_at(&lo, &self.window.w_min),
            n_at(&lo, &self.window.w_max),
            n_at(&hi, &self.window.w_min),
            n_at(&hi, &self.window.w_max),
        ];
        let n_lo = floor_int(corners.iter().min().expect("four corners"));
        let n_hi = ceil_int(corners.iter().max().expect("four corners"));
        let mut np = n_lo;
        while np <= n_hi {
            if !(rp.is_zero() && !dp.gcd(&np).is_one()) {
                let vs = NumClass::new(rp.clone(), dp.clone(), np.clone());
                if let Some(c) = self.examine(vs, &lo, &hi) {
                    out.push(c);
                }
            }
            np += 1;
        }
    }

    fn examine(&self, vs: NumClass, genuine_lo: &Rational, genuine_hi: &Rational) -> Option<Candidate> {
        let WallLine::Line(line) = wall_line(self.v, &vs) else {
            return None;
        };
        let (s, t) = line.as_graph()?;
        let (clip_lo, clip_hi) = self.window.clip_graph(&s, &t)?;
        let lo = clip_lo.max(genuine_lo.clone());
        let hi = clip_hi.min(genuine_hi.clone());
        if lo >= hi {
            return None;
        }
        let above = self.model.lower.strictly_below_line(&s, &t, &lo, &hi);
        let (first, last) = (above.first()?, above.last()?);
        let (lo, hi) = (first.0.clone(), last.1.clone());

        let q_nonneg = self.q_verdict(&vs, &s, &t, &lo, &hi);
        if q_nonneg == Verdict::Fail && self.opts.prune_q {
            return None;
        }
        let feasibility = self.feasibility(&vs, &s, &t, &lo, &hi);
        Some(Candidate { line, destabilizer: vs, lo, hi, q_nonneg, feasibility })
    }

    fn q_verdict(&self, vs: &NumClass, s: &Rational, t: &Rational, lo: &Rational, hi: &Rational) -> Verdict {
        let b0 = midpoint(lo, hi);
        let w0 = s * &b0 + t;
        let mid = PlanePoint::new(b0, w0);
        if region_uc(&mid, self.model) != Membership::In {
            return Verdict::Unknown;
        }
        let Ok((sf, _)) = find_delta(&mid.b, &mid.w, self.model) else {
            return Verdict::Unknown;
        };
        let quotient = self.v - vs;
        let all_nonneg = [vs, &quotient, self.v]
            .into_iter()
            .all(|c| !support_form_value(c, &sf).is_negative());
        if all_nonneg {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn feasibility(&self, vs: &NumClass, s: &Rational, t: &Rational, lo: &Rational, hi: &Rational) -> Verdict {
        let Some(mercat) = &self.mercat else {
            return Verdict::Unknown;
        };
        if vs.r.is_zero() {
            return Verdict::Unknown;
        }
        let from = lo.clone().max(Rational::zero());
        if from >= *hi || mercat.strictly_below_line(s, t, &from, hi).is_empty() {
            return Verdict::Unknown;
        }
        let inside = project(vs).and_then(|p| region_uf(&p, self.g)).unwrap_or(false);
        if inside {
            Verdict::Fail
        } else {
            Verdict::Pass
        }
    }

    fn region(&self, s: &Rational, t: &Rational, lo: &Rational, hi: &Rational) -> Verdict {
        let whole = |parts: Vec<(Rational, Rational)>| parts.len() == 1 && parts[0].0 == *lo && parts[0].1 == *hi;
        if whole(self.model.upper.strictly_below_line(s, t, lo, hi)) {
            Verdict::Pass
        } else if !whole(self.model.lower.strictly_below_line(s, t, lo, hi)) {
            Verdict::Fail
        } else {
            Verdict::Unknown
        }
    }

    fn end_kind(&self, p: &PlanePoint, witnesses: &[NumClass]) -> EndKind {
        if self.window.on_boundary(p) {
            return EndKind::Window;
        }
        let vanishes = witnesses.iter().any(|vs| {
            central_charge(vs, p).im.is_zero() || central_charge(&(self.v - vs), p).im.is_zero()
        });
        if vanishes {
            EndKind::Heart
        } else {
            EndKind::Envelope
        }
    }

    fn merge(&self, candidates: impl Iterator<Item = Candidate>) -> Vec<Wall> {
        let mut by_line: BTreeMap<RationalLine, Vec<Candidate>> = BTreeMap::new();
        for c in candidates {
            by_line.entry(c.line.clone()).or_default().push(c);
        }
        let mut walls: Vec<Wall> = by_line
            .into_iter()
            .map(|(line, group)| {
                let (s, t) = line.as_graph().expect("walls are never vertical");
                let lo = group.iter().map(|c| &c.lo).min().expect("nonempty group").clone();
                let hi = group.iter().map(|c| &c.hi).max().expect("nonempty group").clone();
                let mut destabilizers: Vec<NumClass> = group.iter().map(|c| c.destabilizer.clone()).collect();
                destabilizers.sort_by(|a, b| (&a.r, &a.d, &a.n).cmp(&(&b.r, &b.d, &b.n)));
                destabilizers.dedup();
                let verdicts = Verdicts {
                    im_positive: Verdict::Pass,
                    q_nonneg: group.iter().map(|c| c.q_nonneg).max().expect("nonempty group"),
                    feasibility: group.iter().map(|c| c.feasibility).max().expect("nonempty group"),
                    region: self.region(&s, &t, &lo, &hi),
                };
                let p0 = PlanePoint::new(lo.clone(), &s * &lo + &t);
                let p1 = PlanePoint::new(hi.clone(), &s * &hi + &t);
                let ends = [self.end_kind(&p0, &destabilizers), self.end_kind(&p1, &destabilizers)];
                Wall {
                    destabilizers,
                    nu: line.slope(),
                    line,
                    segment: [p0, p1],
                    verdicts,
                    owner: self.v.clone(),
                    ends,
                }
            })
            .collect();
        walls.sort_by(|a, b| (&a.nu, &a.line).cmp(&(&b.nu, &b.line)));
        walls
    }
}
