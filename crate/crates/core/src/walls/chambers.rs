use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bnfunction::{region_uc, BNModel, Membership};
use crate::charge::PlanePoint;
use crate::error::{Error, Result};
use crate::numgro::{project, NumClass};
use crate::rational::{from_big, int, RatJson, Rational};

use super::enumerate::Wall;
use super::geometry::Window;

/// How a chamber is cut out of the plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChamberBounds {
    /// No walls: the whole plane.
    Whole,
    /// The closed cone at the apex swept counter-clockwise from one direction `(Δb, Δw)` to the next.
    Sector { from: PlanePoint, to: PlanePoint },
    /// Points with `below < w − slope·b < above`; a missing bound is infinite.
    Strip {
        slope: RatJson,
        below: Option<RatJson>,
        above: Option<RatJson>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    pub bounds: ChamberBounds,
    pub meets_window: bool,
    pub sample: Option<PlanePoint>,
    pub region: Option<Membership>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberReport {
    pub owner: NumClass,
    pub apex: Option<PlanePoint>,
    pub chambers: Vec<Chamber>,
}

type Polygon = Vec<PlanePoint>;

/// Keeps the part of a convex polygon where `a·b + c·w ≥ k`.
fn clip_half_plane(poly: &Polygon, a: &Rational, c: &Rational, k: &Rational) -> Polygon {
    let value = |p: &PlanePoint| a * &p.b + c * &p.w - k;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
        let (fp, fq) = (value(p), value(q));
        if !fp.is_negative() {
            out.push(p.clone());
        }
        if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
            let t = &fp / (&fp - &fq);
            out.push(PlanePoint::new(&p.b + &t * (&q.b - &p.b), &p.w + &t * (&q.w - &p.w)));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn twice_area(poly: &Polygon) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..poly.len() {
        let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
        acc += &p.b * &q.w - &q.b * &p.w;
    }
    acc
}

/// Vertex average of a polygon with positive area, which is interior.
fn sample_of(poly: &Polygon) -> Option<PlanePoint> {
    if poly.len() < 3 || twice_area(poly).is_zero() {
        return None;
    }
    let k = int(poly.len() as i64);
    let b = poly.iter().map(|p| &p.b).sum::<Rational>() / &k;
    let w = poly.iter().map(|p| &p.w).sum::<Rational>() / &k;
    Some(PlanePoint::new(b, w))
}

fn cross(u: &PlanePoint, v: &PlanePoint) -> Rational {
    &u.b * &v.w - &u.w * &v.b
}

/// Counter-clockwise order of directions starting from the positive `b`-axis.
fn angle_cmp(u: &PlanePoint, v: &PlanePoint) -> Ordering {
    let half = |p: &PlanePoint| !(p.w.is_positive() || (p.w.is_zero() && p.b.is_positive()));
    half(u).cmp(&half(v)).then_with(|| Rational::zero().cmp(&cross(u, v)))
}

fn annotate(bounds: ChamberBounds, poly: &Polygon, model: &BNModel) -> Chamber {
    let sample = sample_of(poly);
    Chamber {
        bounds,
        meets_window: sample.is_some(),
        region: sample.as_ref().map(|p| region_uc(p, model)),
        sample,
    }
}

/// Decomposes the window into chambers cut by walls of `v`: sectors around
/// `Π(v)` for positive or negative rank, parallel strips for rank zero.
pub fn chamber_decomposition(v: &NumClass, walls: &[Wall], window: &Window, model: &BNModel) -> Result<ChamberReport> {
    if let Some(w) = walls.iter().find(|w| w.owner != *v) {
        return Err(Error::MixedOwnership { expected: v.to_string(), found: w.owner.to_string() });
    }
    let mut lines: Vec<_> = walls.iter().map(|w| w.line.clone()).collect();
    lines.sort();
    lines.dedup();
    let rect: Polygon = window.corners().to_vec();
    let apex = if v.r.is_zero() { None } else { Some(project(v)?) };

    if lines.is_empty() {
        let chamber = annotate(ChamberBounds::Whole, &rect, model);
        return Ok(ChamberReport { owner: v.clone(), apex, chambers: vec![chamber] });
    }

    let chambers = match &apex {
        Some(p) => {
            let mut dirs: Vec<PlanePoint> = lines
                .iter()
                .flat_map(|l| {
                    let (a, b) = (from_big(l.a()), from_big(l.b()));
                    [PlanePoint::new(b.clone(), -&a), PlanePoint::new(-b, a)]
                })
                .collect();
            dirs.sort_by(angle_cmp);
            (0..dirs.len())
                .map(|i| {
                    let (from, to) = (&dirs[i], &dirs[(i + 1) % dirs.len()]);
                    // Left of `from` and right of `to`, as closed half-planes through the apex.
                    let left = clip_half_plane(&rect, &-&from.w, &from.b, &(&from.b * &p.w - &from.w * &p.b));
                    let cone = clip_half_plane(&left, &to.w, &-&to.b, &(&to.w * &p.b - &to.b * &p.w));
                    let bounds = ChamberBounds::Sector { from: from.clone(), to: to.clone() };
                    annotate(bounds, &cone, model)
                })
                .collect()
        }
        None => {
            let (slope, _) = lines[0].as_graph().expect("walls are never vertical");
            let mut offsets: Vec<Rational> = lines.iter().map(|l| l.as_graph().expect("walls are never vertical").1).collect();
            offsets.sort();
            offsets.dedup();
            let mut bounds: Vec<Option<Rational>> = vec![None];
            bounds.extend(offsets.into_iter().map(Some));
            bounds.push(None);
            bounds
                .windows(2)
                .map(|pair| {
                    let mut poly = rect.clone();
                    // w − slope·b ≥ below and −(w − slope·b) ≥ −above.
                    if let Some(lo) = &pair[0] {
                        poly = clip_half_plane(&poly, &-&slope, &int(1), lo);
                    }
                    if let Some(hi) = &pair[1] {
                        poly = clip_half_plane(&poly, &slope, &int(-1), &-hi);
                    }
                    let bounds = ChamberBounds::Strip {
                        slope: RatJson(slope.clone()),
                        below: pair[0].clone().map(RatJson),
                        above: pair[1].clone().map(RatJson),
                    };
                    annotate(bounds, &poly, model)
                })
                .collect()
        }
    };
    Ok(ChamberReport { owner: v.clone(), apex, chambers })
}
