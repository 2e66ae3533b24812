//! Brute-force wall detection on a rational grid.
//!
//! For a candidate class `v'` the difference `ν(v') − ν(v)` has the sign of
//! `F = A·b + B·w − C` wherever both imaginary parts are positive. A wall of
//! `v'` is detected when `F` takes both signs (or vanishes) on some grid cell
//! lying strictly above the lower envelope, with the cell's `b`-range cut down
//! to where both imaginary parts are positive.
//!
//! Within one grid column the admissible cells stack into a single rectangle,
//! so each column needs one sign test over four corners.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub type Q = BigRational;

pub struct Grid {
    pub b_min: Q,
    pub b_max: Q,
    pub w_min: Q,
    pub w_max: Q,
    pub cells: i64,
}

pub struct Oracle {
    pub lines: BTreeSet<(i128, i128, i128)>,
    /// Candidates that hit some cell while sitting on the degree or section boundary of the search box.
    pub boundary_hits: Vec<(i64, i64, i64)>,
}

fn q(x: i128) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn lcm_denoms(xs: &[&Q]) -> BigInt {
    xs.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()))
}

fn to_i128(x: &Q) -> i128 {
    assert!(x.denom() == &BigInt::from(1));
    x.numer().to_i128().expect("grid coordinate fits")
}

fn normalize(a: i128, b: i128, c: i128) -> (i128, i128, i128) {
    let g = a.gcd(&b).gcd(&c);
    let (mut a, mut b, mut c) = (a / g, b / g, c / g);
    if a < 0 || (a == 0 && b < 0) {
        a = -a;
        b = -b;
        c = -c;
    }
    (a, b, c)
}

/// `(lo, hi)` where `c0 + c1·b > 0`, as an open interval with infinite ends as `None`.
fn positive_part(c0: i128, c1: i128) -> Option<(Option<Q>, Option<Q>)> {
    if c1 == 0 {
        return (c0 > 0).then_some((None, None));
    }
    let root = Q::new(BigInt::from(-c0), BigInt::from(c1));
    Some(if c1 > 0 { (Some(root), None) } else { (None, Some(root)) })
}

/// Whether the line `a·b + b·w = c` meets `[left, right] × [wl, wh]` away from
/// any side that coincides with an open end of the admissible interval.
fn meets_cut_column(a: i128, b: i128, c: i128, (left, right): (&Q, &Q), (wl, wh): (&Q, &Q), (lo, hi): (Option<&Q>, Option<&Q>)) -> bool {
    let (a, b, c) = (q(a), q(b), q(c));
    let (s, t) = if b.is_zero() {
        let x = c / a;
        (x.clone(), x)
    } else {
        // b-values where the line runs between heights wl and wh.
        let at = |w: &Q| (&c - &b * w) / &a;
        let (s, t) = if a.is_zero() {
            let w = &c / &b;
            if &w < wl || &w > wh {
                return false;
            }
            (left.clone(), right.clone())
        } else {
            let (x, y) = (at(wl), at(wh));
            (x.clone().min(y.clone()), x.max(y))
        };
        (s.max(left.clone()), t.min(right.clone()))
    };
    if s > t || &s > right || &t < left {
        return false;
    }
    let open_left = lo == Some(left);
    let open_right = hi == Some(right);
    !(open_left && &t <= left) && !(open_right && &s >= right)
}

/// Scans every class `(r', d', n')` with `|r'| ≤ rank`, `|d'| ≤ deg`, `|n'| ≤ sec`.
pub fn scan(v: (i64, i64, i64), grid: &Grid, lower: impl Fn(&Q) -> Q, rank: i64, deg: i64, sec: i64) -> Oracle {
    let (r, d, n) = (v.0 as i128, v.1 as i128, v.2 as i128);
    let nn = grid.cells;
    let cells = nn as usize;
    let step_b = (&grid.b_max - &grid.b_min) / q(nn as i128);
    let step_w = (&grid.w_max - &grid.w_min) / q(nn as i128);
    let db = lcm_denoms(&[&grid.b_min, &step_b]);
    let dw = lcm_denoms(&[&grid.w_min, &step_w]);
    // b_i = (pb + qb·i)/db and w_j = (pw + qw·j)/dw.
    let (pb, qb) = (to_i128(&(&grid.b_min * Q::from_integer(db.clone()))), to_i128(&(&step_b * Q::from_integer(db.clone()))));
    let (pw, qw) = (to_i128(&(&grid.w_min * Q::from_integer(dw.clone()))), to_i128(&(&step_w * Q::from_integer(dw.clone()))));
    let (db, dw) = (db.to_i128().unwrap(), dw.to_i128().unwrap());
    let b_at = |i: i128| Q::new((pb + qb * i).into(), db.into());
    let w_at = |j: i128| Q::new((pw + qw * j).into(), dw.into());

    // Lowest row index whose cells in column i lie strictly above the lower envelope.
    let row_floor: Vec<i128> = (0..cells)
        .map(|i| {
            let top = lower(&b_at(i as i128)).max(lower(&b_at(i as i128 + 1)));
            let bound = (top * q(dw) - q(pw)) / q(qw);
            let j: BigInt = bound.floor().to_integer() + 1;
            j.to_i128().unwrap().max(0)
        })
        .collect();

    let mut lines = BTreeSet::new();
    let mut boundary_hits = Vec::new();
    for rp in -rank..=rank {
        for dp in -deg..=deg {
            let (rpi, dpi) = (rp as i128, dp as i128);
            // Open b-interval where d' − b·r' > 0 and (d − d') − b·(r − r') > 0.
            let (Some(i1), Some(i2)) = (positive_part(dpi, -rpi), positive_part(d - dpi, rpi - r)) else {
                continue;
            };
            let lo = [i1.0, i2.0].into_iter().flatten().max();
            let hi = [i1.1, i2.1].into_iter().flatten().min();
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l >= h {
                    continue;
                }
            }
            // Columns meeting the interval: fully inside, or cut by one of its ends.
            let mut full = Vec::new();
            let mut cut: Vec<(usize, Q, Q)> = Vec::new();
            for i in 0..cells {
                let (b0, b1) = (b_at(i as i128), b_at(i as i128 + 1));
                let left = match &lo { Some(l) => b0.clone().max(l.clone()), None => b0.clone() };
                let right = match &hi { Some(h) => b1.clone().min(h.clone()), None => b1.clone() };
                if left >= right {
                    continue;
                }
                if left == b0 && right == b1 && lo.as_ref().is_none_or(|l| *l < b0) && hi.as_ref().is_none_or(|h| b1 < *h) {
                    full.push(i);
                } else {
                    cut.push((i, left, right));
                }
            }
            if full.is_empty() && cut.is_empty() {
                continue;
            }
            for np in -sec..=sec {
                let npi = np as i128;
                let a = n * rpi - npi * r;
                let b = r * dpi - rpi * d;
                let c = n * dpi - npi * d;
                if a == 0 && b == 0 {
                    continue;
                }
                let top = nn as i128;
                // G(i, j) = db·dw·F(b_i, w_j).
                let g_at = |i: i128, j: i128| a * dw * (pb + qb * i) + b * db * (pw + qw * j) - c * db * dw;
                let straddles = |vals: [i128; 4]| vals.iter().min().unwrap() <= &0 && vals.iter().max().unwrap() >= &0;
                let mut hit = full.iter().any(|&i| {
                    let (i, f) = (i as i128, row_floor[i]);
                    f < top && straddles([g_at(i, f), g_at(i + 1, f), g_at(i, top), g_at(i + 1, top)])
                });
                if !hit {
                    hit = cut.iter().any(|(i, left, right)| {
                        let f = row_floor[*i];
                        f < top && meets_cut_column(a, b, c, (left, right), (&w_at(f), &w_at(top)), (lo.as_ref(), hi.as_ref()))
                    });
                }
                if hit {
                    lines.insert(normalize(a, b, c));
                    if dp.abs() == deg || np.abs() == sec {
                        boundary_hits.push((rp, dp, np));
                    }
                }
            }
        }
    }
    Oracle { lines, boundary_hits }
}
