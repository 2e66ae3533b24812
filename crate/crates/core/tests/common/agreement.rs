//! Agreement between the wall enumeration and the grid scan.

use std::collections::BTreeSet;

use cswalls_core::walls::{enumerate_walls, enumerate_walls_with, find_delta, EnumerateOptions, Verdict, Wall, Window};
use cswalls_core::{make_model, Genus, ModelKind, NumClass};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::grid_oracle::{scan, Grid, Q};

type Line = (i128, i128, i128);

fn key(w: &Wall) -> Line {
    let t = |x: &BigInt| x.to_i128().unwrap();
    (t(w.line.a()), t(w.line.b()), t(w.line.c()))
}

fn qi(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// `max(0, b + 1 − g)` for `b ≥ 0`, zero to the left.
fn clifford_lower(g: i64) -> impl Fn(&Q) -> Q {
    move |b: &Q| {
        if b.is_negative() {
            Q::zero()
        } else {
            (b + qi(1 - g)).max(Q::zero())
        }
    }
}

/// Upper semicontinuous hull of the generic upper envelope: the pieces with their closed ends.
fn upper_pieces(g: i64) -> Vec<(Option<Q>, Option<Q>, Q, Q)> {
    let top = qi(2 * (g - 1));
    vec![
        (None, Some(qi(0)), qi(0), qi(0)),
        (Some(qi(0)), Some(top.clone()), Q::new(1.into(), 2.into()), qi(1)),
        (Some(top), None, qi(1), qi(1 - g)),
    ]
}

/// Whether `(x − b0)²/δ + w0 − δ` clears every closed piece of the upper envelope strictly.
pub fn parabola_clears(b0: &Q, w0: &Q, delta: &Q, g: i64) -> bool {
    upper_pieces(g).into_iter().all(|(lo, hi, slope, icpt)| {
        let mut x = b0 + delta * &slope / qi(2);
        if let Some(l) = &lo {
            x = x.max(l.clone());
        }
        if let Some(h) = &hi {
            x = x.min(h.clone());
        }
        let t = &x - b0;
        let gap = &t * &t / delta + w0 - delta - (&slope * &x + &icpt);
        gap.is_positive()
    })
}

pub fn q_form(c: &NumClass, b0: &Q, w0: &Q, delta: &Q) -> Q {
    let (r, d, n) = (Q::from_integer(c.r.clone()), Q::from_integer(c.d.clone()), Q::from_integer(c.n.clone()));
    let t = &d - b0 * &r;
    &t * &t / delta + &r * &r * (w0 - delta) - &n * &r
}

/// Midpoint of the part of `w = slope·b + icpt` inside the window where both
/// imaginary parts are positive and the line runs above the lower envelope.
fn witness_midpoint(v: &NumClass, vs: &NumClass, slope: &Q, icpt: &Q, window: &Window, genus: i64) -> (Q, Q) {
    let big = |x: &BigInt| Q::from_integer(x.clone());
    let (rs, ds) = (big(&vs.r), big(&vs.d));
    let (rq, dq) = (big(&v.r) - &rs, big(&v.d) - &ds);
    // Each constraint reads c0 + c1·b ≥ 0.
    let constraints = [
        (-&window.b_min, qi(1)),
        (window.b_max.clone(), qi(-1)),
        (icpt - &window.w_min, slope.clone()),
        (&window.w_max - icpt, -slope),
        (ds, -rs),
        (dq, -rq),
        (icpt.clone(), slope.clone()),
        (icpt + qi(genus - 1), slope - qi(1)),
    ];
    let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
    for (c0, c1) in constraints {
        if c1.is_zero() {
            assert!(!c0.is_negative());
            continue;
        }
        let root = -&c0 / &c1;
        if c1.is_positive() {
            lo = Some(lo.map_or(root.clone(), |l| l.max(root)));
        } else {
            hi = Some(hi.map_or(root.clone(), |h| h.min(root)));
        }
    }
    let b0 = (lo.unwrap() + hi.unwrap()) / qi(2);
    let w0 = slope * &b0 + icpt;
    (b0, w0)
}

pub struct Case {
    pub v: (i64, i64, i64),
    pub genus: i64,
    pub window: &'static str,
    pub cells: i64,
    pub deg: i64,
    pub sec: i64,
}

/// Sizes of the three line sets compared by [`check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Agreement {
    pub oracle: usize,
    pub unpruned: usize,
    pub pruned: usize,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Compares the unpruned enumeration with the grid scan line for line, and
/// confirms independently that every pruned line has a negative support form
/// value at each of its witnesses.
pub fn check(case: &Case) -> Result<Agreement, String> {
    let g = Genus::new(case.genus).map_err(|e| e.to_string())?;
    let model = make_model(ModelKind::General, g, None).map_err(|e| e.to_string())?;
    let window = Window::parse(case.window).map_err(|e| e.to_string())?;
    let v = NumClass::new(case.v.0, case.v.1, case.v.2);
    let unpruned = enumerate_walls_with(&v, g, &window, 3, &model, EnumerateOptions { prune_q: false, parallel: true });
    let pruned = enumerate_walls(&v, g, &window, 3, &model);

    let grid = Grid {
        b_min: window.b_min.clone(),
        b_max: window.b_max.clone(),
        w_min: window.w_min.clone(),
        w_max: window.w_max.clone(),
        cells: case.cells,
    };
    let oracle = scan(case.v, &grid, clifford_lower(case.genus), 3, case.deg, case.sec);
    ensure(oracle.boundary_hits.is_empty(), || format!("search box too small: {:?}", oracle.boundary_hits))?;

    let numerical: BTreeSet<Line> = unpruned.iter().map(key).collect();
    ensure(!pruned.is_empty(), || "no walls survive pruning".into())?;
    if numerical != oracle.lines {
        let missing: Vec<_> = oracle.lines.difference(&numerical).collect();
        let extra: Vec<_> = numerical.difference(&oracle.lines).collect();
        return Err(format!("grid scan disagrees: missing {missing:?}, extra {extra:?}"));
    }

    let kept: BTreeSet<Line> = pruned.iter().map(key).collect();
    ensure(kept.is_subset(&numerical), || "pruned output has lines the unpruned output lacks".into())?;
    for wall in &unpruned {
        if kept.contains(&key(wall)) {
            ensure(wall.verdicts.q_nonneg != Verdict::Fail, || format!("{} kept with a failing support form", wall.line))?;
            continue;
        }
        ensure(wall.verdicts.q_nonneg == Verdict::Fail, || format!("{} dropped without a failing support form", wall.line))?;
        let (slope, icpt) = wall.graph();
        for vs in &wall.destabilizers {
            let (b0, w0) = witness_midpoint(&v, vs, &slope, &icpt, &window, case.genus);
            let (sf, _) = find_delta(&b0, &w0, &model).map_err(|e| e.to_string())?;
            ensure(parabola_clears(&b0, &w0, &sf.delta, case.genus), || format!("invalid delta at {b0},{w0}"))?;
            let quotient = &v - vs;
            let negative = [vs, &quotient, &v].iter().any(|c| q_form(c, &b0, &w0, &sf.delta).is_negative());
            ensure(negative, || format!("{vs} on {} has no negative support form value", wall.line))?;
        }
    }
    Ok(Agreement { oracle: oracle.lines.len(), unpruned: numerical.len(), pruned: kept.len() })
}
