//! ECH spectrum: the least action of an index-`2k` generator.
//!
//! Minimizers never need hyperbolic labels, so the search runs over h-free
//! paths as a dynamic program over `(start pair, x, y, grading)` with edge
//! directions added in slope order.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::enumerate::{directions_within, search, SearchBounds};
use crate::kpath::{Direction, EdgeGroup, KLatticePath, DEFAULT_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub k: u32,
    pub value: f64,
    pub witness: KLatticePath,
}

struct Grid {
    xs: usize,
    ys: usize,
    gs: usize,
}

impl Grid {
    fn len(&self) -> usize {
        2 * self.xs * self.ys * self.gs
    }

    // `depth` is -y.
    fn at(&self, s: usize, x: usize, depth: usize, g: usize) -> usize {
        ((s * self.xs + x) * self.ys + depth) * self.gs + g
    }
}

/// Least action over h-free index-`2k` paths using directions of length at most
/// `radius`, with extents bounded by `budget`.
fn minimize(k: u32, radius: f64, budget: f64) -> Option<CapacityResult> {
    let target = 2 * k as usize;
    let dirs: Vec<Direction> = directions_within(radius);
    let grid = Grid {
        xs: budget.floor() as usize + 1,
        ys: (budget / 2.0).floor() as usize + 2,
        gs: target + 1,
    };
    let mut val = vec![f64::INFINITY; grid.len()];
    val[grid.at(0, 0, 0, 0)] = 0.0;
    if grid.ys > 1 {
        val[grid.at(1, 0, 1, 0)] = 1.0;
    }
    let mut changed: Vec<Vec<u64>> = Vec::with_capacity(dirs.len());
    for d in &dirs {
        let (q, p) = (d.q(), d.p());
        let len = d.length();
        let mut bits = vec![0u64; grid.len().div_ceil(64)];
        for g in 1..grid.gs {
            for s in 0..2 {
                for x in 0..grid.xs {
                    let sx = x as i64 - q;
                    if sx < 0 {
                        continue;
                    }
                    for depth in 0..grid.ys {
                        let sd = depth as i64 + p;
                        if sd < 0 || sd >= grid.ys as i64 {
                            continue;
                        }
                        let dg = q * (2 * sd - p) + 1;
                        let sg = g as i64 - dg;
                        if sg < 0 {
                            continue;
                        }
                        let src = val[grid.at(s, sx as usize, sd as usize, sg as usize)];
                        let t = grid.at(s, x, depth, g);
                        if src + len < val[t] - 1e-12 {
                            val[t] = src + len;
                            bits[t / 64] |= 1 << (t % 64);
                        }
                    }
                }
            }
        }
        changed.push(bits);
    }

    let mut best: Option<(f64, usize, bool)> = None;
    for s in 0..2 {
        for e in 0..2 {
            for x in 0..grid.xs {
                if (x + s + e) % 2 != 0 || e >= grid.ys {
                    continue;
                }
                let v = val[grid.at(s, x, e, target)] + e as f64;
                if v.is_finite() && best.is_none_or(|(b, _, _)| v < b - 1e-12) {
                    best = Some((v, grid.at(s, x, e, target), e == 1));
                }
            }
        }
    }
    let (value, mut state, end_pair) = best?;

    let mut steps: Vec<Direction> = Vec::new();
    let mut stage = dirs.len();
    let start_pair = state >= grid.xs * grid.ys * grid.gs;
    loop {
        let g = state % grid.gs;
        if g == 0 {
            break;
        }
        let bit = stage > 0 && changed[stage - 1][state / 64] >> (state % 64) & 1 == 1;
        if !bit {
            stage -= 1;
            continue;
        }
        let d = dirs[stage - 1];
        steps.push(d);
        let rest = state / grid.gs;
        let depth = rest % grid.ys;
        let rest = rest / grid.ys;
        let x = rest % grid.xs;
        let sd = (depth as i64 + d.p()) as usize;
        let dg = (d.q() * (2 * sd as i64 - d.p()) + 1) as usize;
        state = grid.at(usize::from(start_pair), x - d.q() as usize, sd, g - dg);
    }
    steps.reverse();
    let mut groups: Vec<EdgeGroup> = Vec::new();
    for d in steps {
        match groups.last_mut() {
            Some(gr) if gr.dir == d => gr.e_mult += 1,
            _ => groups.push(EdgeGroup::elliptic(d, 1)),
        }
    }
    let witness = KLatticePath::new(start_pair, end_pair, groups).expect("dynamic program builds valid paths");
    debug_assert_eq!(witness.grading(), target as i64);
    Some(CapacityResult { k, value, witness })
}

/// `c_k`: least action among generators of index `2k`.
pub fn capacity(k: u32) -> CapacityResult {
    if k == 0 {
        return CapacityResult { k, value: 0.0, witness: KLatticePath::empty() };
    }
    // A cheap pass over short directions gives an achievable bound; the full
    // pass then only needs directions and extents within that bound.
    let incumbent = 2.0 * f64::from(k);
    let first = minimize(k, 3.0_f64.min(incumbent), incumbent).map_or(incumbent, |r| r.value.min(incumbent));
    let bound = first + DEFAULT_TOLERANCE;
    let optimum = minimize(k, bound, bound).expect("the vertical witness lies inside the bound");
    // Among all minimizers report the canonically smallest.
    let mut window = SearchBounds::action(optimum.value + DEFAULT_TOLERANCE).gradings(2 * i64::from(k), 2 * i64::from(k));
    window.h_free = true;
    search(window)
        .into_iter()
        .filter(|p| p.grading() == 2 * i64::from(k))
        .map(|p| (p.action(), p))
        .fold(None::<(f64, KLatticePath)>, |acc, (a, p)| match acc {
            Some((b, _)) if b <= a + DEFAULT_TOLERANCE => acc,
            _ => Some((a, p)),
        })
        .map(|(value, witness)| CapacityResult { k, value, witness })
        .unwrap_or(optimum)
}

/// `c_1, ..., c_kmax`, computed in parallel.
pub fn capacities(kmax: u32) -> Vec<CapacityResult> {
    (1..=kmax).into_par_iter().map(capacity).collect()
}

/// Area of the flat Klein bottle `R²/<(x,y) -> (-x, y + 1/2), (x,y) -> (x+1, y)>`.
pub const KLEIN_AREA: f64 = 0.5;

/// `∫ λ∧dλ` over the unit cotangent bundle: twice the symplectic volume
/// `π·area` of the disk bundle.
pub fn contact_volume() -> f64 {
    2.0 * PI * KLEIN_AREA
}

/// Limit of `c_k²/k`, calibrated on the ball where `c_k(B(1))²/k -> 2` and
/// `∫ λ∧dλ = 1`.
pub fn weyl_limit() -> f64 {
    2.0 * contact_volume()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylRow {
    pub k: u32,
    pub c_k: f64,
    pub ratio: f64,
}

/// `(k, c_k, c_k²/k)` for `1 <= k <= kmax`.
pub fn weyl_series(kmax: u32) -> Vec<WeylRow> {
    capacities(kmax)
        .into_iter()
        .map(|r| WeylRow { k: r.k, c_k: r.value, ratio: r.value * r.value / f64::from(r.k) })
        .collect()
}
