//! Graded `Z/2` homology of the action-filtered complex.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::diffops::{differential, differential_chain};
use crate::enumerate::{generators_up_to_action, matrix_between, search, BitMatrix, ComplexSlice, SearchBounds};
use crate::kpath::{KLatticePath, DEFAULT_TOLERANCE};

/// Rank over `Z/2` by column elimination, pivoting on the highest set row.
pub fn gf2_rank(m: &BitMatrix) -> usize {
    let words = m.rows.div_ceil(64);
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; m.rows];
    let mut rank = 0;
    for col in &m.cols {
        let mut v = vec![0u64; words];
        for &r in col {
            v[r / 64] ^= 1 << (r % 64);
        }
        while let Some(top) = highest_bit(&v) {
            match &pivots[top] {
                Some(p) => v.iter_mut().zip(p).for_each(|(a, b)| *a ^= b),
                None => {
                    pivots[top] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn highest_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .rev()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// A nonzero coefficient of `δ²(source)` at `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub source: KLatticePath,
    pub target: KLatticePath,
}

/// Checks `δ∘δ = 0` on every generator of the slice.
pub fn d_squared_report(l: f64) -> Vec<Violation> {
    let slice = generators_up_to_action(l);
    d_squared_on(&slice)
}

pub fn d_squared_on(slice: &ComplexSlice) -> Vec<Violation> {
    let gens: Vec<&KLatticePath> = slice.iter().collect();
    gens.par_iter()
        .flat_map_iter(|p| {
            let twice = differential_chain(&differential(p));
            twice
                .iter()
                .map(|t| Violation { source: (*p).clone(), target: t.clone() })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Ranks of `δ_k` for a fully enumerated range of degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    pub dims: BTreeMap<i64, usize>,
    pub ranks: BTreeMap<i64, usize>,
}

impl RankTable {
    /// Ranks of `δ_k` for `lo < k <= hi`; degree `lo` is treated as the bottom.
    pub fn from_slice(slice: &ComplexSlice, lo: i64, hi: i64) -> Self {
        let dims: BTreeMap<i64, usize> = (lo..=hi).map(|k| (k, slice.degree(k).len())).collect();
        let ranks: BTreeMap<i64, usize> = (lo + 1..=hi)
            .into_par_iter()
            .map(|k| {
                let m = matrix_between(slice.degree(k), slice.degree(k - 1))
                    .expect("slice is closed under the differential");
                (k, gf2_rank(&m))
            })
            .collect();
        RankTable { dims, ranks }
    }

    pub fn rank(&self, k: i64) -> usize {
        self.ranks.get(&k).copied().unwrap_or(0)
    }

    pub fn kernel(&self, k: i64) -> usize {
        self.dims.get(&k).copied().unwrap_or(0) - self.rank(k)
    }

    pub fn betti(&self, k: i64) -> usize {
        self.kernel(k) - self.rank(k + 1)
    }
}

fn slice_for(lo: i64, hi: i64, l: f64) -> ComplexSlice {
    let paths = search(SearchBounds::action(l).gradings(lo, hi));
    ComplexSlice::from_paths(l, paths.into_iter().filter(|p| p.grading() >= lo && p.grading() <= hi).collect())
}

/// `dim ker δ_k - rank δ_{k+1}` inside the slice of action at most `l`.
pub fn betti(k: i64, l: f64) -> usize {
    let lo = (k - 1).max(0);
    let slice = slice_for(lo, k + 1, l);
    RankTable::from_slice(&slice, lo, k + 1).betti(k)
}

/// Betti numbers of every degree `0..=top` in one pass.
///
/// A degree is marked stabilized when degrees `k-1..=k+1` hold no generator
/// with action above half the bound, the same test `stabilized_betti` applies
/// between `L/2` and `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct BettiReport {
    pub action_bound: f64,
    pub generators: BTreeMap<i64, usize>,
    pub per_degree: BTreeMap<i64, usize>,
    pub stabilized: BTreeMap<i64, bool>,
}

pub fn betti_report(top: i64, l: f64) -> BettiReport {
    betti_report_on(&slice_for(0, top + 1, l), top)
}

pub fn betti_report_on(slice: &ComplexSlice, top: i64) -> BettiReport {
    let table = RankTable::from_slice(slice, 0, top + 1);
    let half = slice.action_bound / 2.0 + DEFAULT_TOLERANCE;
    let settled = |k: i64| ((k - 1).max(0)..=k + 1).all(|d| slice.degree(d).iter().all(|p| p.action() <= half));
    BettiReport {
        action_bound: slice.action_bound,
        generators: (0..=top).map(|k| (k, slice.degree(k).len())).collect(),
        per_degree: (0..=top).map(|k| (k, table.betti(k))).collect(),
        stabilized: (0..=top).map(|k| (k, settled(k))).collect(),
    }
}

/// Outcome of a stabilization run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stabilized {
    pub value: usize,
    pub bound: f64,
    pub stable: bool,
}

pub const DEFAULT_STABILIZATION_CAP: f64 = 64.0;

fn window_counts(k: i64, l: f64) -> (Vec<usize>, usize) {
    let lo = (k - 1).max(0);
    let slice = slice_for(lo, k + 1, l);
    let counts = (lo..=k + 1).map(|d| slice.degree(d).len()).collect();
    (counts, RankTable::from_slice(&slice, lo, k + 1).betti(k))
}

/// Doubles `L` from 4 until degrees `k-1..=k+1` stop gaining generators
/// between `L` and `2L`, giving up past `cap`.
///
/// Comparing Betti numbers alone is not enough: `betti(6, 4) = betti(6, 8) = 2`
/// while the limit is 1.
pub fn stabilized_betti(k: i64, cap: f64) -> Stabilized {
    let mut l = 4.0;
    let (mut counts, mut value) = window_counts(k, l);
    while 2.0 * l <= cap {
        let (next_counts, next_value) = window_counts(k, 2.0 * l);
        if next_counts == counts {
            debug_assert_eq!(next_value, value);
            return Stabilized { value, bound: l, stable: true };
        }
        l *= 2.0;
        counts = next_counts;
        value = next_value;
    }
    Stabilized { value, bound: l, stable: false }
}
