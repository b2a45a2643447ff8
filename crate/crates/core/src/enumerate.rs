//! Exhaustive enumeration of generators under an action bound.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::diffops::differential;
use crate::kpath::{parse_path, Direction, EdgeGroup, KLatticePath, DEFAULT_TOLERANCE};

/// Primitive directions of length at most `radius`, in slope order.
///
/// Positive slopes come from an in-order Stern–Brocot walk; negative slopes
/// are their mirror images.
pub fn directions_within(radius: f64) -> Vec<Direction> {
    fn walk(lo: (i64, i64), hi: (i64, i64), r2: f64, out: &mut Vec<(i64, i64)>) {
        let (p, q) = (lo.0 + hi.0, lo.1 + hi.1);
        if ((p * p + q * q) as f64) > r2 {
            return;
        }
        walk(lo, (p, q), r2, out);
        out.push((q, p));
        walk((p, q), hi, r2, out);
    }
    let r2 = radius * radius + DEFAULT_TOLERANCE;
    if r2 < 1.0 {
        return Vec::new();
    }
    let mut positive = Vec::new();
    walk((0, 1), (1, 0), r2, &mut positive);
    let mut out = vec![Direction::DOWN];
    out.extend(positive.iter().rev().map(|&(q, p)| Direction::new(q, -p).unwrap()));
    out.push(Direction::EAST);
    out.extend(positive.iter().map(|&(q, p)| Direction::new(q, p).unwrap()));
    out.push(Direction::UP);
    out
}

/// Which generators to visit.
#[derive(Debug, Clone, Copy)]
pub struct SearchBounds {
    pub max_action: f64,
    pub min_grading: i64,
    pub max_grading: i64,
    pub h_free: bool,
    pub tol: f64,
}

impl SearchBounds {
    pub fn action(max_action: f64) -> Self {
        SearchBounds {
            max_action,
            min_grading: 0,
            max_grading: i64::MAX,
            h_free: false,
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn gradings(mut self, lo: i64, hi: i64) -> Self {
        self.min_grading = lo;
        self.max_grading = hi;
        self
    }
}

struct Search<'a> {
    dirs: &'a [Direction],
    lens: Vec<f64>,
    bounds: SearchBounds,
    start_pair: bool,
    end_pair: bool,
    groups: Vec<EdgeGroup>,
    out: Vec<KLatticePath>,
}

impl Search<'_> {
    // `grade` is the doubled area swept so far plus m - h, a lower bound for the final grading.
    fn run(&mut self, from: usize, x: i64, y: i64, action: f64, grade: i64) {
        let target = -i64::from(self.end_pair);
        let limit = self.bounds.max_action + self.bounds.tol;
        if y == target
            && (x + i64::from(self.start_pair) + i64::from(self.end_pair)) % 2 == 0
            && grade >= self.bounds.min_grading
        {
            self.out.push(
                KLatticePath::new(self.start_pair, self.end_pair, self.groups.clone())
                    .expect("search only builds valid paths"),
            );
        }
        for j in from..self.dirs.len() {
            let d = self.dirs[j];
            let len = self.lens[j];
            let (q, p) = (d.q(), d.p());
            let mut m: i64 = 0;
            loop {
                m += 1;
                let a = action + m as f64 * len;
                if a > limit {
                    break;
                }
                let (nx, ny) = (x + q * m, y + p * m);
                if ny > 0 {
                    break;
                }
                let need = (target - ny).abs() as f64;
                if need > limit - a {
                    if (target - ny).abs() > (target - y).abs() {
                        break;
                    }
                    continue;
                }
                let swept = q * m * (-2 * y - p * m);
                let base = grade + swept + m;
                let labels: &[bool] = if d.is_vertical() || self.bounds.h_free { &[false] } else { &[false, true] };
                for &h in labels {
                    let g = base - i64::from(h);
                    if g > self.bounds.max_grading {
                        continue;
                    }
                    let e_mult = (m - i64::from(h)) as u32;
                    self.groups.push(EdgeGroup { dir: d, e_mult, h });
                    self.run(j + 1, nx, ny, a, g);
                    self.groups.pop();
                }
            }
        }
    }
}

/// All valid generators inside `bounds`, sorted by canonical spec.
pub fn search(bounds: SearchBounds) -> Vec<KLatticePath> {
    let dirs = directions_within(bounds.max_action);
    let lens: Vec<f64> = dirs.iter().map(|d| d.length()).collect();
    let combos: Vec<(bool, bool)> = vec![(false, false), (true, false), (false, true), (true, true)];
    let mut all: Vec<KLatticePath> = combos
        .into_par_iter()
        .flat_map_iter(|(s, e)| {
            let pairs = f64::from(u8::from(s) + u8::from(e));
            if pairs > bounds.max_action + bounds.tol {
                return Vec::new();
            }
            let mut st = Search {
                dirs: &dirs,
                lens: lens.clone(),
                bounds,
                start_pair: s,
                end_pair: e,
                groups: Vec::new(),
                out: Vec::new(),
            };
            st.run(0, 0, -i64::from(s), pairs, 0);
            st.out
        })
        .collect();
    sort_canonical(&mut all);
    all
}

pub(crate) fn sort_canonical(paths: &mut [KLatticePath]) {
    paths.sort_by_cached_key(|p| p.to_string());
}

/// Generators with action at most `l`, bucketed by grading.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSlice {
    pub action_bound: f64,
    pub per_degree: BTreeMap<i64, Vec<KLatticePath>>,
}

impl ComplexSlice {
    pub fn from_paths(action_bound: f64, paths: Vec<KLatticePath>) -> Self {
        let mut per_degree: BTreeMap<i64, Vec<KLatticePath>> = BTreeMap::new();
        for p in paths {
            per_degree.entry(p.grading()).or_default().push(p);
        }
        for v in per_degree.values_mut() {
            sort_canonical(v);
        }
        ComplexSlice { action_bound, per_degree }
    }

    pub fn degree(&self, k: i64) -> &[KLatticePath] {
        self.per_degree.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.per_degree.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &KLatticePath> {
        self.per_degree.values().flatten()
    }
}

pub fn generators_up_to_action(l: f64) -> ComplexSlice {
    ComplexSlice::from_paths(l, search(SearchBounds::action(l)))
}

pub fn generators_of_grading(k: i64, l: f64) -> Vec<KLatticePath> {
    search(SearchBounds::action(l).gradings(k, k))
        .into_iter()
        .filter(|p| p.grading() == k)
        .collect()
}

/// Sparse matrix over `Z/2`; each column lists the row indices holding a 1, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<usize>>,
}

impl BitMatrix {
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols[c].binary_search(&r).is_ok()
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { rows: n, cols: (0..n).map(|i| vec![i]).collect() }
    }
}

/// Matrix of `δ` from `domain` into `codomain`. Terms outside `codomain` are an error.
pub fn matrix_between(domain: &[KLatticePath], codomain: &[KLatticePath]) -> Result<BitMatrix, KLatticePath> {
    let index: std::collections::HashMap<&KLatticePath, usize> =
        codomain.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let cols: Vec<Result<Vec<usize>, KLatticePath>> = domain
        .par_iter()
        .map(|p| {
            let mut col = Vec::new();
            for t in differential(p).iter() {
                match index.get(t) {
                    Some(&i) => col.push(i),
                    None => return Err(t.clone()),
                }
            }
            col.sort_unstable();
            Ok(col)
        })
        .collect();
    let cols = cols.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(BitMatrix { rows: codomain.len(), cols })
}

/// Matrix of `δ: C_k -> C_{k-1}` within the action slice `l`.
pub fn boundary_matrix(k: i64, l: f64) -> BitMatrix {
    let paths = search(SearchBounds::action(l).gradings(k - 1, k));
    let slice = ComplexSlice::from_paths(l, paths);
    matrix_between(slice.degree(k), slice.degree(k - 1))
        .expect("the differential lowers action, so the slice is a subcomplex")
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("cache header mismatch")]
    Header,
    #[error("corrupt cache line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
}

const CACHE_TAG: &str = "kech-cache v1";

/// Writes generators in the cache format: a header line and one spec per line.
pub fn write_cache(path: &Path, l: f64, paths: &[KLatticePath]) -> io::Result<()> {
    let mut text = format!("{CACHE_TAG} L={l}\n");
    for p in paths {
        text.push_str(&p.to_string());
        text.push('\n');
    }
    fs::write(path, text)
}

/// Reads a cache written for bound `l`, validating every line.
pub fn read_cache(path: &Path, l: f64) -> Result<Vec<KLatticePath>, CacheError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or(CacheError::Header)?;
    let bound = header
        .strip_prefix(CACHE_TAG)
        .and_then(|rest| rest.trim().strip_prefix("L="))
        .and_then(|v| v.parse::<f64>().ok())
        .ok_or(CacheError::Header)?;
    if bound != l {
        return Err(CacheError::Header);
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let p = parse_path(line).map_err(|e| CacheError::Corrupt { line: i + 2, reason: e.to_string() })?;
            if p.action() > l + DEFAULT_TOLERANCE {
                return Err(CacheError::Corrupt { line: i + 2, reason: "action above bound".into() });
            }
            Ok(p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn specs(v: &[KLatticePath]) -> Vec<String> {
        v.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn stern_brocot_directions() {
        let d = directions_within(2.3);
        let shown: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        assert_eq!(
            shown,
            ["(0,-1)", "(1,-2)", "(1,-1)", "(2,-1)", "(1,0)", "(2,1)", "(1,1)", "(1,2)", "(0,1)"]
        );
        assert!(directions_within(0.5).is_empty());
    }

    #[test]
    fn small_slices() {
        assert_eq!(specs(&search(SearchBounds::action(0.5))), ["0"]);
        let two = specs(&search(SearchBounds::action(2.0)));
        for s in ["H-;H+", "e(1,0)^2", "e(0,-1);e(0,1)"] {
            assert!(two.contains(&s.to_string()), "{s}");
        }
        assert!(!two.contains(&"h(1,-1);h(1,1)".to_string()));
    }

    #[test]
    fn census() {
        assert_eq!(specs(&generators_of_grading(0, 4.0)), ["0", "H-;H+"]);
        let mut one = specs(&generators_of_grading(1, 4.0));
        one.sort();
        assert_eq!(one, ["H-;h(1,1)", "h(1,-1);H+", "h(1,0);e(1,0)"]);
    }

    #[test]
    fn boundary_matrices() {
        let m = boundary_matrix(1, 4.0);
        assert_eq!(m.ncols(), 3);
        assert_eq!(m.rows, 2);
        let m3 = boundary_matrix(2, 3.0);
        let slice = generators_of_grading(2, 3.0);
        let col = slice.iter().position(|p| p.to_string() == "h(1,-1);h(1,1)").unwrap();
        assert_eq!(m3.cols[col].len(), 3);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("kech-cache-test-{}", std::process::id()));
        let paths = search(SearchBounds::action(3.0));
        write_cache(&dir, 3.0, &paths).unwrap();
        assert_eq!(read_cache(&dir, 3.0).unwrap(), paths);
        assert!(matches!(read_cache(&dir, 4.0), Err(CacheError::Header)));
        fs::write(&dir, "kech-cache v1 L=3\ne(1,0)^2\nh(1,-1)\n").unwrap();
        assert!(matches!(read_cache(&dir, 3.0), Err(CacheError::Corrupt { line: 3, .. })));
        fs::remove_file(&dir).unwrap();
    }
}
