//! Convex toric domains, convex generators, and the combinatorial obstruction
//! to embedding them into the disk cotangent bundle.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::kpath::{gcd, Direction, EdgeGroup, KLatticePath, Orbit, PathType, DEFAULT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObstructError {
    #[error("bad domain descriptor: {0}")]
    Domain(String),
    #[error("bad convex generator: {0}")]
    Generator(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(&'static str),
}

/// Edge class of a convex generator with displacement `(a, -b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConvexGroup {
    pub a: i64,
    pub b: i64,
    pub e_mult: u32,
    pub h: bool,
}

impl ConvexGroup {
    pub fn mult(&self) -> i64 {
        i64::from(self.e_mult) + i64::from(self.h)
    }

    fn is_axis(&self) -> bool {
        self.a == 0 || self.b == 0
    }
}

// Concave order: slope -b/a decreasing, from (1,0) to (0,1).
fn concave_cmp(a1: i64, b1: i64, a2: i64, b2: i64) -> Ordering {
    (b1 * a2).cmp(&(b2 * a1))
}

/// Labeled concave lattice path from `(0, y)` to `(x, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ConvexGenerator {
    groups: Vec<ConvexGroup>,
}

impl ConvexGenerator {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(groups: Vec<ConvexGroup>) -> Result<Self, ObstructError> {
        for g in &groups {
            if g.a < 0 || g.b < 0 || (g.a == 0 && g.b == 0) || gcd(g.a, g.b) != 1 {
                return Err(ObstructError::Generator(format!("({},{}) is not a primitive class", g.a, g.b)));
            }
            if g.mult() == 0 {
                return Err(ObstructError::Generator(format!("empty group ({},{})", g.a, g.b)));
            }
            if g.h && g.is_axis() {
                return Err(ObstructError::Generator(format!("axis class ({},{}) cannot carry h", g.a, g.b)));
            }
        }
        for w in groups.windows(2) {
            if concave_cmp(w[0].a, w[0].b, w[1].a, w[1].b) != Ordering::Less {
                return Err(ObstructError::Generator("classes must appear once, in concave order".into()));
            }
        }
        Ok(ConvexGenerator { groups })
    }

    pub fn groups(&self) -> &[ConvexGroup] {
        &self.groups
    }

    pub fn x(&self) -> i64 {
        self.groups.iter().map(|g| g.a * g.mult()).sum()
    }

    pub fn y(&self) -> i64 {
        self.groups.iter().map(|g| g.b * g.mult()).sum()
    }

    pub fn h_count(&self) -> i64 {
        self.groups.iter().filter(|g| g.h).count() as i64
    }

    pub fn elliptic_factors(&self) -> i64 {
        self.groups.iter().filter(|g| g.e_mult > 0).count() as i64
    }

    /// Highest lattice point of the enclosed region in each column `0..=x`.
    pub fn column_tops(&self) -> Vec<i64> {
        let mut tops = vec![self.y()];
        let mut height = self.y();
        for g in &self.groups {
            if g.a == 0 {
                height -= g.b * g.mult();
                continue;
            }
            for t in 1..=g.a * g.mult() {
                tops.push(height - (g.b * t + g.a - 1) / g.a);
            }
            height -= g.b * g.mult();
        }
        tops
    }

    /// Lattice points in the region bounded by the path and the axes.
    pub fn lattice_count(&self) -> i64 {
        self.column_tops().iter().map(|t| t + 1).sum()
    }
}

impl fmt::Display for ConvexGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return f.write_str("0");
        }
        let mut items = Vec::new();
        for g in &self.groups {
            if g.h {
                items.push(format!("h({},{})", g.a, g.b));
            }
            match g.e_mult {
                0 => {}
                1 => items.push(format!("e({},{})", g.a, g.b)),
                m => items.push(format!("e({},{})^{m}", g.a, g.b)),
            }
        }
        f.write_str(&items.join(";"))
    }
}

impl FromStr for ConvexGenerator {
    type Err = ObstructError;

    /// `e(a,b)^m` and `h(a,b)` terms joined by `;`, in concave order; `0` is empty.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::empty());
        }
        let bad = |item: &str| ObstructError::Generator(format!("cannot parse '{item}'"));
        let mut groups: Vec<ConvexGroup> = Vec::new();
        for item in text.split(';').map(str::trim) {
            let (kind, rest) = item.split_at_checked(1).ok_or_else(|| bad(item))?;
            let h = match kind {
                "e" => false,
                "h" => true,
                _ => return Err(bad(item)),
            };
            let rest = rest.strip_prefix('(').ok_or_else(|| bad(item))?;
            let (inner, tail) = rest.split_once(')').ok_or_else(|| bad(item))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| bad(item))?;
            let a: i64 = a.trim().parse().map_err(|_| bad(item))?;
            let b: i64 = b.trim().parse().map_err(|_| bad(item))?;
            let m: u32 = match tail.strip_prefix('^') {
                None if tail.is_empty() => 1,
                Some(m) if !h && m.bytes().all(|c| c.is_ascii_digit()) => m.parse().map_err(|_| bad(item))?,
                _ => return Err(bad(item)),
            };
            if m == 0 {
                return Err(bad(item));
            }
            match groups.last_mut() {
                Some(g) if g.a == a && g.b == b => {
                    if h && g.h {
                        return Err(ObstructError::Generator(format!("repeated h on ({a},{b})")));
                    }
                    g.h |= h;
                    if !h {
                        g.e_mult += m;
                    }
                }
                _ => groups.push(ConvexGroup { a, b, e_mult: if h { 0 } else { m }, h }),
            }
        }
        ConvexGenerator::new(groups)
    }
}

/// `I(Λ) = 2(L - 1) - h`.
pub fn cg_grading(lambda: &ConvexGenerator) -> i64 {
    2 * (lambda.lattice_count() - 1) - lambda.h_count()
}

/// Moment image of a convex toric domain.
#[derive(Debug, Clone, PartialEq)]
pub enum ToricDomain {
    Ball(f64),
    Ellipsoid(f64, f64),
    Polygon(Vec<(f64, f64)>),
}

impl ToricDomain {
    /// `h_Ω(u, v) = max over Ω of u·x + v·y`, for `u, v >= 0`.
    pub fn support(&self, u: f64, v: f64) -> f64 {
        match self {
            ToricDomain::Ball(r) => (r * u).max(r * v).max(0.0),
            ToricDomain::Ellipsoid(a, b) => (a * u).max(b * v).max(0.0),
            ToricDomain::Polygon(vs) => vs.iter().map(|&(x, y)| u * x + v * y).fold(0.0, f64::max),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        match self {
            ToricDomain::Ball(r) => ToricDomain::Ball(r * s),
            ToricDomain::Ellipsoid(a, b) => ToricDomain::Ellipsoid(a * s, b * s),
            ToricDomain::Polygon(vs) => ToricDomain::Polygon(vs.iter().map(|&(x, y)| (x * s, y * s)).collect()),
        }
    }
}

impl fmt::Display for ToricDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToricDomain::Ball(r) => write!(f, "ball:{r}"),
            ToricDomain::Ellipsoid(a, b) => write!(f, "ellipsoid:{a},{b}"),
            ToricDomain::Polygon(vs) => {
                let pts: Vec<String> = vs.iter().map(|(x, y)| format!("{x},{y}")).collect();
                write!(f, "polygon:{}", pts.join(";"))
            }
        }
    }
}

impl FromStr for ToricDomain {
    type Err = ObstructError;

    /// `ball:r`, `ellipsoid:a,b` or `polygon:x1,y1;x2,y2;...`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || ObstructError::Domain(text.to_string());
        let num = |s: &str| -> Result<f64, ObstructError> {
            s.trim().parse::<f64>().ok().filter(|v| v.is_finite() && *v >= 0.0).ok_or_else(bad)
        };
        let (kind, args) = text.split_once(':').ok_or_else(bad)?;
        let dom = match kind.trim() {
            "ball" => ToricDomain::Ball(num(args)?),
            "ellipsoid" => {
                let (a, b) = args.split_once(',').ok_or_else(bad)?;
                ToricDomain::Ellipsoid(num(a)?, num(b)?)
            }
            "polygon" => {
                let vs = args
                    .split(';')
                    .map(|p| {
                        let (x, y) = p.split_once(',').ok_or_else(bad)?;
                        Ok((num(x)?, num(y)?))
                    })
                    .collect::<Result<Vec<_>, ObstructError>>()?;
                ToricDomain::Polygon(vs)
            }
            _ => return Err(bad()),
        };
        if dom.support(1.0, 0.0) <= 0.0 || dom.support(0.0, 1.0) <= 0.0 {
            return Err(bad());
        }
        Ok(dom)
    }
}

/// `A_Ω(Λ)`: each edge with displacement `(a, -b)` costs `h_Ω(b, a)` per unit.
pub fn support_action(omega: &ToricDomain, lambda: &ConvexGenerator) -> f64 {
    lambda
        .groups
        .iter()
        .map(|g| g.mult() as f64 * omega.support(g.b as f64, g.a as f64))
        .sum()
}

/// The `≤` relation between a convex generator and a K-lattice path.
pub fn leq_relation(lambda: &ConvexGenerator, lambda_prime: &KLatticePath, omega: &ToricDomain) -> bool {
    let n = 2 * i64::from(lambda_prime.pair_count());
    cg_grading(lambda) == lambda_prime.grading()
        && support_action(omega, lambda) <= lambda_prime.action() + DEFAULT_TOLERANCE
        && 2 * (lambda.x() + lambda.y()) - lambda.h_count() >= n + 2 * lambda_prime.toric_mult() - 2
}

// Atoms of a factorization: each elliptic class whole, each half-arrow pair whole.
fn atoms(path: &KLatticePath) -> Vec<Vec<(Orbit, u32)>> {
    let mut out = Vec::new();
    let orbits = path.orbits();
    let mut i = 0;
    while i < orbits.len() {
        if orbits[i].0.is_half_arrow() {
            out.push(vec![orbits[i], orbits[i + 1]]);
            i += 2;
        } else {
            out.push(vec![orbits[i]]);
            i += 1;
        }
    }
    out
}

/// Builds the K-lattice path carrying an orbit set, if it is one.
pub fn path_from_orbits(orbits: &[(Orbit, u32)]) -> Option<KLatticePath> {
    let mut start = false;
    let mut end = false;
    let mut groups: Vec<EdgeGroup> = Vec::new();
    let mut sorted: Vec<(Direction, bool, u32)> = Vec::new();
    for &(o, m) in orbits {
        match o {
            Orbit::HalfArrow { up: false, .. } => start = true,
            Orbit::HalfArrow { up: true, .. } => end = true,
            Orbit::Elliptic(d) => sorted.push((d, false, m)),
            Orbit::Hyperbolic(d) => sorted.push((d, true, m)),
        }
    }
    sorted.sort_by_key(|t| t.0);
    for (d, h, m) in sorted {
        match groups.last_mut() {
            Some(g) if g.dir == d => {
                if h {
                    g.h = true;
                } else {
                    g.e_mult += m;
                }
            }
            _ => groups.push(EdgeGroup { dir: d, e_mult: if h { 0 } else { m }, h }),
        }
    }
    KLatticePath::new(start, end, groups).ok()
}

fn check_hypotheses(path: &KLatticePath) -> Result<(), ObstructError> {
    if path.path_type() == PathType::IV {
        return Err(ObstructError::Hypothesis("generator has both half-arrow pairs"));
    }
    if path.h_count() > 0 {
        return Err(ObstructError::Hypothesis("generator carries hyperbolic labels"));
    }
    Ok(())
}

/// Factorizations of `Λ'` into nullhomologous generators no two of which
/// share an elliptic orbit. The trivial factorization comes first.
pub fn factorizations(lambda_prime: &KLatticePath) -> Result<Vec<Vec<KLatticePath>>, ObstructError> {
    check_hypotheses(lambda_prime)?;
    let atoms = atoms(lambda_prime);
    if atoms.is_empty() {
        return Ok(vec![vec![KLatticePath::empty()]]);
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; atoms.len()];
    set_partitions(&atoms, &mut labels, 0, 0, &mut out);
    out.sort_by_key(|parts: &Vec<KLatticePath>| (parts.len(), parts.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
    Ok(out)
}

fn set_partitions(
    atoms: &[Vec<(Orbit, u32)>],
    labels: &mut Vec<usize>,
    i: usize,
    blocks: usize,
    out: &mut Vec<Vec<KLatticePath>>,
) {
    if i == atoms.len() {
        let mut parts = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let orbits: Vec<(Orbit, u32)> = atoms
                .iter()
                .zip(labels.iter())
                .filter(|(_, &l)| l == b)
                .flat_map(|(a, _)| a.iter().copied())
                .collect();
            match path_from_orbits(&orbits) {
                Some(p) => parts.push(p),
                None => return,
            }
        }
        parts.sort_by_cached_key(|p| p.to_string());
        out.push(parts);
        return;
    }
    for b in 0..=blocks {
        labels[i] = b;
        set_partitions(atoms, labels, i + 1, blocks.max(b + 1), out);
    }
}

struct ConvexSearch<'a> {
    omega: &'a ToricDomain,
    dirs: Vec<(i64, i64, f64)>,
    target: i64,
    max_off_axis: i64,
    all_e: bool,
    even_h: bool,
    height: i64,
    groups: Vec<ConvexGroup>,
    best: Option<(f64, Vec<ConvexGroup>)>,
}

impl ConvexSearch<'_> {
    fn bound(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    // `rem` is the height still to descend; `grade` is 2(x + height + o) - h so far.
    fn run(&mut self, from: usize, rem: i64, off: i64, h: i64, action: f64, grade: i64) {
        if rem == 0 && grade == self.target && (!self.even_h || h % 2 == 0) && action < self.bound() - 1e-12 {
            self.best = Some((action, self.groups.clone()));
        }
        let floor_rate = self.omega.support(1.0, 0.0);
        for j in from..self.dirs.len() {
            let (a, b, unit) = self.dirs[j];
            if b > rem || (b == 0 && rem != self.height) {
                continue;
            }
            let mut m = 0i64;
            let mut new_off = off;
            loop {
                m += 1;
                let drop = b * m;
                if drop > rem {
                    break;
                }
                let spent = action + m as f64 * unit;
                if spent + (rem - drop) as f64 * floor_rate >= self.bound() - 1e-12 {
                    break;
                }
                // Off-axis points gained in the columns of the m-th copy.
                for t in (a * (m - 1) + 1)..=(a * m) {
                    new_off += (rem - (b * t + a - 1) / a).max(0);
                    if new_off > self.max_off_axis {
                        break;
                    }
                }
                if new_off > self.max_off_axis {
                    break;
                }
                let base = grade + 2 * (a * m) + 2 * (new_off - off);
                if base - 1 > self.target || (base > self.target && (self.all_e || a == 0 || b == 0)) {
                    break;
                }
                let labels: &[bool] = if self.all_e || a == 0 || b == 0 { &[false] } else { &[false, true] };
                for &hl in labels {
                    let g = base - i64::from(hl);
                    if g > self.target {
                        continue;
                    }
                    let e_mult = (m - i64::from(hl)) as u32;
                    self.groups.push(ConvexGroup { a, b, e_mult, h: hl });
                    self.run(j + 1, rem - drop, new_off, h + i64::from(hl), spent, g);
                    self.groups.pop();
                }
            }
        }
    }
}

fn min_convex(
    omega: &ToricDomain,
    target: i64,
    max_off_axis: i64,
    all_e: bool,
    even_h: bool,
) -> Option<(f64, ConvexGenerator)> {
    if target < 0 || max_off_axis < 0 {
        return None;
    }
    if target == 0 {
        return Some((0.0, ConvexGenerator::empty()));
    }
    // 2y <= I and x <= I bound every candidate.
    let rx = omega.support(0.0, 1.0);
    let mut dirs: Vec<(i64, i64, f64)> = Vec::new();
    for a in 0..=target {
        for b in 0..=target / 2 {
            if (a, b) != (0, 0) && gcd(a, b) == 1 {
                dirs.push((a, b, omega.support(b as f64, a as f64)));
            }
        }
    }
    dirs.sort_by(|l, r| concave_cmp(l.0, l.1, r.0, r.1));
    let heights: Vec<i64> = (0..=target / 2).collect();
    let results: Vec<(f64, Vec<ConvexGroup>)> = heights
        .par_iter()
        .filter_map(|&y| {
            let mut s = ConvexSearch {
                omega,
                dirs: dirs.clone(),
                target,
                max_off_axis,
                all_e,
                even_h,
                height: y,
                groups: Vec::new(),
                best: None,
            };
            // e(1,0)^(I/2) is always a candidate; seed every height with its action.
            if target % 2 == 0 {
                s.best = Some((rx * (target / 2) as f64 + 1e-9, Vec::new()));
            }
            s.run(0, y, 0, 0, 0.0, 2 * y);
            s.best.filter(|b| !b.1.is_empty())
        })
        .collect();
    results
        .into_iter()
        .fold(None::<(f64, Vec<ConvexGroup>)>, |acc, r| match acc {
            Some(ref a) if a.0 <= r.0 + 1e-12 => acc,
            _ => Some(r),
        })
        .map(|(v, g)| (v, ConvexGenerator::new(g).expect("search builds valid generators")))
}

/// Least support action over convex generators of index `target` with even
/// `h` and `x + y - h/2 >= xy_bound`.
pub fn admissible_min_action(omega: &ToricDomain, target: i64, xy_bound: f64) -> Option<(f64, ConvexGenerator)> {
    // x + y - h/2 = I/2 - (off-axis lattice points).
    let slack = (target as f64 / 2.0 - xy_bound + DEFAULT_TOLERANCE).floor();
    if slack < 0.0 {
        return None;
    }
    min_convex(omega, target, slack as i64, false, true)
}

/// `c_k(X_Ω)`: least support action over all-e convex generators of index `2k`.
pub fn ech_capacity_toric(omega: &ToricDomain, k: u32) -> f64 {
    min_convex(omega, 2 * i64::from(k), i64::MAX, true, false)
        .map(|(v, _)| v)
        .expect("e(1,0)^k always has index 2k")
}

fn relation_rhs(part: &KLatticePath) -> f64 {
    f64::from(part.pair_count()) + part.toric_mult() as f64 - 1.0
}

/// One factor `Λ'_i` and the cheapest convex generator that could pair with it.
#[derive(Debug, Clone, PartialEq)]
pub struct PartCheck {
    pub part: KLatticePath,
    pub action: f64,
    /// Least `A_Ω(Λ)` over admissible `Λ`, with its witness.
    pub best: Option<(f64, ConvexGenerator)>,
    pub feasible: bool,
}

/// Per-part feasibility for every factorization of `Λ'`.
pub fn obstruction_checks(omega: &ToricDomain, lambda_prime: &KLatticePath) -> Result<Vec<Vec<PartCheck>>, ObstructError> {
    Ok(factorizations(lambda_prime)?
        .into_iter()
        .map(|parts| {
            parts
                .into_iter()
                .map(|part| {
                    let best = admissible_min_action(omega, part.grading(), relation_rhs(&part));
                    let action = part.action();
                    let feasible = best.as_ref().is_some_and(|(v, _)| *v <= action + DEFAULT_TOLERANCE);
                    PartCheck { part, action, best, feasible }
                })
                .collect()
        })
        .collect())
}

/// Whether every factorization of `Λ'` fails to admit matching convex
/// generators, which rules out `X_Ω ↪ D*K`.
pub fn embedding_obstructed(omega: &ToricDomain, lambda_prime: &KLatticePath) -> Result<bool, ObstructError> {
    let checks = obstruction_checks(omega, lambda_prime)?;
    Ok(!checks.iter().any(|parts| parts.iter().all(|c| c.feasible)))
}

/// `Λ'_k = H-;e(0,-1)^k;e(1,0);e(0,1)^(k+1)`.
pub fn lambda_prime(k: u32) -> KLatticePath {
    let mut groups = Vec::new();
    if k > 0 {
        groups.push(EdgeGroup::elliptic(Direction::DOWN, k));
    }
    groups.push(EdgeGroup::elliptic(Direction::EAST, 1));
    groups.push(EdgeGroup::elliptic(Direction::UP, k + 1));
    KLatticePath::new(true, false, groups).expect("valid by construction")
}

#[derive(Debug, Clone, PartialEq)]
pub struct GromovRecord {
    pub k: u32,
    pub lambda_prime: KLatticePath,
    pub unique_factorization: bool,
    pub rhs_action: f64,
    pub min_lhs_action: f64,
    pub witness: ConvexGenerator,
    pub bound: f64,
    /// Bound from the candidate `e(1,0)^(2k+2)` alone, `(2k+3)/(2k+2)`.
    pub axis_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GromovReport {
    pub records: Vec<GromovRecord>,
    pub running_inf: f64,
}

/// Upper bounds on the Gromov width of `D*K` from `Λ'_0, ..., Λ'_kmax`.
pub fn gromov_upper(kmax: u32) -> GromovReport {
    let ball = ToricDomain::Ball(1.0);
    let records: Vec<GromovRecord> = (0..=kmax)
        .into_par_iter()
        .map(|k| {
            let lp = lambda_prime(k);
            let unique = factorizations(&lp).map(|f| f.len() == 1).unwrap_or(false);
            let target = 4 * (i64::from(k) + 1);
            let (min_lhs, witness) = admissible_min_action(&ball, target, 2.0 * f64::from(k + 1))
                .expect("e(1,0)^(2k+2) is admissible");
            let rhs = lp.action();
            GromovRecord {
                k,
                lambda_prime: lp,
                unique_factorization: unique,
                rhs_action: rhs,
                min_lhs_action: min_lhs,
                witness,
                bound: rhs / min_lhs,
                axis_bound: rhs / (2.0 * f64::from(k + 1)),
            }
        })
        .collect();
    let running_inf = records.iter().map(|r| r.bound).fold(f64::INFINITY, f64::min);
    GromovReport { records, running_inf }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kpath::parse_path;

    fn cg(s: &str) -> ConvexGenerator {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_format() {
        for s in ["0", "e(1,0)", "e(1,0)^4", "h(1,1)", "e(2,1);h(1,1);e(0,1)^2", "e(1,0);h(1,2);e(1,2)"] {
            assert_eq!(cg(s).to_string(), s);
        }
        assert!("e(0,1);e(1,0)".parse::<ConvexGenerator>().is_err());
        assert!("h(1,0)".parse::<ConvexGenerator>().is_err());
        assert!("e(2,2)".parse::<ConvexGenerator>().is_err());
        assert!("h(1,1)^2".parse::<ConvexGenerator>().is_err());
    }

    #[test]
    fn gradings() {
        assert_eq!(cg_grading(&cg("e(1,0)")), 2);
        assert_eq!(cg_grading(&cg("h(1,1)")), 3);
        assert_eq!(cg_grading(&cg("e(2,1)")), 6);
        assert_eq!(cg_grading(&ConvexGenerator::empty()), 0);
        assert_eq!(cg_grading(&cg("e(3,1)")), 8);
    }

    #[test]
    fn support_actions() {
        for k in 0..4 {
            let lam = ConvexGenerator::new(vec![ConvexGroup { a: 1, b: 0, e_mult: 2 * (k + 1), h: false }]).unwrap();
            assert!((support_action(&ToricDomain::Ball(1.5), &lam) - 1.5 * f64::from(2 * (k + 1))).abs() < 1e-12);
        }
        assert_eq!(support_action(&ToricDomain::Ball(1.0), &cg("h(1,1)")), 1.0);
        assert_eq!(support_action(&ToricDomain::Ellipsoid(2.0, 3.0), &cg("e(0,1)")), 2.0);
    }

    #[test]
    fn domains() {
        assert_eq!("ball:1.5".parse::<ToricDomain>().unwrap(), ToricDomain::Ball(1.5));
        assert_eq!("ellipsoid:1,2".parse::<ToricDomain>().unwrap(), ToricDomain::Ellipsoid(1.0, 2.0));
        let poly: ToricDomain = "polygon:0,0;2,0;1,1;0,1".parse().unwrap();
        assert_eq!(poly.support(1.0, 1.0), 2.0);
        assert!("ball:-1".parse::<ToricDomain>().is_err());
        assert!("cube:1".parse::<ToricDomain>().is_err());
    }

    #[test]
    fn relation() {
        let ball = ToricDomain::Ball(1.0);
        let lam = cg("e(1,0)^4");
        assert!(leq_relation(&lam, &lambda_prime(1), &ball));
        assert!(leq_relation(&cg("e(1,0)"), &parse_path("e(1,0)^2").unwrap(), &ball));
        assert!(!leq_relation(&cg("e(1,0)^2"), &parse_path("e(1,0)^2").unwrap(), &ball));
    }

    #[test]
    fn factorization_examples() {
        for k in 0..5 {
            assert_eq!(factorizations(&lambda_prime(k)).unwrap().len(), 1);
        }
        assert_eq!(factorizations(&parse_path("e(0,-1)^2;e(0,1)^2").unwrap()).unwrap().len(), 1);
        assert_eq!(factorizations(&KLatticePath::empty()).unwrap(), vec![vec![KLatticePath::empty()]]);
        let split = factorizations(&parse_path("e(0,-1);e(1,0)^2;e(0,1)").unwrap()).unwrap();
        assert_eq!(split.len(), 2);
        assert!(matches!(
            factorizations(&parse_path("h(1,-1);h(1,1)").unwrap()),
            Err(ObstructError::Hypothesis(_))
        ));
        assert!(factorizations(&parse_path("H-;H+").unwrap()).is_err());
    }

    #[test]
    fn admissible_minimum() {
        let ball = ToricDomain::Ball(1.0);
        let (v, w) = admissible_min_action(&ball, 8, 4.0).unwrap();
        assert_eq!((v, w.to_string().as_str()), (3.0, "e(3,1)"));
        assert_eq!(admissible_min_action(&ball, 2, 0.0).unwrap().0, 1.0);
        assert_eq!(admissible_min_action(&ball, 0, 0.0).unwrap().0, 0.0);
        assert!(admissible_min_action(&ball, 4, 3.0).is_none());
    }

    #[test]
    fn ball_capacities() {
        let ball = ToricDomain::Ball(1.0);
        assert_eq!(ech_capacity_toric(&ball, 0), 0.0);
        assert_eq!(ech_capacity_toric(&ball, 1), 1.0);
        assert_eq!(ech_capacity_toric(&ball, 2), 1.0);
        assert_eq!(ech_capacity_toric(&ball, 5), 2.0);
    }

    #[test]
    fn obstruction() {
        assert!(embedding_obstructed(&ToricDomain::Ball(1.2), &lambda_prime(50)).unwrap());
        assert!(!embedding_obstructed(&ToricDomain::Ball(1.0), &lambda_prime(1)).unwrap());
        for k in [0, 3, 10] {
            assert!(!embedding_obstructed(&ToricDomain::Ball(0.9), &lambda_prime(k)).unwrap());
        }
    }

    #[test]
    fn gromov() {
        let r = gromov_upper(6);
        assert_eq!(r.records[0].bound, 3.0);
        assert_eq!(r.records[0].axis_bound, 1.5);
        for w in r.records.windows(2) {
            assert!(w[1].bound < w[0].bound);
        }
        assert!((r.records[6].bound - 15.0 / 13.0).abs() < 1e-12);
        assert!(r.records.iter().all(|x| x.unique_factorization && x.bound > 1.0));
    }
}
