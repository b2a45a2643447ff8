//! The differential `δ = R_int + C + D`.
//!
//! All three operations share one engine: delete a few lattice points from the
//! region under the path, take the lower convex hull of what is left, and
//! relabel. Steps of the new path that coincide with whole edge groups of the
//! old path keep their labels; everything else forms the zone that absorbs the
//! operation's hyperbolic budget.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::kpath::{gcd, Direction, EdgeGroup, KLatticePath, Point};

/// Finite sum of generators with `Z/2` coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Chain {
    terms: BTreeSet<KLatticePath>,
}

impl Chain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a generator; a repeated generator cancels.
    pub fn add(&mut self, path: KLatticePath) {
        if !self.terms.remove(&path) {
            self.terms.insert(path);
        }
    }

    pub fn add_chain(&mut self, other: &Chain) {
        for p in &other.terms {
            self.add(p.clone());
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, path: &KLatticePath) -> bool {
        self.terms.contains(path)
    }

    pub fn iter(&self) -> impl Iterator<Item = &KLatticePath> {
        self.terms.iter()
    }

    /// Canonical spec strings in lexicographic order.
    pub fn specs(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.iter().map(|p| p.to_string()).collect();
        v.sort();
        v
    }
}

impl FromIterator<KLatticePath> for Chain {
    fn from_iter<I: IntoIterator<Item = KLatticePath>>(iter: I) -> Self {
        let mut c = Chain::new();
        for p in iter {
            c.add(p);
        }
        c
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&self.specs().join(" + "))
    }
}

/// Unlabeled convex path through lattice points, starting at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    pub vertices: Vec<Point>,
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

// Lower boundary of hull(S) from (xmin,0) down, across and back up to (xmax,0),
// in original coordinates.
fn hull_path(points: &[Point]) -> Vec<Point> {
    if points.len() <= 1 {
        return Vec::new();
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len());
    for &pt in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let top_left = (pts[0].0, 0);
    if hull[0] != top_left {
        hull.insert(0, top_left);
    }
    hull
}

/// Removes `removed` from the region under `path` and retraces the lower hull.
pub fn rehull(path: &KLatticePath, removed: &[Point]) -> Polyline {
    let kept: Vec<Point> = path
        .region_points()
        .into_iter()
        .filter(|pt| !removed.contains(pt))
        .collect();
    let verts = hull_path(&kept);
    let x0 = verts.first().map_or(0, |v| v.0);
    Polyline {
        vertices: verts.into_iter().map(|(x, y)| (x - x0, y)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Src {
    Pair,
    Group(usize),
}

struct Step {
    dir: Direction,
    src: Option<Src>,
}

fn unit_steps(verts: &[Point]) -> Vec<(Point, Direction)> {
    let mut out = Vec::new();
    for w in verts.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let g = gcd(dx, dy);
        let dir = Direction::new(dx / g, dy / g).expect("hull edges point rightward or vertically");
        for t in 0..g {
            out.push(((w[0].0 + t * dir.q(), w[0].1 + t * dir.p()), dir));
        }
    }
    out
}

fn old_steps(path: &KLatticePath) -> HashMap<(Point, Direction), Src> {
    let mut map = HashMap::new();
    let mut pos = (0, 0);
    if path.start_pair() {
        map.insert((pos, Direction::DOWN), Src::Pair);
        pos.1 -= 1;
    }
    for (i, g) in path.groups().iter().enumerate() {
        for _ in 0..g.mult() {
            map.insert((pos, g.dir), Src::Group(i));
            pos = (pos.0 + g.dir.q(), pos.1 + g.dir.p());
        }
    }
    if path.end_pair() {
        map.insert((pos, Direction::UP), Src::Pair);
    }
    map
}

#[derive(Debug, Clone, Copy, Default)]
struct Relabel {
    flags: u32,
    create_start: bool,
    create_end: bool,
}

// Removes points, rehulls, and returns every labeling of the result.
fn operate(path: &KLatticePath, removed: &[Point], rule: Relabel) -> Vec<KLatticePath> {
    let kept: Vec<Point> = path
        .region_points()
        .into_iter()
        .filter(|pt| !removed.contains(pt))
        .collect();
    let old = old_steps(path);
    let mut steps: Vec<Step> = unit_steps(&hull_path(&kept))
        .into_iter()
        .map(|(pos, dir)| Step { dir, src: old.get(&(pos, dir)).copied() })
        .collect();

    let mut fresh = steps.iter().any(|s| s.src.is_none());
    let mut start_pair = false;
    if let Some(first) = steps.first() {
        if first.dir == Direction::DOWN
            && (first.src == Some(Src::Pair) || (first.src.is_none() && rule.create_start))
        {
            start_pair = true;
            steps.remove(0);
        }
    }
    let mut end_pair = false;
    if let Some(last) = steps.last() {
        if last.dir == Direction::UP
            && (last.src == Some(Src::Pair) || (last.src.is_none() && rule.create_end))
        {
            end_pair = true;
            steps.pop();
        }
    }
    fresh |= (start_pair && !path.start_pair()) || (end_pair && !path.end_pair());
    // A holomorphic curve always has a negative end: nothing new, no term.
    if !fresh {
        return Vec::new();
    }

    let mut groups: Vec<EdgeGroup> = Vec::new();
    let mut zone: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < steps.len() {
        let dir = steps[i].dir;
        let mut j = i;
        while j < steps.len() && steps[j].dir == dir {
            j += 1;
        }
        let run = &steps[i..j];
        let whole = match run[0].src {
            Some(Src::Group(g)) if run.iter().all(|s| s.src == Some(Src::Group(g))) => {
                let old_group = path.groups()[g];
                (old_group.mult() as usize == run.len()).then_some(old_group)
            }
            _ => None,
        };
        match whole {
            Some(g) => groups.push(g),
            None => {
                if !dir.is_vertical() {
                    zone.push(groups.len());
                }
                groups.push(EdgeGroup::elliptic(dir, run.len() as u32));
            }
        }
        i = j;
    }

    let build = |groups: Vec<EdgeGroup>| {
        KLatticePath::new(start_pair, end_pair, groups)
            .unwrap_or_else(|e| panic!("rounding {path} produced an invalid path: {e}"))
    };
    match rule.flags {
        0 => vec![build(groups)],
        1 => zone
            .iter()
            .map(|&z| {
                let mut g = groups.clone();
                g[z].h = true;
                g[z].e_mult -= 1;
                build(g)
            })
            .collect(),
        n => unreachable!("zone cannot hold {n} hyperbolic labels"),
    }
}

/// Eligible interior corners: junctions of two toric groups strictly below the
/// axis with at least one adjacent `h`.
pub fn interior_corners(path: &KLatticePath) -> Vec<(Point, usize)> {
    let mut out = Vec::new();
    let mut pos = (0, if path.start_pair() { -1 } else { 0 });
    let groups = path.groups();
    for i in 0..groups.len() {
        let m = i64::from(groups[i].mult());
        pos = (pos.0 + groups[i].dir.q() * m, pos.1 + groups[i].dir.p() * m);
        if i + 1 < groups.len() && pos.1 < 0 && (groups[i].h || groups[i + 1].h) {
            out.push((pos, i));
        }
    }
    out
}

/// Interior rounding summed over all eligible corners and label placements.
pub fn round_interior(path: &KLatticePath) -> Chain {
    let groups = path.groups();
    let mut chain = Chain::new();
    for (corner, i) in interior_corners(path) {
        let flags = u32::from(groups[i].h) + u32::from(groups[i + 1].h) - 1;
        let rule = Relabel { flags, ..Relabel::default() };
        for term in operate(path, &[corner], rule) {
            chain.add(term);
        }
    }
    chain
}

/// The C operation: rounding at an end of the path that carries no pair.
pub fn c_op(path: &KLatticePath) -> Chain {
    let mut chain = Chain::new();
    let groups = path.groups();
    let width = path.x_extent();
    if let (false, Some(first)) = (path.start_pair(), groups.first()) {
        let (q, p) = (first.dir.q(), first.dir.p());
        if first.h && q > 0 {
            let terms = if p <= -q {
                operate(path, &[(0, 0)], Relabel { create_start: true, ..Relabel::default() })
            } else if p < 0 {
                operate(path, &[(0, 0), (1, 0)], Relabel::default())
            } else {
                Vec::new()
            };
            terms.into_iter().for_each(|t| chain.add(t));
        }
    }
    if let (false, Some(last)) = (path.end_pair(), groups.last()) {
        let (q, p) = (last.dir.q(), last.dir.p());
        if last.h && q > 0 {
            let terms = if p >= q {
                operate(path, &[(width, 0)], Relabel { create_end: true, ..Relabel::default() })
            } else if p > 0 {
                operate(path, &[(width, 0), (width - 1, 0)], Relabel::default())
            } else {
                Vec::new()
            };
            terms.into_iter().for_each(|t| chain.add(t));
        }
    }
    chain
}

/// The D operation: absorbing a pair together with the adjacent `h`.
pub fn d_op(path: &KLatticePath) -> Chain {
    let mut chain = Chain::new();
    let groups = path.groups();
    let width = path.x_extent();
    if path.start_pair() && groups.first().is_some_and(|g| g.h) {
        for t in operate(path, &[(0, 0), (0, -1)], Relabel::default()) {
            chain.add(t);
        }
    }
    if path.end_pair() && groups.last().is_some_and(|g| g.h) {
        for t in operate(path, &[(width, 0), (width, -1)], Relabel::default()) {
            chain.add(t);
        }
    }
    chain
}

/// `δ(P) = R_int(P) + C(P) + D(P)`.
pub fn differential(path: &KLatticePath) -> Chain {
    let mut chain = round_interior(path);
    chain.add_chain(&c_op(path));
    chain.add_chain(&d_op(path));
    chain
}

/// `δ` extended linearly to chains.
pub fn differential_chain(chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for p in chain.iter() {
        out.add_chain(&differential(p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kpath::parse_path;

    fn p(s: &str) -> KLatticePath {
        parse_path(s).unwrap()
    }

    fn chain(specs: &[&str]) -> Chain {
        specs.iter().map(|s| p(s)).collect()
    }

    #[test]
    fn rehull_examples() {
        let a = p("h(1,-1);h(1,1)");
        assert_eq!(rehull(&a, &[(1, -1)]).vertices, vec![(0, 0), (2, 0)]);
        assert_eq!(rehull(&a, &[]).vertices, a.vertices());
        // Region under the single edge (0,0)->(2,-5), origin removed.
        let pts: Vec<Point> = (0..=2)
            .flat_map(|x: i64| {
                let low = -((5 * x) / 2);
                (low..=0).map(move |y| (x, y))
            })
            .filter(|&pt| pt != (0, 0))
            .collect();
        let v = hull_path(&pts);
        assert_eq!(v, vec![(1, 0), (1, -2), (2, -5), (2, 0)]);
    }

    #[test]
    fn interior_rounding_examples() {
        assert!(round_interior(&p("h(1,-1);h(1,1)")).contains(&p("h(1,0);e(1,0)")));
        assert!(round_interior(&p("e(1,0)^2")).is_empty());
        assert_eq!(round_interior(&p("e(1,-1);h(1,1)")), chain(&["e(1,0)^2"]));
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_op(&p("h(1,-1);h(1,1)")), chain(&["H-;h(1,1)", "h(1,-1);H+"]));
        assert_eq!(c_op(&p("h(2,-1);e(0,1)")), chain(&["e(0,-1);e(0,1)"]));
        assert!(c_op(&p("e(1,0)^2")).is_empty());
        assert_eq!(
            c_op(&p("h(2,-5);e(1,2)^2;e(0,1)")),
            chain(&["H-;e(0,-1);e(1,-3);e(1,2)^2;e(0,1)"])
        );
    }

    #[test]
    fn d_examples() {
        assert_eq!(d_op(&p("H-;h(3,1)")), chain(&["e(1,0)^2"]));
        assert_eq!(d_op(&p("H-;h(1,-1);e(0,1)^2")), chain(&["e(0,-1)^2;e(0,1)^2"]));
        assert!(d_op(&p("H-;e(0,-1);e(0,1);H+")).is_empty());
        assert!(d_op(&p("H-;h(1,1)")).is_empty());
    }

    #[test]
    fn differential_examples() {
        assert_eq!(
            differential(&p("h(1,-1);h(1,1)")),
            chain(&["H-;h(1,1)", "h(1,-1);H+", "h(1,0);e(1,0)"])
        );
        assert!(differential(&p("h(1,0);e(1,0)")).is_empty());
        assert_eq!(differential(&p("h(1,-1);H+")), chain(&["H-;H+"]));
        assert_eq!(differential(&p("H-;h(1,1)")), chain(&["H-;H+"]));
    }

    #[test]
    fn worked_differentials() {
        assert_eq!(
            differential(&p("H-;h(2,-1);e(1,2)")),
            chain(&["e(0,-1);e(1,-1);e(1,2)", "H-;e(1,0)^2;e(1,1)"])
        );
        assert_eq!(
            differential(&p("e(0,-1)^2;h(1,0);e(1,2)")),
            chain(&["e(0,-1);e(1,-1);e(1,2)", "e(0,-1)^2;e(1,1)^2"])
        );
        assert_eq!(
            differential(&p("H-;h(1,-1);h(1,0);e(1,2)")),
            chain(&["e(0,-1)^2;h(1,0);e(1,2)", "H-;h(2,-1);e(1,2)", "H-;h(1,-1);e(1,1)^2"])
        );
        for q in [3i64, 5, 7] {
            let src = p(&format!("H-;h({q},1)"));
            let mut want = vec![format!("e(1,0)^{}", q - 1), format!("H-;e({},1)", q - 2)];
            want.sort();
            assert_eq!(differential(&src).specs(), want);
        }
    }
}
