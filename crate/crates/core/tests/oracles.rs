mod common;

use std::collections::BTreeSet;

use kech_core::enumerate::{search, SearchBounds};
use kech_core::indexcalc::{partitions, q_tau, OrbitKind, Sign};
use kech_core::kpath::{Direction, KLatticePath};
use kech_core::obstruct::{ech_capacity_toric, factorizations, support_action, ConvexGenerator, ConvexGroup, ToricDomain};
use kech_core::spectrum::capacity;

fn specs(v: &[KLatticePath]) -> BTreeSet<String> {
    v.iter().map(|p| p.to_string()).collect()
}

#[test]
fn enumeration_matches_box_search() {
    for l in [0.5, 1.5, 2.5, 3.2, 3.9] {
        assert_eq!(specs(&search(SearchBounds::action(l))), common::box_generators(l), "L={l}");
    }
}

#[test]
fn enumeration_ignores_thread_count() {
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| search(SearchBounds::action(7.0)))
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn grading_window_is_a_filter() {
    let all = search(SearchBounds::action(6.0));
    for k in 0..6 {
        let window: Vec<_> = search(SearchBounds::action(6.0).gradings(k, k))
            .into_iter()
            .filter(|p| p.grading() == k)
            .collect();
        let filtered: Vec<_> = all.iter().filter(|p| p.grading() == k).cloned().collect();
        assert_eq!(window, filtered, "k={k}");
    }
}

#[test]
fn factorizations_match_multiset_splits() {
    let mut seen = 0;
    for p in search(SearchBounds::action(6.0)) {
        if p.h_count() > 0 || (p.start_pair() && p.end_pair()) {
            continue;
        }
        let units: u32 = p.orbits().iter().map(|(_, m)| m).sum();
        if p.orbits().len() > 8 || units > 10 {
            continue;
        }
        let ours: BTreeSet<Vec<String>> = factorizations(&p)
            .unwrap()
            .into_iter()
            .map(|parts| parts.iter().map(|q| q.to_string()).collect())
            .collect();
        assert_eq!(ours, common::multiset_splits(&p), "{p}");
        seen += 1;
    }
    assert!(seen > 50);
}

#[test]
fn hyperbolic_labels_never_lower_the_spectrum() {
    for k in 1..=3u32 {
        let target = 2 * i64::from(k);
        let all = search(SearchBounds::action(f64::from(2 * k) + 1e-9));
        let best = |h_free: bool| {
            all.iter()
                .filter(|p| p.grading() == target && (!h_free || p.h_count() == 0))
                .map(KLatticePath::action)
                .fold(f64::INFINITY, f64::min)
        };
        assert!((best(true) - best(false)).abs() < 1e-9, "k={k}");
        assert!((capacity(k).value - best(false)).abs() < 1e-9, "k={k}");
    }
}

#[test]
fn spectrum_matches_exhaustive_search() {
    let frozen = [0.0, 2.0, 2.0 * 2f64.sqrt(), 2.0 + 2f64.sqrt(), 4.0, 2.0 + 2.0 * 2f64.sqrt()];
    for (k, want) in frozen.iter().enumerate() {
        let k = k as u32;
        let brute = search(SearchBounds::action(f64::from(2 * k) + 1e-9))
            .iter()
            .filter(|p| p.grading() == 2 * i64::from(k))
            .map(KLatticePath::action)
            .fold(f64::INFINITY, f64::min);
        let brute = if k == 0 { 0.0 } else { brute };
        assert!((capacity(k).value - brute).abs() < 1e-9, "k={k}");
        assert!((brute - want).abs() < 1e-9, "k={k}");
    }
}

#[test]
fn ball_capacities_follow_the_closed_form() {
    let ball = ToricDomain::Ball(1.0);
    for k in 0..=30u32 {
        assert_eq!(ech_capacity_toric(&ball, k), common::ball_capacity(u64::from(k)), "k={k}");
    }
    let e = ToricDomain::Ellipsoid(1.0, 2.0);
    // N(1,2) = 0,1,2,2,3,3,4,4,4,5,5,...
    let want = [0.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 4.0, 5.0, 5.0];
    for (k, w) in want.iter().enumerate() {
        assert_eq!(ech_capacity_toric(&e, k as u32), *w, "k={k}");
    }
}

// Σ_{i<j} det(v_i, v_j) over the unit steps of the path, half-arrows included.
fn det_sum(p: &KLatticePath) -> i64 {
    let mut steps: Vec<(i64, i64)> = Vec::new();
    if p.start_pair() {
        steps.push((0, -1));
    }
    for g in p.groups() {
        for _ in 0..g.mult() {
            steps.push((g.dir.q(), g.dir.p()));
        }
    }
    if p.end_pair() {
        steps.push((0, 1));
    }
    let mut total = 0;
    for i in 0..steps.len() {
        for j in i + 1..steps.len() {
            total += steps[i].0 * steps[j].1 - steps[i].1 * steps[j].0;
        }
    }
    total
}

#[test]
fn q_tau_matches_determinant_sum() {
    for p in search(SearchBounds::action(7.0)) {
        assert_eq!(q_tau(&p).unwrap(), det_sum(&p) + i64::from(p.pair_count()), "{p}");
    }
}

fn hull_ccw(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.push((0.0, 0.0));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

// Edge ν = (a,-b) meets the boundary at the vertex whose normal cone holds (b,a);
// the action is ν × p there.
fn tangent_line_action(poly: &[(f64, f64)], a: f64, b: f64) -> f64 {
    let h = hull_ccw(poly.to_vec());
    let n = h.len();
    let normal = |e: (f64, f64)| (e.1, -e.0);
    let cr = |u: (f64, f64), v: (f64, f64)| u.0 * v.1 - u.1 * v.0;
    for i in 0..n {
        let prev = (h[i].0 - h[(i + n - 1) % n].0, h[i].1 - h[(i + n - 1) % n].1);
        let next = (h[(i + 1) % n].0 - h[i].0, h[(i + 1) % n].1 - h[i].1);
        let dir = (b, a);
        if cr(normal(prev), dir) >= -1e-12 && cr(dir, normal(next)) >= -1e-12 {
            return a * h[i].1 + b * h[i].0;
        }
    }
    unreachable!("normal cones cover the plane")
}

#[test]
fn polygon_support_matches_tangent_lines() {
    let polys = [
        vec![(2.0, 0.0), (1.5, 1.0), (0.0, 1.2)],
        vec![(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        vec![(3.0, 0.0), (0.0, 1.0)],
        vec![(1.0, 0.0), (0.9, 0.6), (0.6, 0.9), (0.0, 1.0)],
    ];
    for poly in polys {
        let omega = ToricDomain::Polygon(poly.clone());
        for a in 0..6i64 {
            for b in 0..6i64 {
                if (a, b) == (0, 0) || num_gcd(a, b) != 1 {
                    continue;
                }
                let lam = ConvexGenerator::new(vec![ConvexGroup { a, b, e_mult: 1, h: false }]).unwrap();
                let want = tangent_line_action(&poly, a as f64, b as f64);
                assert!((support_action(&omega, &lam) - want).abs() < 1e-9, "{poly:?} ({a},{b})");
            }
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { num_gcd(b, a % b) }
}

// All concave (or convex) lattice paths on the admissible side of y = θx, by
// exhaustive recursion; the extremal one has the largest (smallest) area.
fn partition_by_search(theta: f64, m: i64, sign: Sign) -> Vec<u32> {
    let end = match sign {
        Sign::Plus => (m as f64 * theta).floor() as i64,
        Sign::Minus => (m as f64 * theta).ceil() as i64,
    };
    let ok = |x: i64, y: i64| match sign {
        Sign::Plus => y as f64 <= theta * x as f64,
        Sign::Minus => y as f64 >= theta * x as f64,
    };
    let lo = (theta.min(0.0) * m as f64).floor() as i64 - 1;
    let hi = (theta.max(0.0) * m as f64).ceil() as i64 + 1;
    let mut best: Option<(i64, Vec<(i64, i64)>)> = None;
    let mut stack = vec![(vec![(0i64, 0i64)], 0i64)];
    while let Some((path, area2)) = stack.pop() {
        let last = *path.last().unwrap();
        if last == (m, end) {
            let better = best.as_ref().is_none_or(|(b, _)| match sign {
                Sign::Plus => area2 > *b,
                Sign::Minus => area2 < *b,
            });
            if better {
                best = Some((area2, path.clone()));
            }
            continue;
        }
        for x in last.0 + 1..=m {
            for y in lo..=hi {
                if !ok(x, y) {
                    continue;
                }
                if path.len() >= 2 {
                    let prev = path[path.len() - 2];
                    let turn = (last.0 - prev.0) * (y - last.1) - (last.1 - prev.1) * (x - last.0);
                    let fine = match sign {
                        Sign::Plus => turn < 0,
                        Sign::Minus => turn > 0,
                    };
                    if !fine {
                        continue;
                    }
                }
                // Segment must stay on the admissible side; checking lattice columns suffices.
                if !(last.0..=x).all(|cx| {
                    let cy = last.1 as f64 + (y - last.1) as f64 * (cx - last.0) as f64 / (x - last.0) as f64;
                    match sign {
                        Sign::Plus => cy <= theta * cx as f64 + 1e-12,
                        Sign::Minus => cy >= theta * cx as f64 - 1e-12,
                    }
                }) {
                    continue;
                }
                let mut next = path.clone();
                next.push((x, y));
                stack.push((next, area2 + (x - last.0) * (y + last.1)));
            }
        }
    }
    let path = best.unwrap().1;
    let mut parts: Vec<u32> = Vec::new();
    for w in path.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let g = num_gcd(dx, dy.abs());
        parts.extend(std::iter::repeat_n((dx / g) as u32, g as usize));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

#[test]
fn elliptic_partitions_match_path_search() {
    let kind = OrbitKind::EllipticToric(Direction::EAST);
    for theta in [0.01, 0.137, 0.3819660112501051, 0.71, -0.41, 2.2360679] {
        for m in 1..=6u32 {
            for sign in [Sign::Plus, Sign::Minus] {
                let want = partition_by_search(theta, i64::from(m), sign);
                assert_eq!(partitions(kind, Some(theta), m, sign).unwrap(), want, "θ={theta} m={m} {sign:?}");
            }
        }
    }
}
