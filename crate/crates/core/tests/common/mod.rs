//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kech_core::kpath::{total_class, KLatticePath, Orbit};
use kech_core::obstruct::path_from_orbits;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Every generator with action at most `l`, found by walking vertex sequences
/// through the box `0 <= x <= l`, `-l/2 <= y <= 0` with strictly increasing
/// edge angle, then labelling each edge in every admissible way.
pub fn box_generators(l: f64) -> BTreeSet<String> {
    let eps = 1e-9;
    let xmax = (l + eps).floor() as i64;
    let dmax = (l / 2.0 + eps).floor() as i64;
    let points: Vec<(i64, i64)> = (0..=xmax).flat_map(|x| (-dmax..=0).map(move |y| (x, y))).collect();
    let mut out = BTreeSet::new();
    for s in 0..=1i64 {
        if s > dmax {
            continue;
        }
        let mut edges = Vec::new();
        walk((0, -s), None, s as f64, s, l + eps, &points, &mut edges, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    cur: (i64, i64),
    angle: Option<f64>,
    cost: f64,
    s: i64,
    limit: f64,
    points: &[(i64, i64)],
    edges: &mut Vec<((i64, i64), i64)>,
    out: &mut BTreeSet<String>,
) {
    for e in 0..=1i64 {
        if cur.1 == -e && (cur.0 + s + e) % 2 == 0 && cost + e as f64 <= limit {
            label(s == 1, e == 1, edges, 0, &mut Vec::new(), out);
        }
    }
    for &v in points {
        if v == cur || v.0 < cur.0 {
            continue;
        }
        let (dx, dy) = (v.0 - cur.0, v.1 - cur.1);
        let g = gcd(dx, dy);
        let prim = (dx / g, dy / g);
        let a = (prim.1 as f64).atan2(prim.0 as f64);
        if angle.is_some_and(|b| a <= b + 1e-12) {
            continue;
        }
        let c = cost + ((dx * dx + dy * dy) as f64).sqrt();
        if c > limit {
            continue;
        }
        edges.push((prim, g));
        walk(v, Some(a), c, s, limit, points, edges, out);
        edges.pop();
    }
}

fn label(
    start: bool,
    end: bool,
    edges: &[((i64, i64), i64)],
    i: usize,
    items: &mut Vec<String>,
    out: &mut BTreeSet<String>,
) {
    if i == edges.len() {
        let mut all = Vec::new();
        if start {
            all.push("H-".to_string());
        }
        all.extend(items.iter().cloned());
        if end {
            all.push("H+".to_string());
        }
        out.insert(if all.is_empty() { "0".to_string() } else { all.join(";") });
        return;
    }
    let ((q, p), g) = edges[i];
    let hs: &[i64] = if q == 0 { &[0] } else { &[0, 1] };
    for &h in hs {
        let before = items.len();
        if h == 1 {
            items.push(format!("h({q},{p})"));
        }
        match g - h {
            0 => {}
            1 => items.push(format!("e({q},{p})")),
            m => items.push(format!("e({q},{p})^{m}")),
        }
        label(start, end, edges, i + 1, items, out);
        items.truncate(before);
    }
}

/// Every way to split the orbit multiset of `path` into nullhomologous
/// sub-multisets, no two of which contain the same elliptic orbit.
pub fn multiset_splits(path: &KLatticePath) -> BTreeSet<Vec<String>> {
    let units: Vec<Orbit> = path
        .orbits()
        .into_iter()
        .flat_map(|(o, m)| std::iter::repeat_n(o, m as usize))
        .collect();
    let mut out = BTreeSet::new();
    if units.is_empty() {
        out.insert(vec!["0".to_string()]);
        return out;
    }
    let mut labels = vec![0usize; units.len()];
    splits(&units, &mut labels, 0, 0, &mut out);
    out
}

fn splits(units: &[Orbit], labels: &mut [usize], i: usize, blocks: usize, out: &mut BTreeSet<Vec<String>>) {
    if i < units.len() {
        for b in 0..=blocks {
            labels[i] = b;
            splits(units, labels, i + 1, blocks.max(b + 1), out);
        }
        return;
    }
    let mut parts: Vec<BTreeMap<Orbit, u32>> = vec![BTreeMap::new(); blocks];
    for (o, &b) in units.iter().zip(labels.iter()) {
        *parts[b].entry(*o).or_default() += 1;
    }
    for i in 0..blocks {
        let set: Vec<(Orbit, u32)> = parts[i].iter().map(|(o, m)| (*o, *m)).collect();
        if !total_class(&set).is_zero() {
            return;
        }
        for j in i + 1..blocks {
            if parts[i].keys().any(|o| o.is_elliptic() && parts[j].contains_key(o)) {
                return;
            }
        }
    }
    let mut specs: Vec<String> = parts
        .iter()
        .map(|p| {
            let set: Vec<(Orbit, u32)> = p.iter().map(|(o, m)| (*o, *m)).collect();
            path_from_orbits(&set).expect("nullhomologous orbit sets are paths").to_string()
        })
        .collect();
    specs.sort();
    out.insert(specs);
}

/// `c_k` of the ball `B(1)`: the least `d` with `k <= d(d+3)/2`.
pub fn ball_capacity(k: u64) -> f64 {
    (0..).find(|d: &u64| k <= d * (d + 3) / 2).unwrap() as f64
}
