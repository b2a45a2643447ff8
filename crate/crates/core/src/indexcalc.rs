//! Analytic index formulas, used to cross-check the combinatorial grading.

use thiserror::Error;

use crate::kpath::{gcd, total_class, Direction, H1Class, KLatticePath, Orbit, PathError, PathType};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IndexError {
    #[error("homology classes differ: {alpha} vs {beta}")]
    ClassMismatch { alpha: H1Class, beta: H1Class },
    #[error(transparent)]
    InvalidGenerator(#[from] PathError),
    #[error("rotation angle {0} is rational at this multiplicity")]
    RationalAngle(f64),
    #[error("{0} needs a rotation angle")]
    MissingAngle(&'static str),
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
}

/// Orbit classification relevant to the index formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    EllipticToric(Direction),
    EllipticVertical { up: bool },
    PositiveHyperbolic(Direction),
    /// One of `h^1`, `h^2` on the exceptional Klein bottles.
    NegativeHyperbolic { up: bool },
}

impl From<Orbit> for OrbitKind {
    fn from(o: Orbit) -> Self {
        match o {
            Orbit::Elliptic(d) if d.is_vertical() => OrbitKind::EllipticVertical { up: d.p() > 0 },
            Orbit::Elliptic(d) => OrbitKind::EllipticToric(d),
            Orbit::Hyperbolic(d) => OrbitKind::PositiveHyperbolic(d),
            Orbit::HalfArrow { up, .. } => OrbitKind::NegativeHyperbolic { up },
        }
    }
}

/// `CZ_τ(γ^k)` with the small positive rotation angle on elliptic orbits.
pub fn conley_zehnder(kind: OrbitKind, k: u32) -> i64 {
    match kind {
        OrbitKind::EllipticToric(_) | OrbitKind::EllipticVertical { .. } => 1,
        OrbitKind::PositiveHyperbolic(_) => 0,
        OrbitKind::NegativeHyperbolic { .. } => -i64::from(k),
    }
}

fn negative_hyperbolic_count(orbits: &[(Orbit, u32)]) -> u32 {
    orbits.iter().filter(|(o, _)| o.is_half_arrow()).map(|(_, m)| m).sum()
}

fn positive_hyperbolic_count(orbits: &[(Orbit, u32)]) -> u32 {
    orbits.iter().filter(|(o, _)| o.is_positive_hyperbolic()).map(|(_, m)| m).sum()
}

/// `c_τ(Z) = (n_α - n_β)/2`.
pub fn relative_chern(alpha: &[(Orbit, u32)], beta: &[(Orbit, u32)]) -> Result<f64, IndexError> {
    let (ca, cb) = (total_class(alpha), total_class(beta));
    if ca != cb {
        return Err(IndexError::ClassMismatch { alpha: ca, beta: cb });
    }
    let na = f64::from(negative_hyperbolic_count(alpha));
    let nb = f64::from(negative_hyperbolic_count(beta));
    Ok((na - nb) / 2.0)
}

/// Relative self-intersection `Q_τ` of a generator against the empty set.
pub fn q_tau(path: &KLatticePath) -> Result<i64, IndexError> {
    let shift = match path.validate()? {
        PathType::Empty | PathType::I => 0,
        PathType::II | PathType::III => 1,
        PathType::IV => 2,
    };
    Ok(path.doubled_area() + shift)
}

/// Sum of `CZ_τ` over all iterates of every orbit in the set.
pub fn cz_total(orbits: &[(Orbit, u32)]) -> i64 {
    orbits
        .iter()
        .map(|&(o, m)| (1..=m).map(|k| conley_zehnder(o.into(), k)).sum::<i64>())
        .sum()
}

/// `I = c_τ + Q_τ + CZ^I_τ`, evaluated term by term.
pub fn ech_index_decomposed(path: &KLatticePath) -> Result<i64, IndexError> {
    let orbits = path.orbits();
    let chern = relative_chern(&orbits, &[])?;
    debug_assert_eq!(chern.fract(), 0.0);
    Ok(chern as i64 + q_tau(path)? + cz_total(&orbits))
}

/// Genus and ends of a holomorphic curve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CurveData {
    pub genus: u32,
    pub positive: Vec<(Orbit, u32)>,
    pub negative: Vec<(Orbit, u32)>,
}

/// `ind(C) = 2(g + e(α) - 1) + n_α + n_β + h(α) + h(β)`.
pub fn fredholm_index(c: &CurveData) -> i64 {
    let e = c.positive.iter().filter(|(o, _)| o.is_elliptic()).count() as i64;
    2 * (i64::from(c.genus) + e - 1)
        + i64::from(negative_hyperbolic_count(&c.positive))
        + i64::from(negative_hyperbolic_count(&c.negative))
        + i64::from(positive_hyperbolic_count(&c.positive))
        + i64::from(positive_hyperbolic_count(&c.negative))
}

/// `J_0 = I - e` for a K-lattice path.
pub fn j0_kpath(path: &KLatticePath) -> i64 {
    path.grading() - path.elliptic_factors()
}

/// `J_0 = I - 2(x + y) - e` from the index and extents of a convex generator.
pub fn j0_convex(index: i64, x: i64, y: i64, elliptic_factors: i64) -> i64 {
    index - 2 * (x + y) - elliptic_factors
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Partition conditions for an orbit of multiplicity `m` at a positive (`Plus`)
/// or negative (`Minus`) end. Entries are nonincreasing.
pub fn partitions(kind: OrbitKind, theta: Option<f64>, m: u32, sign: Sign) -> Result<Vec<u32>, IndexError> {
    if m == 0 {
        return Err(IndexError::ZeroMultiplicity);
    }
    match kind {
        OrbitKind::PositiveHyperbolic(_) => Ok(vec![1; m as usize]),
        OrbitKind::NegativeHyperbolic { .. } => {
            let mut v = vec![2; (m / 2) as usize];
            if m % 2 == 1 {
                v.push(1);
            }
            Ok(v)
        }
        OrbitKind::EllipticToric(_) | OrbitKind::EllipticVertical { .. } => {
            let theta = theta.ok_or(IndexError::MissingAngle("elliptic orbit"))?;
            elliptic_partition(theta, m, sign)
        }
    }
}

fn elliptic_partition(theta: f64, m: u32, sign: Sign) -> Result<Vec<u32>, IndexError> {
    const TOL: f64 = 1e-9;
    let m = i64::from(m);
    if !theta.is_finite() || (1..=m).any(|x| {
        let t = x as f64 * theta;
        (t - t.round()).abs() < TOL
    }) {
        return Err(IndexError::RationalAngle(theta));
    }
    // Extreme lattice point of each column on the admissible side of y = θx.
    let pts: Vec<(i64, i64)> = (0..=m)
        .map(|x| {
            let t = x as f64 * theta;
            let y = match sign {
                Sign::Plus => t.floor(),
                Sign::Minus => t.ceil(),
            };
            (x, if x == 0 { 0 } else { y as i64 })
        })
        .collect();
    // Upper hull for the concave path below the line, lower hull for the convex one above.
    let keep_turn = |o: i64| match sign {
        Sign::Plus => o < 0,
        Sign::Minus => o > 0,
    };
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if keep_turn(cross) {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    let mut parts: Vec<u32> = Vec::new();
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let g = gcd(dx, dy);
        parts.extend(std::iter::repeat_n((dx / g) as u32, g as usize));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(parts)
}
