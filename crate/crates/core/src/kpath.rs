//! K-lattice paths: the generators of the chain complex.
//!
//! A path starts at the origin, optionally drops through a pair of
//! half-arrows to `(0,-1)`, follows toric edge groups in strictly increasing
//! slope order, optionally climbs a final pair of half-arrows and ends on the
//! x-axis. Each edge group carries an elliptic multiplicity and at most one
//! hyperbolic copy.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use thiserror::Error;

/// Default tolerance for comparing actions.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A lattice point in the plane.
pub type Point = (i64, i64);

/// Primitive direction `(q, p)` with `q >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Direction {
    q: i64,
    p: i64,
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Direction {
    pub const DOWN: Direction = Direction { q: 0, p: -1 };
    pub const UP: Direction = Direction { q: 0, p: 1 };
    pub const EAST: Direction = Direction { q: 1, p: 0 };

    pub fn new(q: i64, p: i64) -> Result<Self, PathError> {
        let reason = if q < 0 {
            Some("horizontal component must be nonnegative")
        } else if q == 0 && p == 0 {
            Some("zero vector")
        } else if gcd(q, p) != 1 {
            Some("not primitive")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(PathError::InvalidDirection { q, p, reason }),
            None => Ok(Direction { q, p }),
        }
    }

    pub fn q(self) -> i64 {
        self.q
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn is_vertical(self) -> bool {
        self.q == 0
    }

    pub fn norm2(self) -> i64 {
        self.q * self.q + self.p * self.p
    }

    pub fn length(self) -> f64 {
        (self.norm2() as f64).sqrt()
    }
}

impl Ord for Direction {
    // Slope order on the right half-plane: straight down first, straight up last.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.q == 0, other.q == 0) {
            (true, true) => self.p.cmp(&other.p),
            (true, false) => {
                if self.p < 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (false, true) => {
                if other.p < 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, false) => (self.p * other.q).cmp(&(other.p * self.q)),
        }
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.p)
    }
}

/// All copies of the toric orbit in one direction class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeGroup {
    pub dir: Direction,
    pub e_mult: u32,
    pub h: bool,
}

impl EdgeGroup {
    pub fn elliptic(dir: Direction, e_mult: u32) -> Self {
        EdgeGroup { dir, e_mult, h: false }
    }

    pub fn hyperbolic(dir: Direction) -> Self {
        EdgeGroup { dir, e_mult: 0, h: true }
    }

    /// Total edge multiplicity, counting the hyperbolic copy.
    pub fn mult(&self) -> u32 {
        self.e_mult + u32::from(self.h)
    }
}

/// Element of `H_1(U*K) = Z + Z/2 + Z/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct H1Class {
    pub n: i64,
    pub a: u8,
    pub b: u8,
}

impl H1Class {
    pub const ZERO: H1Class = H1Class { n: 0, a: 0, b: 0 };

    pub fn new(n: i64, a: i64, b: i64) -> Self {
        H1Class {
            n,
            a: a.rem_euclid(2) as u8,
            b: b.rem_euclid(2) as u8,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    fn scale(self, k: u32) -> Self {
        H1Class::new(self.n * i64::from(k), i64::from(self.a) * i64::from(k), i64::from(self.b) * i64::from(k))
    }
}

impl Add for H1Class {
    type Output = H1Class;
    fn add(self, o: H1Class) -> H1Class {
        H1Class::new(self.n + o.n, i64::from(self.a + o.a), i64::from(self.b + o.b))
    }
}

impl fmt::Display for H1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.a, self.b)
    }
}

/// A simple Reeb orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orbit {
    /// Elliptic toric orbit, including the vertical classes `(0,±1)`.
    Elliptic(Direction),
    /// Positive hyperbolic toric orbit; never vertical.
    Hyperbolic(Direction),
    /// Negative hyperbolic orbit `h^copy_(0,±1)` on one of the exceptional Klein bottles.
    HalfArrow { up: bool, copy: u8 },
}

impl Orbit {
    pub fn class(&self) -> H1Class {
        match *self {
            Orbit::Elliptic(d) | Orbit::Hyperbolic(d) => H1Class::new(2 * d.p, 0, d.q),
            Orbit::HalfArrow { up: true, copy } => H1Class::new(1, 0, i64::from(copy == 2)),
            Orbit::HalfArrow { up: false, copy } => H1Class::new(-1, 1, i64::from(copy == 2)),
        }
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self, Orbit::Elliptic(_))
    }

    pub fn is_half_arrow(&self) -> bool {
        matches!(self, Orbit::HalfArrow { .. })
    }

    pub fn is_positive_hyperbolic(&self) -> bool {
        matches!(self, Orbit::Hyperbolic(_))
    }
}

/// Orbit set: simple orbits with covering multiplicities.
pub type OrbitSet = Vec<(Orbit, u32)>;

/// Sum of the homology classes of an orbit set.
pub fn total_class(orbits: &[(Orbit, u32)]) -> H1Class {
    orbits
        .iter()
        .fold(H1Class::ZERO, |acc, (o, m)| acc + o.class().scale(*m))
}

/// Generator type tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathType {
    Empty,
    I,
    II,
    III,
    IV,
}

impl fmt::Display for PathType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PathType::Empty => "empty",
            PathType::I => "I",
            PathType::II => "II",
            PathType::III => "III",
            PathType::IV => "IV",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid direction ({q},{p}): {reason}")]
    InvalidDirection { q: i64, p: i64, reason: &'static str },
    #[error("duplicate pair token {0}")]
    DuplicatePair(&'static str),
    #[error("pair token {0} out of place")]
    PairPosition(&'static str),
    #[error("repeated h on direction {0}")]
    RepeatedH(Direction),
    #[error("vertical direction {0} cannot carry h")]
    VerticalH(Direction),
    #[error("empty edge group in direction {0}")]
    EmptyGroup(Direction),
    #[error("non-convex slope order: {after} follows {before}")]
    NonConvex { before: Direction, after: Direction },
    #[error("nonzero homology class {0}")]
    NonzeroClass(H1Class),
}

/// A canonical, validated K-lattice path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KLatticePath {
    start_pair: bool,
    end_pair: bool,
    groups: Vec<EdgeGroup>,
}

impl KLatticePath {
    /// The empty generator.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds and validates a path from its parts.
    pub fn new(start_pair: bool, end_pair: bool, groups: Vec<EdgeGroup>) -> Result<Self, PathError> {
        let path = KLatticePath { start_pair, end_pair, groups };
        path.validate()?;
        Ok(path)
    }

    pub fn start_pair(&self) -> bool {
        self.start_pair
    }

    pub fn end_pair(&self) -> bool {
        self.end_pair
    }

    pub fn groups(&self) -> &[EdgeGroup] {
        &self.groups
    }

    pub fn is_empty(&self) -> bool {
        !self.start_pair && !self.end_pair && self.groups.is_empty()
    }

    /// Checks every invariant and returns the type tag.
    pub fn validate(&self) -> Result<PathType, PathError> {
        let mut prev: Option<Direction> = None;
        for g in &self.groups {
            Direction::new(g.dir.q, g.dir.p)?;
            if g.mult() == 0 {
                return Err(PathError::EmptyGroup(g.dir));
            }
            if g.h && g.dir.is_vertical() {
                return Err(PathError::VerticalH(g.dir));
            }
            if let Some(before) = prev {
                if before >= g.dir {
                    return Err(PathError::NonConvex { before, after: g.dir });
                }
            }
            prev = Some(g.dir);
        }
        let class = self.total_class();
        if !class.is_zero() {
            return Err(PathError::NonzeroClass(class));
        }
        Ok(self.path_type())
    }

    /// Type tag, assuming the path is valid.
    pub fn path_type(&self) -> PathType {
        match (self.start_pair, self.end_pair) {
            _ if self.is_empty() => PathType::Empty,
            (false, false) => PathType::I,
            (true, false) => PathType::II,
            (false, true) => PathType::III,
            (true, true) => PathType::IV,
        }
    }

    pub fn pair_count(&self) -> u32 {
        u32::from(self.start_pair) + u32::from(self.end_pair)
    }

    /// Orbit set of the generator.
    pub fn orbits(&self) -> OrbitSet {
        let mut out = Vec::new();
        if self.start_pair {
            out.push((Orbit::HalfArrow { up: false, copy: 1 }, 1));
            out.push((Orbit::HalfArrow { up: false, copy: 2 }, 1));
        }
        for g in &self.groups {
            if g.h {
                out.push((Orbit::Hyperbolic(g.dir), 1));
            }
            if g.e_mult > 0 {
                out.push((Orbit::Elliptic(g.dir), g.e_mult));
            }
        }
        if self.end_pair {
            out.push((Orbit::HalfArrow { up: true, copy: 1 }, 1));
            out.push((Orbit::HalfArrow { up: true, copy: 2 }, 1));
        }
        out
    }

    pub fn total_class(&self) -> H1Class {
        total_class(&self.orbits())
    }

    /// Horizontal extent `x(P)`.
    pub fn x_extent(&self) -> i64 {
        self.groups.iter().map(|g| g.dir.q * i64::from(g.mult())).sum()
    }

    /// Total toric multiplicity `m(P)`, vertical edges included.
    pub fn toric_mult(&self) -> i64 {
        self.groups.iter().map(|g| i64::from(g.mult())).sum()
    }

    /// Number of hyperbolic labels `h(P)`.
    pub fn h_count(&self) -> i64 {
        self.groups.iter().filter(|g| g.h).count() as i64
    }

    /// Number of distinct elliptic orbit factors.
    pub fn elliptic_factors(&self) -> i64 {
        self.groups.iter().filter(|g| g.e_mult > 0).count() as i64
    }

    /// Polyline vertices from the origin to `(x(P), 0)`, one per group boundary.
    pub fn vertices(&self) -> Vec<Point> {
        let mut pos = (0, 0);
        let mut out = vec![pos];
        if self.start_pair {
            pos.1 -= 1;
            out.push(pos);
        }
        for g in &self.groups {
            let m = i64::from(g.mult());
            pos = (pos.0 + g.dir.q * m, pos.1 + g.dir.p * m);
            out.push(pos);
        }
        if self.end_pair {
            pos.1 += 1;
            out.push(pos);
        }
        out
    }

    /// Twice the area between the path and the x-axis.
    pub fn doubled_area(&self) -> i64 {
        self.vertices()
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (-w[0].1 - w[1].1))
            .sum()
    }

    /// Lowest lattice height in the closed region over each column `0..=x(P)`.
    pub fn column_bottoms(&self) -> Vec<i64> {
        let width = self.x_extent();
        let mut bottoms = vec![0i64; width as usize + 1];
        let verts = self.vertices();
        for w in verts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x0 == x1 {
                let b = &mut bottoms[x0 as usize];
                *b = (*b).min(y0.min(y1));
                continue;
            }
            let (dx, dy) = (x1 - x0, y1 - y0);
            for t in 0..=dx {
                let num = dy * t;
                let up = num.div_euclid(dx) + i64::from(num.rem_euclid(dx) != 0);
                let b = &mut bottoms[(x0 + t) as usize];
                *b = (*b).min(y0 + up);
            }
        }
        bottoms
    }

    /// Lattice points of the closed region between the path and the x-axis.
    pub fn region_points(&self) -> Vec<Point> {
        self.column_bottoms()
            .iter()
            .enumerate()
            .flat_map(|(x, &b)| (b..=0).map(move |y| (x as i64, y)))
            .collect()
    }

    /// Number of lattice points in the closed region (the origin alone for the empty path).
    pub fn lattice_count(&self) -> i64 {
        self.column_bottoms().iter().map(|b| 1 - b).sum()
    }

    /// ECH index as `2 Area + m - h`.
    pub fn grading(&self) -> i64 {
        self.doubled_area() + self.toric_mult() - self.h_count()
    }

    /// ECH index in lattice-point form `2(L-1) - n/2 - x - h`.
    pub fn grading_lattice(&self) -> i64 {
        2 * (self.lattice_count() - 1)
            - i64::from(self.pair_count())
            - self.x_extent()
            - self.h_count()
    }

    /// Total Euclidean length, half-arrow pairs counting 1 each.
    pub fn action(&self) -> f64 {
        let toric: f64 = self
            .groups
            .iter()
            .map(|g| f64::from(g.mult()) * g.dir.length())
            .sum();
        toric + f64::from(self.pair_count())
    }
}

impl fmt::Display for KLatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let mut items: Vec<String> = Vec::new();
        if self.start_pair {
            items.push("H-".into());
        }
        for g in &self.groups {
            if g.h {
                items.push(format!("h{}", g.dir));
            }
            match g.e_mult {
                0 => {}
                1 => items.push(format!("e{}", g.dir)),
                m => items.push(format!("e{}^{}", g.dir, m)),
            }
        }
        if self.end_pair {
            items.push("H+".into());
        }
        f.write_str(&items.join(";"))
    }
}

impl FromStr for KLatticePath {
    type Err = PathError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_path(s)
    }
}

/// Canonical spec string of a path.
pub fn format_path(path: &KLatticePath) -> String {
    path.to_string()
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    base: usize,
}

impl Cursor<'_> {
    fn err(&self, msg: impl Into<String>) -> PathError {
        PathError::Syntax { pos: self.base + self.pos, msg: msg.into() }
    }

    fn expect(&mut self, c: u8) -> Result<(), PathError> {
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64, PathError> {
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PathError::Syntax { pos: self.base + start, msg: "expected integer".into() })
    }
}

/// Parses a path spec such as `H-;e(0,-1);h(1,2)`.
pub fn parse_path(text: &str) -> Result<KLatticePath, PathError> {
    if text.trim() == "0" {
        return Ok(KLatticePath::empty());
    }
    let items: Vec<(usize, &str)> = {
        let mut offset = 0;
        text.split(';')
            .map(|raw| {
                let lead = raw.len() - raw.trim_start().len();
                let item = (offset + lead, raw.trim());
                offset += raw.len() + 1;
                item
            })
            .collect()
    };
    let last = items.len() - 1;
    let (mut start_pair, mut end_pair) = (false, false);
    let mut terms: Vec<(Direction, bool, u32)> = Vec::new();
    for (idx, &(pos, item)) in items.iter().enumerate() {
        if item.is_empty() {
            return Err(PathError::Syntax { pos, msg: "empty item".into() });
        }
        match item {
            "H-" => {
                if start_pair {
                    return Err(PathError::DuplicatePair("H-"));
                }
                if idx != 0 {
                    return Err(PathError::PairPosition("H-"));
                }
                start_pair = true;
                continue;
            }
            "H+" => {
                if end_pair {
                    return Err(PathError::DuplicatePair("H+"));
                }
                if idx != last {
                    return Err(PathError::PairPosition("H+"));
                }
                end_pair = true;
                continue;
            }
            _ => {}
        }
        let mut cur = Cursor { bytes: item.as_bytes(), pos: 0, base: pos };
        let is_h = match cur.bytes[0] {
            b'e' => false,
            b'h' => true,
            _ => return Err(cur.err("expected 'e', 'h', 'H-' or 'H+'")),
        };
        cur.pos = 1;
        cur.expect(b'(')?;
        let q = cur.int()?;
        cur.expect(b',')?;
        let p = cur.int()?;
        cur.expect(b')')?;
        let mut count = 1u32;
        if cur.pos < cur.bytes.len() {
            if is_h {
                return Err(cur.err("h terms take no exponent"));
            }
            cur.expect(b'^')?;
            let start = cur.pos;
            let m = cur.int()?;
            if m < 1 || m > i64::from(u32::MAX) || !cur.bytes[start].is_ascii_digit() {
                return Err(PathError::Syntax { pos: pos + start, msg: "exponent must be a positive integer".into() });
            }
            count = m as u32;
            if cur.pos != cur.bytes.len() {
                return Err(cur.err("trailing characters"));
            }
        }
        let dir = Direction::new(q, p)?;
        terms.push((dir, is_h, count));
    }

    let mut groups: Vec<EdgeGroup> = Vec::new();
    for (dir, is_h, count) in terms {
        match groups.last_mut() {
            Some(g) if g.dir == dir => {
                if is_h {
                    if g.h {
                        return Err(PathError::RepeatedH(dir));
                    }
                    g.h = true;
                } else {
                    g.e_mult += count;
                }
                continue;
            }
            Some(g) if g.dir > dir => {
                return Err(PathError::NonConvex { before: g.dir, after: dir });
            }
            _ => {}
        }
        if is_h && dir.is_vertical() {
            return Err(PathError::VerticalH(dir));
        }
        groups.push(if is_h { EdgeGroup::hyperbolic(dir) } else { EdgeGroup::elliptic(dir, count) });
    }
    KLatticePath::new(start_pair, end_pair, groups)
}
