//! Combinatorial embedded contact homology of the unit cotangent bundle of the
//! flat Klein bottle, with the capacity and embedding-obstruction machinery
//! built on top of it.

pub mod diffops;
pub mod enumerate;
pub mod homology;
pub mod indexcalc;
pub mod kpath;
pub mod obstruct;
pub mod spectrum;

pub use diffops::{differential, Chain};
pub use kpath::{parse_path, Direction, EdgeGroup, KLatticePath, PathError, PathType};
