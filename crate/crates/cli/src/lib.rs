//! Report schemas emitted by the `kech` binary.

pub mod report;
