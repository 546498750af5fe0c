//! Exact computation for r-wise t-intersecting families of k-subsets.
//!
//! The crate builds the standard extremal constructions, computes exact
//! optima by exhaustive branch-and-bound at small sizes, and evaluates the
//! lattice-path and random-walk quantities used to bound such families. All
//! counts are big integers, all probabilities exact rationals, and irrational
//! constants are carried as certified rational intervals.

pub mod canonical;
pub mod error;
pub mod exactmath;
pub mod lattice;
pub mod search;
pub mod setfamilies;
pub mod shadows;
pub mod shifting;
pub mod thresholds;
pub mod verify;
pub mod walks;

pub use error::{Error, Result};
pub use exactmath::{binom, BigInt, BigRational, RealInterval};
pub use setfamilies::{Family, Subset};
