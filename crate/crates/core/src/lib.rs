//! Exact computation of K-stability data for toric log Fano couples.

pub mod error;
pub mod geometry;
pub mod linalg;
pub mod poly;
pub mod algebraic;
pub mod toric;
pub mod chambers;
pub mod invariants;
pub mod walls;
pub mod cm;
pub mod input;
pub mod oracles;

pub use error::{Error, Result};

/// Arbitrary-precision rational scalar used throughout.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer scalar.
pub type Integer = num_bigint::BigInt;
