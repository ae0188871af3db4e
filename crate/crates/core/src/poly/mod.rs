//! Polynomials: dense univariate over Z/Q, sparse multivariate over Q.

pub mod multivariate;
pub mod univariate;

pub use multivariate::MultiPoly;
pub use univariate::{IntPolynomial, QPoly, SturmSequence};
