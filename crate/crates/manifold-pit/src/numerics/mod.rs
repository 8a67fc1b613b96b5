//! Numerical workhorses: special functions, quadrature, monotone CDFs.
//!
//! Everything downstream (radial CDFs, angle maps, test p-values) reduces to
//! the routines in this module, so each one carries reference-value tests
//! against independently computed oracles.

pub mod cdf;
pub mod linalg;
pub mod quadrature;
pub mod special;

pub use cdf::{invert_cdf, MonotoneCdf, PchipCurve};
pub use quadrature::adaptive_simpson;
