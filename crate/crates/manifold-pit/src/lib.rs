//! Canonical probability integral transforms on compact and hyperbolic spaces.
//!
//! The crate turns uniformity tests into goodness-of-fit tests: a candidate
//! model on a sphere, projective space, rotation group, planar shape space,
//! simplex or the hyperbolic half-plane is reduced to the uniform (or another
//! canonical) distribution by an almost-everywhere diffeomorphism, after which
//! any test of uniformity applies.
//!
//! Layout:
//! - [`geometry`]: points, charts and primitive operations on the supported spaces;
//! - [`numerics`]: the special functions, quadrature and monotone-CDF machinery
//!   everything else is built on;
//! - [`models`]: samplers, densities and estimators for the model families;
//! - [`transforms`]: the integral transforms themselves, forward and inverse;
//! - [`uniformity`]: tests of uniformity and their null calibration;
//! - [`gof`]: fixed-parameter and fitted-parameter goodness-of-fit pipelines;
//! - [`sim`]: the simulation studies behind the `simlab` binary.

pub mod error;
pub mod geometry;
pub mod gof;
pub mod io;
pub mod models;
pub mod numerics;
pub mod seeding;
pub mod sim;
pub mod transforms;
pub mod uniformity;

pub use error::{Error, Result};
