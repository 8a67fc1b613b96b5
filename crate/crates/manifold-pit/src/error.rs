//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by the geometry, numerics, transform and test layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A point sits at (or numerically indistinguishable from) a chart pole.
    #[error("point at chart pole: |t| = {t}")]
    Pole { t: f64 },

    /// An argument left its admissible range.
    #[error("argument out of range: {what}")]
    Range { what: String },

    /// An input failed a domain precondition (dimension, normalization, sign).
    #[error("invalid input: {what}")]
    Domain { what: String },

    /// An iterative routine exhausted its budget before reaching tolerance.
    #[error("no convergence in {routine} after {iterations} iterations")]
    NonConvergence { routine: &'static str, iterations: usize },

    /// A function expected to be a CDF is not nondecreasing on its support.
    #[error("function is not monotone on its support near x = {near}")]
    NonMonotone { near: f64 },

    /// The geodesic median objective has near-tied minimizers.
    #[error("ambiguous median: objective gap {gap:e} between distant minimizers")]
    AmbiguousMedian { gap: f64 },

    /// A sample is too degenerate to fit (zero resultant, coincident points).
    #[error("degenerate sample: {what}")]
    DegenerateSample { what: String },

    /// A simplex point has a zero coordinate where a positive one is required.
    #[error("zero coordinate at index {index}")]
    ZeroCoordinate { index: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(what: impl Into<String>) -> Self {
        Error::Domain { what: what.into() }
    }

    pub fn range(what: impl Into<String>) -> Self {
        Error::Range { what: what.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
