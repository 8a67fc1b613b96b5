//! Points and primitive operations on the supported sample spaces.

pub mod halfplane;
pub mod median;
pub mod rotation;
pub mod shape;
pub mod simplex;
pub mod sphere;

pub use halfplane::HalfPlanePoint;
pub use median::{frechet_median, MedianOutcome};
pub use rotation::Rotation3;
pub use shape::ShapePoint;
pub use simplex::SimplexPoint;
pub use sphere::UnitVector;

/// The sample spaces the transforms operate on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// S^{p-1} embedded in R^p.
    Sphere { p: usize },
    /// RP^{p-1}: antipodal pairs on S^{p-1}.
    Projective { p: usize },
    /// The rotation group SO(3).
    Rotations,
    /// Planar shape space of k labelled landmarks (k - 1 complex coordinates).
    Shape { k: usize },
    /// The open simplex of p nonnegative coordinates summing to one.
    Simplex { p: usize },
    /// The Poincaré upper half-plane.
    HalfPlane,
}
