//! Canonical uniformizing transforms, forward and inverse.

pub mod circle;
pub mod halfplane;
pub mod rotation;
pub mod rotsym;
pub mod shape;
pub mod simplex;
pub mod sphere;

pub use circle::{circle_median, CircleTransform};
pub use halfplane::{HalfPlaneDensity, HalfPlaneTransform};
pub use rotation::{matrix_fisher_angle_map, RotationTransform};
pub use rotsym::{acg_u, fisher_u, fisher_u_approx, pit_rotsym, rotsym_map};
pub use shape::{md_transform, ShapeTransform};
pub use simplex::{SimplexDensity, SimplexExpTransform, SimplexRadialTransform, SimplexSource};
pub use sphere::{build_nested_chart, ChartSource, NestedSphereChart, SphereEngine, SphereDensity};
