//! Distribution models: samplers, densities, and fitters.
//!
//! Each family lives in its own submodule and exposes a `sample_*` function
//! driven by a caller-supplied [`rand::Rng`], so the seeding policy stays in
//! one place ([`crate::seeding`]). Fitters return a `*Fit` struct whose
//! optional [`FitNote`] records when the estimate hit a guard rail instead of
//! silently returning a boundary value.

pub mod acg;
pub mod dirichlet;
pub mod fisher;
pub mod mardia_dryden;
pub mod matrix_fisher;
pub mod projected_normal;
pub mod uniform;

use crate::geometry::{HalfPlanePoint, Rotation3, ShapePoint, SimplexPoint, Space, UnitVector};

pub use acg::{sample_acg, AcgModel};
pub use dirichlet::{sample_dirichlet, DirichletModel};
pub use fisher::{fisher_mle, sample_fisher, FisherFit, FisherModel};
pub use mardia_dryden::{
    md_fit_isotropic, sample_md_anisotropic, sample_md_isotropic, MardiaDrydenFit,
    MardiaDrydenModel,
};
pub use matrix_fisher::{residual_angle, sample_matrix_fisher, MatrixFisherModel};
pub use projected_normal::sample_projected_normal;
pub use uniform::sample_uniform;

/// A homogeneous sample from one of the supported spaces.
#[derive(Debug, Clone)]
pub enum Points {
    Sphere(Vec<UnitVector>),
    Projective(Vec<UnitVector>),
    Rotations(Vec<Rotation3>),
    Shape(Vec<ShapePoint>),
    Simplex(Vec<SimplexPoint>),
    HalfPlane(Vec<HalfPlanePoint>),
}

impl Points {
    pub fn len(&self) -> usize {
        match self {
            Points::Sphere(v) | Points::Projective(v) => v.len(),
            Points::Rotations(v) => v.len(),
            Points::Shape(v) => v.len(),
            Points::Simplex(v) => v.len(),
            Points::HalfPlane(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The space the sample lives on; `None` for an empty sample, whose
    /// dimension cannot be recovered from the data.
    pub fn space(&self) -> Option<Space> {
        match self {
            Points::Sphere(v) => v.first().map(|x| Space::Sphere { p: x.dim() }),
            Points::Projective(v) => v.first().map(|x| Space::Projective { p: x.dim() }),
            Points::Rotations(v) => v.first().map(|_| Space::Rotations),
            Points::Shape(v) => v.first().map(|z| Space::Shape { k: z.landmark_count() }),
            Points::Simplex(v) => v.first().map(|y| Space::Simplex { p: y.dim_count() }),
            Points::HalfPlane(v) => v.first().map(|_| Space::HalfPlane),
        }
    }
}

/// Flags attached to fits that ran into a boundary of the parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitNote {
    /// The resultant length was numerically zero, so the mean direction is
    /// arbitrary and the concentration is reported as zero.
    DegenerateResultant,
    /// The concentration estimate exceeded the numerical cap and was clamped.
    KappaCapped,
    /// The profile likelihood was flat to machine precision, so the reported
    /// concentration is not identified by the data.
    FlatLikelihood,
}
