//! Uniform sampling on each supported space.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::rotation::Rotation3;
use crate::geometry::shape::ShapePoint;
use crate::geometry::simplex::SimplexPoint;
use crate::geometry::sphere::UnitVector;
use crate::geometry::Space;
use crate::models::Points;

/// Uniform point on S^{p−1} by normalizing a standard Gaussian vector.
pub fn uniform_sphere<R: Rng>(p: usize, rng: &mut R) -> UnitVector {
    loop {
        let v: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(u) = UnitVector::new(v) {
            return u;
        }
    }
}

/// Uniform axis on RP^{p−1}, reported as one of its two unit representatives
/// with a random sign so the vector law is symmetric.
pub fn uniform_projective<R: Rng>(p: usize, rng: &mut R) -> UnitVector {
    // The normalized Gaussian is already sign-symmetric.
    uniform_sphere(p, rng)
}

/// Haar-uniform rotation from a uniform unit quaternion.
pub fn uniform_rotation<R: Rng>(rng: &mut R) -> Rotation3 {
    let q = uniform_sphere(4, rng);
    let s = q.as_slice();
    // A unit vector is never short enough to fail normalization.
    Rotation3::from_quaternion([s[0], s[1], s[2], s[3]]).expect("unit quaternion")
}

/// Uniform shape with k landmarks: complex Gaussian pre-shape, normalized and
/// phase-aligned.
pub fn uniform_shape<R: Rng>(k: usize, rng: &mut R) -> Result<ShapePoint> {
    loop {
        let z: Vec<Complex64> = (0..k - 1)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(s) = ShapePoint::new(z) {
            return Ok(s);
        }
    }
}

/// Uniform point on the open simplex: normalized standard exponentials
/// (Dirichlet with every α = 1).
pub fn uniform_simplex<R: Rng>(p: usize, rng: &mut R) -> SimplexPoint {
    loop {
        let e: Vec<f64> = (0..p).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = e.iter().sum();
        if total > 0.0 {
            if let Ok(y) = SimplexPoint::new(e.into_iter().map(|v| v / total).collect()) {
                return y;
            }
        }
    }
}

/// Uniform sample on a space, dispatching on the tag. The half-plane has
/// infinite volume and admits no uniform distribution.
pub fn sample_uniform(space: Space, n: usize, seed: u64) -> Result<Points> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    Ok(match space {
        Space::Sphere { p } => Points::Sphere((0..n).map(|_| uniform_sphere(p, &mut rng)).collect()),
        Space::Projective { p } => {
            Points::Projective((0..n).map(|_| uniform_projective(p, &mut rng)).collect())
        }
        Space::Rotations => Points::Rotations((0..n).map(|_| uniform_rotation(&mut rng)).collect()),
        Space::Shape { k } => {
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                out.push(uniform_shape(k, &mut rng)?);
            }
            Points::Shape(out)
        }
        Space::Simplex { p } => {
            Points::Simplex((0..n).map(|_| uniform_simplex(p, &mut rng)).collect())
        }
        Space::HalfPlane => {
            return Err(Error::domain("the half-plane has no uniform distribution"));
        }
    })
}
