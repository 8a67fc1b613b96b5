//! Planar shape space of k labelled landmarks.
//!
//! A configuration of k points in the plane, up to translation, scale and
//! rotation, is stored as its Helmertized pre-shape: k - 1 complex
//! coordinates with unit norm, one representative per projective class.
//! The representative's phase is fixed so that the coordinate of largest
//! modulus is real and positive.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A shape: unit-norm complex (k-1)-vector under the fixed phase convention.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapePoint(Vec<Complex64>);

impl ShapePoint {
    /// Normalizes and phase-aligns a raw complex coordinate vector.
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain("shape space needs k ≥ 3 landmarks"));
        }
        let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::domain("cannot normalize near-zero configuration"));
        }
        let mut z: Vec<Complex64> = coords.into_iter().map(|c| c / norm).collect();
        // Phase convention: largest-modulus coordinate real positive.
        let (j, _) = z
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
            .expect("nonempty");
        let phase = z[j] / z[j].norm();
        for c in &mut z {
            *c /= phase;
        }
        Ok(ShapePoint(z))
    }

    /// Helmertizes k raw landmark positions (removing translation), then
    /// normalizes. Errors on fully coincident landmarks.
    pub fn from_landmarks(landmarks: &[(f64, f64)]) -> Result<Self> {
        let k = landmarks.len();
        if k < 3 {
            return Err(Error::domain("need at least 3 landmarks"));
        }
        let z: Vec<Complex64> = landmarks.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
        let mut out = Vec::with_capacity(k - 1);
        for j in 1..k {
            // Helmert row j: (1, ..., 1, -j, 0, ..., 0) / sqrt(j (j+1)).
            let scale = 1.0 / ((j * (j + 1)) as f64).sqrt();
            let mut acc = Complex64::new(0.0, 0.0);
            for zi in z.iter().take(j) {
                acc += zi;
            }
            acc -= z[j] * j as f64;
            out.push(acc * scale);
        }
        ShapePoint::new(out)
    }

    /// Number of landmarks k (one more than the coordinate count).
    pub fn landmark_count(&self) -> usize {
        self.0.len() + 1
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    /// Hermitian inner product ⟨self, other⟩ = Σ z_j conj(w_j).
    pub fn hermitian_dot(&self, other: &ShapePoint) -> Complex64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// cos of the Procrustes distance: |⟨self, other⟩| clamped to [0, 1].
    pub fn cos_distance(&self, other: &ShapePoint) -> f64 {
        self.hermitian_dot(other).norm().min(1.0)
    }
}

/// Procrustes (geodesic) distance ρ = arccos |⟨z, w⟩| between two shapes,
/// invariant to the representatives' phases.
pub fn shape_distance(a: &ShapePoint, b: &ShapePoint) -> f64 {
    a.cos_distance(b).acos()
}
