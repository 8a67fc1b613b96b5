//! Unit vectors and the tangent-normal decomposition on S^{p-1}.

use crate::error::{Error, Result};

/// How close |x·m| may come to 1 before a point counts as sitting at a pole.
pub const POLE_TOL: f64 = 1e-12;

/// A point on S^{p-1}: a vector in R^p with unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Normalizes `coords` to unit length. Errors when the norm is too small
    /// to define a direction or the dimension is below 2.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain("unit vector needs dimension at least 2"));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::domain(format!("cannot normalize vector with norm {norm:e}")));
        }
        Ok(UnitVector(coords.into_iter().map(|c| c / norm).collect()))
    }

    /// Wraps coordinates already known to be unit length (debug-checked).
    pub fn from_unit_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!({
            let n: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
            (n - 1.0).abs() < 1e-9
        });
        UnitVector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// The antipode -x.
    pub fn antipode(&self) -> UnitVector {
        UnitVector(self.0.iter().map(|c| -c).collect())
    }

    /// Geodesic (great-circle) distance to `other`.
    pub fn geodesic_distance(&self, other: &UnitVector) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

/// Splits x into colatitude r from the pole m and the unit tangent direction
/// u, so that x = cos(r) m + sin(r) u with u ⊥ m.
///
/// Errors with [`Error::Pole`] when |x·m| > 1 - 1e-12: there the direction is
/// numerically undefined.
pub fn tangent_normal_decompose(x: &UnitVector, m: &UnitVector) -> Result<(f64, UnitVector)> {
    assert_eq!(x.dim(), m.dim(), "dimension mismatch");
    let t = x.dot(m).clamp(-1.0, 1.0);
    if t.abs() > 1.0 - POLE_TOL {
        return Err(Error::Pole { t });
    }
    let r = t.acos();
    let tangent: Vec<f64> = x
        .as_slice()
        .iter()
        .zip(m.as_slice())
        .map(|(xi, mi)| xi - t * mi)
        .collect();
    let u = UnitVector::new(tangent)?;
    Ok((r, u))
}

/// Rebuilds the point cos(r) m + sin(r) u from a tangent-normal pair.
pub fn tangent_normal_compose(r: f64, u: &UnitVector, m: &UnitVector) -> UnitVector {
    assert_eq!(u.dim(), m.dim(), "dimension mismatch");
    let (c, s) = (r.cos(), r.sin());
    let coords: Vec<f64> = m
        .as_slice()
        .iter()
        .zip(u.as_slice())
        .map(|(mi, ui)| c * mi + s * ui)
        .collect();
    // Renormalize to absorb rounding; u ⊥ m makes this a unit vector already.
    UnitVector::new(coords).expect("compose of orthonormal pair is non-degenerate")
}

/// Cut radius of the flat unit torus seen from direction u: the distance from
/// a point to its cut locus along direction (cos u, sin u).
pub fn torus_cut_radius(u: f64) -> f64 {
    let c = u.cos().abs();
    let s = u.sin().abs();
    std::f64::consts::PI / c.max(s)
}

/// Exponential map on S^{p−1}: exp_m(v) = cos|v| m + sin|v| v/|v| for a
/// tangent vector v ⊥ m given in ambient coordinates. |v| = 0 returns m.
pub fn sphere_exp(m: &UnitVector, v: &[f64]) -> UnitVector {
    let norm: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm < 1e-300 {
        return m.clone();
    }
    let (c, s) = (norm.cos(), norm.sin());
    let coords: Vec<f64> = m
        .as_slice()
        .iter()
        .zip(v)
        .map(|(mi, vi)| c * mi + s * vi / norm)
        .collect();
    UnitVector::new(coords).expect("exp of tangent vector stays on the sphere")
}

/// Log map on S^{p−1}: the tangent vector at m (ambient coordinates, norm =
/// geodesic distance) pointing toward x. Errors at the antipode where the
/// direction is undefined.
pub fn sphere_log(m: &UnitVector, x: &UnitVector) -> Result<Vec<f64>> {
    let t = m.dot(x).clamp(-1.0, 1.0);
    if t < -1.0 + POLE_TOL {
        return Err(Error::Pole { t });
    }
    let d = t.acos();
    if d < 1e-300 {
        return Ok(vec![0.0; m.dim()]);
    }
    // (x − t m) has norm sin d; rescale so the result has norm d.
    let scale = d / d.sin();
    Ok(m.as_slice()
        .iter()
        .zip(x.as_slice())
        .map(|(mi, xi)| scale * (xi - t * mi))
        .collect())
}
