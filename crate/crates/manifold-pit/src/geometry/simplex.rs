//! The open probability simplex: star-shaped coordinates at the centroid.

use crate::error::{Error, Result};

/// A point of the closed simplex: p nonnegative coordinates summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    /// Validates nonnegativity and renormalizes small drift in the sum.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain("simplex needs p ≥ 2 coordinates"));
        }
        if let Some((i, &bad)) = coords.iter().enumerate().find(|(_, &c)| c < -1e-12) {
            return Err(Error::domain(format!("negative coordinate {bad} at index {i}")));
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::domain(format!("coordinates sum to {sum}, expected 1")));
        }
        Ok(SimplexPoint(coords.into_iter().map(|c| (c / sum).max(0.0)).collect()))
    }

    pub fn dim_count(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// True when every coordinate is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&c| c > 0.0)
    }

    /// The barycenter (1/p, ..., 1/p).
    pub fn centroid(p: usize) -> SimplexPoint {
        SimplexPoint(vec![1.0 / p as f64; p])
    }
}

/// Radial coordinates of a simplex point around the centroid, through the
/// projection y ↦ (r, face, z) with r = 1 - p·y_(1) and z_j = (y_j - y_(1))/r.
///
/// `z` lies on the boundary face where coordinate `face` vanishes, and
/// y = (1 - r) c + r z reconstructs the point. The centroid itself has r = 0
/// and no defined face.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialCoords {
    Centroid,
    Interior { r: f64, face: usize, z: SimplexPoint },
}

/// Decomposes `y` into its radial coordinates. Ties in the minimum are broken
/// by the lowest index (a measure-zero set).
pub fn radial_projection(y: &SimplexPoint) -> RadialCoords {
    let p = y.dim_count();
    let (face, &ymin) = y
        .as_slice()
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("nonempty");
    let r = 1.0 - p as f64 * ymin;
    if r < 1e-14 {
        return RadialCoords::Centroid;
    }
    let z: Vec<f64> = y.as_slice().iter().map(|&c| ((c - ymin) / r).max(0.0)).collect();
    let mut z = z;
    z[face] = 0.0;
    RadialCoords::Interior { r, face, z: SimplexPoint(z) }
}

/// Rebuilds y = (1 - r) c + r z from radial coordinates.
pub fn radial_compose(r: f64, z: &SimplexPoint) -> SimplexPoint {
    let p = z.dim_count() as f64;
    SimplexPoint(z.as_slice().iter().map(|&zj| (1.0 - r) / p + r * zj).collect())
}

/// Conservative radius bound 1/(p·max_j |u_j|) for the ray from the centroid
/// in a zero-sum direction u. Movement up to this radius stays inside the
/// simplex regardless of the sign pattern of u.
pub fn simplex_max_radius(u: &[f64]) -> f64 {
    let p = u.len() as f64;
    let vmax = u.iter().fold(0.0_f64, |acc, &c| acc.max(c.abs()));
    assert!(vmax > 0.0, "direction must be nonzero");
    1.0 / (p * vmax)
}

/// Exact exit radius of the ray c + r·u: the r at which the most negative
/// coordinate of u drives y to the boundary.
pub fn simplex_exit_radius(u: &[f64]) -> Result<f64> {
    let p = u.len() as f64;
    let most_negative = u.iter().fold(0.0_f64, |acc, &c| acc.max(-c));
    if most_negative <= 0.0 {
        return Err(Error::domain("direction has no negative coordinate; not zero-sum"));
    }
    Ok(1.0 / (p * most_negative))
}

/// The straight-line exponential map at the centroid: y = c + r·u for a
/// zero-sum unit direction u. Errors when r reaches the exit radius (the
/// image would leave the open simplex).
pub fn simplex_exp(r: f64, u: &[f64]) -> Result<SimplexPoint> {
    let p = u.len();
    if p < 2 {
        return Err(Error::domain("direction needs p ≥ 2 coordinates"));
    }
    let sum: f64 = u.iter().sum();
    let norm: f64 = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    if sum.abs() > 1e-9 || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::domain("direction must be zero-sum and unit length"));
    }
    if r < 0.0 {
        return Err(Error::range(format!("negative radius {r}")));
    }
    let exit = simplex_exit_radius(u)?;
    if r >= exit {
        return Err(Error::range(format!("radius {r} ≥ exit radius {exit}")));
    }
    let inv_p = 1.0 / p as f64;
    Ok(SimplexPoint(u.iter().map(|&uj| inv_p + r * uj).collect()))
}

/// Centered coordinates (r, u) of an interior point: r = ‖y - c‖ and the unit
/// direction u = (y - c)/r; the partner of [`simplex_exp`].
pub fn simplex_log(y: &SimplexPoint) -> Option<(f64, Vec<f64>)> {
    let p = y.dim_count() as f64;
    let centered: Vec<f64> = y.as_slice().iter().map(|&c| c - 1.0 / p).collect();
    let r = centered.iter().map(|c| c * c).sum::<f64>().sqrt();
    if r < 1e-14 {
        return None;
    }
    Some((r, centered.into_iter().map(|c| c / r).collect()))
}
