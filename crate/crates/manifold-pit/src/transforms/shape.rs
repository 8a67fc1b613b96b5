//! PIT on planar shape space for the Mardia-Dryden family.
//!
//! Relative to the mean shape [μ], a shape [z] splits into the radial part
//! t = cos ρ([z], [μ]) and a unit tangential direction. Under the isotropic
//! model the direction is already uniform, so the transform keeps it and
//! rescales only the radial part: s = t² moves through the model CDF of
//! cos²ρ and back through the inverse of the uniform law 1 − (1−s)^{k−2}.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::shape::ShapePoint;
use crate::models::mardia_dryden::MardiaDrydenModel;
use crate::numerics::cdf::MonotoneCdf;

/// Radial parts above 1 − RADIAL_TOL collapse to the mean shape: the
/// tangential direction is unresolvable there and both CDFs send 1 to 1.
const RADIAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ShapeTransform {
    mu: ShapePoint,
    /// k − 2, the exponent of the uniform cos²ρ law on CP^{k−2}.
    power: i32,
    /// CDF of cos²ρ([X], [μ]) under the model.
    cos2: MonotoneCdf,
}

impl ShapeTransform {
    pub fn new(model: &MardiaDrydenModel) -> Result<Self> {
        Ok(ShapeTransform {
            mu: model.mu.clone(),
            power: (model.landmark_count() - 2) as i32,
            cos2: model.cos2_cdf()?,
        })
    }

    pub fn mean(&self) -> &ShapePoint {
        &self.mu
    }

    /// Model sample in, uniform sample out.
    pub fn forward(&self, z: &ShapePoint) -> Result<ShapePoint> {
        self.remap(z, |s| {
            Ok(1.0 - (1.0 - self.cos2.eval(s)).powf(1.0 / self.power as f64))
        })
    }

    /// Uniform sample in, model sample out.
    pub fn inverse(&self, z: &ShapePoint) -> Result<ShapePoint> {
        self.remap(z, |s| self.cos2.invert(1.0 - (1.0 - s).powi(self.power)))
    }

    fn remap(&self, z: &ShapePoint, radial: impl Fn(f64) -> Result<f64>) -> Result<ShapePoint> {
        if z.landmark_count() != self.mu.landmark_count() {
            return Err(Error::domain(format!(
                "shape has {} landmarks, transform expects {}",
                z.landmark_count(),
                self.mu.landmark_count()
            )));
        }
        let dot = z.hermitian_dot(&self.mu);
        let t = dot.norm().min(1.0);
        if t >= 1.0 - RADIAL_TOL {
            return Ok(self.mu.clone());
        }
        let u2 = radial(t * t)?.clamp(0.0, 1.0);
        let u = u2.sqrt();
        // Align the representative so its component along μ is real ≥ 0,
        // then rescale that component from t to u and the orthogonal rest
        // by the ratio of the residual norms.
        let phase = if t > 1e-15 { dot / t } else { Complex64::new(1.0, 0.0) };
        let scale = ((1.0 - u2) / (1.0 - t * t)).sqrt();
        let coords: Vec<Complex64> = self
            .mu
            .coords()
            .iter()
            .zip(z.coords())
            .map(|(m, zi)| m * (u - scale * t) + zi / phase * scale)
            .collect();
        ShapePoint::new(coords)
    }
}

/// One-shot form of the shape transform.
pub fn md_transform(z: &ShapePoint, mu: &ShapePoint, kappa: f64) -> Result<ShapePoint> {
    let model = MardiaDrydenModel::new(mu.clone(), kappa)?;
    ShapeTransform::new(&model)?.forward(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::mardia_dryden::sample_md_isotropic;
    use crate::models::uniform::uniform_shape;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pentagon() -> ShapePoint {
        let pts: Vec<(f64, f64)> = (0..5)
            .map(|j| {
                let a = 2.0 * std::f64::consts::PI * j as f64 / 5.0;
                (a.cos(), a.sin())
            })
            .collect();
        ShapePoint::from_landmarks(&pts).unwrap()
    }

    /// Coordinate distance after aligning b's phase to a; unlike the
    /// acos-based Procrustes distance it resolves gaps well below 1e-8.
    fn chord(a: &ShapePoint, b: &ShapePoint) -> f64 {
        let d = a.hermitian_dot(b);
        let phase = if d.norm() > 1e-15 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| (x - y * phase).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn zero_concentration_is_the_identity() {
        let model = MardiaDrydenModel::new(pentagon(), 0.0).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..100 {
            let z = uniform_shape(5, &mut rng).unwrap();
            let y = transform.forward(&z).unwrap();
            assert!(chord(&z, &y) <= 1e-9, "kappa = 0 moved a shape by {}", chord(&z, &y));
        }
    }

    #[test]
    fn mean_shape_is_a_fixed_point() {
        let model = MardiaDrydenModel::new(pentagon(), 3.0).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let y = transform.forward(&pentagon()).unwrap();
        assert_eq!(y, pentagon());
        let back = transform.inverse(&pentagon()).unwrap();
        assert_eq!(back, pentagon());
    }

    #[test]
    fn orthogonal_shapes_are_fixed_points() {
        // ⟨z, μ⟩ = 0 forces both radial parts to 0, leaving the class fixed.
        let mu = ShapePoint::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let z = ShapePoint::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.3),
            Complex64::new(-0.2, 0.4),
            Complex64::new(0.1, -0.6),
        ])
        .unwrap();
        let model = MardiaDrydenModel::new(mu, 4.0).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let y = transform.forward(&z).unwrap();
        assert!(chord(&z, &y) <= 1e-12);
    }

    #[test]
    fn tangential_direction_is_preserved() {
        let mu = pentagon();
        let model = MardiaDrydenModel::new(mu.clone(), 3.0).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..50 {
            let z = uniform_shape(5, &mut rng).unwrap();
            let y = transform.forward(&z).unwrap();
            let (dz, dy) = (z.hermitian_dot(&mu), y.hermitian_dot(&mu));
            let (t, u) = (dz.norm(), dy.norm());
            // Unit tangential directions of input and output, phase-aligned.
            let wz: Vec<Complex64> = z
                .coords()
                .iter()
                .zip(mu.coords())
                .map(|(zi, m)| (zi / (dz / t) - m * t) / (1.0 - t * t).sqrt())
                .collect();
            let wy: Vec<Complex64> = y
                .coords()
                .iter()
                .zip(mu.coords())
                .map(|(yi, m)| (yi / (dy / u) - m * u) / (1.0 - u * u).sqrt())
                .collect();
            let align: Complex64 = wz.iter().zip(&wy).map(|(a, b)| a * b.conj()).sum();
            assert!(
                (align.norm() - 1.0).abs() <= 1e-9,
                "tangential direction moved, |⟨w_in, w_out⟩| = {}",
                align.norm()
            );
        }
    }

    #[test]
    fn round_trips_hold_on_model_samples() {
        let model = MardiaDrydenModel::new(pentagon(), 5.0).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let zs = sample_md_isotropic(&model, 300, &mut rng).unwrap();
        for z in &zs {
            let back = transform.inverse(&transform.forward(z).unwrap()).unwrap();
            let moved = chord(z, &back);
            assert!(moved <= 1e-9, "round trip moved {moved}");
        }
    }

    #[test]
    fn round_trips_hold_on_uniform_samples() {
        let model = MardiaDrydenModel::new(pentagon(), 5.0).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..300 {
            let z = uniform_shape(5, &mut rng).unwrap();
            let back = transform.forward(&transform.inverse(&z).unwrap()).unwrap();
            let moved = chord(&z, &back);
            assert!(moved <= 1e-9, "round trip moved {moved}");
        }
    }

    #[test]
    fn transformed_radial_parts_follow_the_uniform_law() {
        let model = MardiaDrydenModel::new(pentagon(), 5.0).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let zs = sample_md_isotropic(&model, 4000, &mut rng).unwrap();
        let mut pit: Vec<f64> = zs
            .iter()
            .map(|z| {
                let u2 = transform.forward(z).unwrap().cos_distance(&pentagon()).powi(2);
                1.0 - (1.0 - u2).powi(3)
            })
            .collect();
        pit.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = pit.len() as f64;
        let mut ks: f64 = 0.0;
        for (i, v) in pit.iter().enumerate() {
            ks = ks.max((v - i as f64 / n).abs()).max((v - (i + 1) as f64 / n).abs());
        }
        assert!(ks <= 0.025, "KS distance from uniform was {ks}");
    }

    #[test]
    fn landmark_mismatch_is_rejected() {
        let model = MardiaDrydenModel::new(pentagon(), 2.0).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let z = uniform_shape(4, &mut rng).unwrap();
        assert!(transform.forward(&z).is_err());
    }

    #[test]
    fn one_shot_form_matches_the_struct() {
        let mu = pentagon();
        let model = MardiaDrydenModel::new(mu.clone(), 2.5).unwrap();
        let transform = ShapeTransform::new(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        let z = uniform_shape(5, &mut rng).unwrap();
        let a = transform.forward(&z).unwrap();
        let b = md_transform(&z, &mu, 2.5).unwrap();
        assert!(chord(&a, &b) <= 1e-12);
    }
}
