//! The projected normal distribution: a trivariate Gaussian pushed radially
//! onto S².

use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::sphere::UnitVector;

/// Sample x = g/‖g‖ with g ~ N₃(μ, I₃). μ = 0 gives the uniform law.
pub fn sample_projected_normal<R: Rng>(mu: [f64; 3], n: usize, rng: &mut R) -> Vec<UnitVector> {
    (0..n)
        .map(|_| loop {
            let g: Vec<f64> = mu
                .iter()
                .map(|m| m + rng.sample::<f64, _>(StandardNormal))
                .collect();
            if let Ok(u) = UnitVector::new(g) {
                break u;
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_mean_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 50_000;
        let pts = sample_projected_normal([0.0; 3], n, &mut rng);
        let mut sum = [0.0; 3];
        for x in &pts {
            for (s, xi) in sum.iter_mut().zip(x.as_slice()) {
                *s += xi;
            }
        }
        let rbar = sum.iter().map(|a| a * a).sum::<f64>().sqrt() / n as f64;
        assert!(rbar < 0.015, "resultant {rbar}");
    }

    #[test]
    fn mean_direction_tracks_mu() {
        let mu = [1.2, -1.6, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 100_000;
        let pts = sample_projected_normal(mu, n, &mut rng);
        let mut sum = [0.0; 3];
        for x in &pts {
            for (s, xi) in sum.iter_mut().zip(x.as_slice()) {
                *s += xi;
            }
        }
        let dir = UnitVector::new(sum.to_vec()).unwrap();
        let target = UnitVector::new(mu.to_vec()).unwrap();
        assert!(dir.geodesic_distance(&target) < 0.02, "mean direction off by {}", dir.geodesic_distance(&target));
    }
}
