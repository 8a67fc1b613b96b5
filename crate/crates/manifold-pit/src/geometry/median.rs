//! Weighted Fréchet (geometric) median on the sphere.
//!
//! The median minimizes F(m) = Σ wᵢ d(m, xᵢ) over S^{p−1}. Because
//! d(−m, x) = π − d(m, x), the objective satisfies F(m) + F(−m) = π Σ wᵢ, so
//! a sample whose optimum sits at exactly half that total has an antipodal
//! near-tie and no usable median. A spread-out sample has no meaningful
//! median either; that case is detected with a Rayleigh test up front.

use crate::error::{Error, Result};
use crate::geometry::sphere::{sphere_exp, sphere_log, UnitVector};
use crate::numerics::special::chi_square_sf;

/// Result of a median computation.
#[derive(Debug, Clone)]
pub enum MedianOutcome {
    /// The minimizer of the weighted geodesic distance sum.
    Median(UnitVector),
    /// The sample is statistically indistinguishable from uniform; no median
    /// is reported and callers should treat the marginal as already uniform.
    Uniform,
}

const MAX_ITERATIONS: usize = 200;
const GRADIENT_TOL: f64 = 1e-10;
const TIE_GAP: f64 = 1e-6;
const RAYLEIGH_LEVEL: f64 = 1e-3;
/// The Rayleigh statistic is only asymptotically chi-square, so the
/// uniformity gate stays out of the way for small samples (where the
/// spread-out case is meaningless anyway).
const RAYLEIGH_MIN_N: f64 = 100.0;

/// Weighted geometric median by Weiszfeld iteration on the sphere.
///
/// Weights must be nonnegative with a positive sum; pass a slice of ones for
/// the unweighted median. Detection order: uniformity first (returns
/// `Uniform`), then convergence, then the antipodal tie check
/// (`AmbiguousMedian`).
pub fn frechet_median(points: &[UnitVector], weights: &[f64]) -> Result<MedianOutcome> {
    if points.is_empty() || points.len() != weights.len() {
        return Err(Error::domain("median needs matching nonempty points and weights"));
    }
    let p = points[0].dim();
    if points.iter().any(|x| x.dim() != p) {
        return Err(Error::domain("median points must share a dimension"));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::domain("median weights must be nonnegative"));
    }
    let total_weight: f64 = weights.iter().sum();
    if total_weight <= 0.0 {
        return Err(Error::domain("median weights must not all vanish"));
    }

    // Weighted resultant: the gate statistic and the canonical start.
    let mut resultant = vec![0.0; p];
    for (x, w) in points.iter().zip(weights) {
        for (r, xi) in resultant.iter_mut().zip(x.as_slice()) {
            *r += w * xi / total_weight;
        }
    }
    let resultant_norm: f64 = resultant.iter().map(|a| a * a).sum::<f64>().sqrt();

    // Effective sample size (= n for equal weights) decides whether the
    // asymptotic Rayleigh gate is trustworthy.
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    let n_eff = total_weight * total_weight / sum_sq;
    if n_eff >= RAYLEIGH_MIN_N {
        let statistic = p as f64 * n_eff * resultant_norm * resultant_norm;
        if chi_square_sf(statistic, p as f64) > RAYLEIGH_LEVEL {
            return Ok(MedianOutcome::Uniform);
        }
    }

    let mut m = if resultant_norm > 1e-12 {
        UnitVector::new(resultant)?
    } else {
        // Concentrated-but-balanced start; rare once the gate is active.
        points[0].clone()
    };

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        // Gradient of F at m is −Σ wᵢ log_m(xᵢ)/dᵢ; points at m (dᵢ ≈ 0)
        // contribute a subgradient ball of radius wᵢ instead.
        let mut direction = vec![0.0; p];
        let mut inverse_distance_sum = 0.0;
        let mut coincident_weight = 0.0;
        for (x, w) in points.iter().zip(weights) {
            let d = m.geodesic_distance(x);
            if d < 1e-12 {
                coincident_weight += w;
                continue;
            }
            inverse_distance_sum += w / d;
            // A point at the antipode pulls equally in every direction; its
            // net contribution is zero rather than a Pole error.
            if let Ok(log) = sphere_log(&m, x) {
                for (acc, l) in direction.iter_mut().zip(&log) {
                    *acc += w * l / d;
                }
            }
        }
        let gradient_norm: f64 =
            direction.iter().map(|a| a * a).sum::<f64>().sqrt() / total_weight;
        if gradient_norm <= GRADIENT_TOL.max(coincident_weight / total_weight) {
            converged = true;
            break;
        }
        let step: Vec<f64> = direction.iter().map(|a| a / inverse_distance_sum).collect();
        m = sphere_exp(&m, &step);
    }
    if !converged {
        return Err(Error::NonConvergence { routine: "frechet_median", iterations: MAX_ITERATIONS });
    }

    // F(m) + F(−m) = π Σ wᵢ: a normalized objective near π/2 means the
    // antipode does just as well.
    let objective: f64 = points
        .iter()
        .zip(weights)
        .map(|(x, w)| w * m.geodesic_distance(x))
        .sum::<f64>()
        / total_weight;
    let gap = (std::f64::consts::PI - 2.0 * objective).abs();
    if gap < TIE_GAP {
        return Err(Error::AmbiguousMedian { gap });
    }
    Ok(MedianOutcome::Median(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn uv(v: &[f64]) -> UnitVector {
        UnitVector::new(v.to_vec()).unwrap()
    }

    fn median_point(outcome: MedianOutcome) -> UnitVector {
        match outcome {
            MedianOutcome::Median(m) => m,
            MedianOutcome::Uniform => panic!("expected a median, got the uniform flag"),
        }
    }

    #[test]
    fn point_mass_is_its_own_median() {
        let m = uv(&[0.0, 0.6, 0.8]);
        let got = median_point(frechet_median(&[m.clone()], &[1.0]).unwrap());
        assert_abs_diff_eq!(got.dot(&m), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_atoms_balance_at_the_midpoint() {
        let a = uv(&[1.0, 0.0, 0.0]);
        let b = uv(&[0.0, 1.0, 0.0]);
        let got = median_point(frechet_median(&[a.clone(), b.clone()], &[1.0, 1.0]).unwrap());
        let s = 0.5_f64.sqrt();
        assert_abs_diff_eq!(got.as_slice()[0], s, epsilon = 1e-9);
        assert_abs_diff_eq!(got.as_slice()[1], s, epsilon = 1e-9);
        assert_abs_diff_eq!(got.geodesic_distance(&a), got.geodesic_distance(&b), epsilon = 1e-9);
    }

    #[test]
    fn concentrated_sample_recovers_the_center() {
        // Rough Fisher-like cloud around μ: colatitudes ~ small, longitudes uniform.
        let mu = uv(&[0.0, 0.0, 1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut points = Vec::new();
        for _ in 0..2000 {
            let colat: f64 = -(1.0 - rng.gen::<f64>() * (1.0 - (-20.0_f64).exp())).ln() / 10.0;
            let lon = rng.gen::<f64>() * std::f64::consts::TAU;
            points.push(uv(&[
                colat.sin() * lon.cos(),
                colat.sin() * lon.sin(),
                colat.cos(),
            ]));
        }
        let weights = vec![1.0; points.len()];
        let got = median_point(frechet_median(&points, &weights).unwrap());
        assert!(got.geodesic_distance(&mu) < 0.02, "median drifted: {:?}", got);
    }

    #[test]
    fn uniform_sample_raises_the_flag() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut points = Vec::new();
        for _ in 0..5000 {
            let v: Vec<f64> = (0..3)
                .map(|_| {
                    let (a, b): (f64, f64) = (rng.gen(), rng.gen());
                    (-2.0 * a.ln()).sqrt() * (std::f64::consts::TAU * b).cos()
                })
                .collect();
            points.push(UnitVector::new(v).unwrap());
        }
        let weights = vec![1.0; points.len()];
        assert!(matches!(frechet_median(&points, &weights).unwrap(), MedianOutcome::Uniform));
    }

    #[test]
    fn rotation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut points = Vec::new();
        for _ in 0..60 {
            let v = vec![
                0.9 + 0.2 * rng.gen::<f64>(),
                0.3 * (rng.gen::<f64>() - 0.5),
                0.3 * (rng.gen::<f64>() - 0.5),
            ];
            points.push(UnitVector::new(v).unwrap());
        }
        let weights = vec![1.0; points.len()];
        let base = median_point(frechet_median(&points, &weights).unwrap());

        // Rotate by 90° about z and compare.
        let rotated: Vec<UnitVector> = points
            .iter()
            .map(|x| {
                let s = x.as_slice();
                uv(&[-s[1], s[0], s[2]])
            })
            .collect();
        let rot_median = median_point(frechet_median(&rotated, &weights).unwrap());
        let b = base.as_slice();
        let expected = uv(&[-b[1], b[0], b[2]]);
        assert!(rot_median.geodesic_distance(&expected) < 1e-6);
    }

    #[test]
    fn antipodal_near_tie_is_flagged() {
        // A symmetric cross on S¹: each antipodal pair contributes π to the
        // objective from anywhere, so F is flat at the tie value.
        let a = uv(&[1.0, 0.0]);
        let b = uv(&[-1.0, 0.0]);
        let c = uv(&[0.0, 1.0]);
        let d = uv(&[0.0, -1.0]);
        let err = frechet_median(&[a, b, c, d], &[1.0; 4]).unwrap_err();
        assert!(matches!(err, Error::AmbiguousMedian { .. }), "got {err:?}");
    }

    #[test]
    fn weighted_median_follows_the_heavy_side() {
        // 3:1 weights on two atoms: the median sits at the heavy atom (on a
        // geodesic the median is the weighted 1-D median).
        let a = uv(&[1.0, 0.0, 0.0]);
        let b = uv(&[0.0, 1.0, 0.0]);
        let got = median_point(frechet_median(&[a.clone(), b], &[3.0, 1.0]).unwrap());
        assert!(got.geodesic_distance(&a) < 1e-6);
    }
}
