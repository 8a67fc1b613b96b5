//! The Dirichlet distribution on the open simplex.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::geometry::simplex::SimplexPoint;
use crate::numerics::special::ln_gamma;

#[derive(Debug, Clone)]
pub struct DirichletModel {
    pub alpha: Vec<f64>,
}

impl DirichletModel {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::domain("Dirichlet needs at least two components"));
        }
        if alpha.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::domain("Dirichlet parameters must be positive"));
        }
        Ok(DirichletModel { alpha })
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// Density Γ(Σα)/∏Γ(α_j) ∏ y_j^{α_j−1} with respect to Lebesgue measure
    /// on the simplex.
    pub fn density(&self, y: &SimplexPoint) -> Result<f64> {
        if y.dim_count() != self.dim() {
            return Err(Error::domain("dimension mismatch in Dirichlet density"));
        }
        Ok(self.log_density(y)?.exp())
    }

    pub fn log_density(&self, y: &SimplexPoint) -> Result<f64> {
        let total: f64 = self.alpha.iter().sum();
        let mut log = ln_gamma(total);
        for (index, (a, yi)) in self.alpha.iter().zip(y.as_slice()).enumerate() {
            if *yi <= 0.0 {
                return Err(Error::ZeroCoordinate { index });
            }
            log += (a - 1.0) * yi.ln() - ln_gamma(*a);
        }
        Ok(log)
    }
}

/// Gamma-ratio sampler: y_j = g_j / Σ g_i with g_j ~ Gamma(α_j, 1).
pub fn sample_dirichlet<R: Rng>(
    model: &DirichletModel,
    n: usize,
    rng: &mut R,
) -> Result<Vec<SimplexPoint>> {
    let gammas: Vec<Gamma<f64>> = model
        .alpha
        .iter()
        .map(|&a| Gamma::new(a, 1.0).map_err(|e| Error::domain(format!("gamma setup: {e}"))))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let y = loop {
            let g: Vec<f64> = gammas.iter().map(|d| d.sample(rng)).collect();
            let total: f64 = g.iter().sum();
            // Redraw on underflow so points stay strictly interior.
            if total > 0.0 && g.iter().all(|&v| v > 0.0) {
                break SimplexPoint::new(g.into_iter().map(|v| v / total).collect())?;
            }
        };
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_ones_matches_the_uniform_law() {
        // Under Dirichlet(1,1,1), y₁ ~ Beta(1, 2) with CDF 1 − (1−y)².
        let model = DirichletModel::new(vec![1.0; 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 20_000;
        let mut first: Vec<f64> = sample_dirichlet(&model, n, &mut rng)
            .unwrap()
            .iter()
            .map(|y| y.as_slice()[0])
            .collect();
        first.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, y) in first.iter().enumerate() {
            let f = 1.0 - (1.0 - y) * (1.0 - y);
            ks = ks.max((f - i as f64 / n as f64).abs());
            ks = ks.max((f - (i + 1) as f64 / n as f64).abs());
        }
        assert!(ks <= 2.0 / (n as f64).sqrt(), "KS {ks}");
    }

    #[test]
    fn two_components_reduce_to_beta_moments() {
        let (a, b) = (2.5, 1.5);
        let model = DirichletModel::new(vec![a, b]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let n = 50_000;
        let ys = sample_dirichlet(&model, n, &mut rng).unwrap();
        let mean: f64 = ys.iter().map(|y| y.as_slice()[0]).sum::<f64>() / n as f64;
        let var: f64 =
            ys.iter().map(|y| (y.as_slice()[0] - mean).powi(2)).sum::<f64>() / n as f64;
        let want_mean = a / (a + b);
        let want_var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
        assert_abs_diff_eq!(mean, want_mean, epsilon = 4.0 * (want_var / n as f64).sqrt());
        assert_abs_diff_eq!(var, want_var, epsilon = 0.002);
    }

    #[test]
    fn coordinate_means_match_alpha_proportions() {
        let model = DirichletModel::new(vec![0.5, 2.0, 3.5, 1.0]).unwrap();
        let total = 7.0;
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let n = 50_000;
        let ys = sample_dirichlet(&model, n, &mut rng).unwrap();
        for j in 0..4 {
            let mean: f64 = ys.iter().map(|y| y.as_slice()[j]).sum::<f64>() / n as f64;
            let want = model.alpha[j] / total;
            let sd = (want * (1.0 - want) / (total + 1.0) / n as f64).sqrt();
            assert_abs_diff_eq!(mean, want, epsilon = 3.0 * sd);
        }
    }

    #[test]
    fn density_against_direct_formula() {
        let model = DirichletModel::new(vec![2.0, 1.0, 1.0]).unwrap();
        let y = SimplexPoint::new(vec![0.5, 0.3, 0.2]).unwrap();
        // Γ(4)/(Γ(2)Γ(1)Γ(1)) y₁ = 6 · 0.5.
        assert_abs_diff_eq!(model.density(&y).unwrap(), 3.0, epsilon = 1e-12);
        let uniform = DirichletModel::new(vec![1.0; 3]).unwrap();
        assert_abs_diff_eq!(uniform.density(&y).unwrap(), 2.0, epsilon = 1e-12);
    }
}
