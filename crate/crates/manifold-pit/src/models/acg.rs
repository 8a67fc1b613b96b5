//! The angular central Gaussian distribution on RP^{p−1}.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::sphere::UnitVector;
use crate::numerics::linalg::sym_eigen;

/// ACG(A) on RP^{p−1}: density ∝ (xᵀA⁻¹x)^{−p/2} with A symmetric positive
/// definite and det A = 1 for identifiability.
#[derive(Debug, Clone)]
pub struct AcgModel {
    p: usize,
    a: Vec<f64>,
    sqrt_a: Vec<f64>,
    eigenvalues: Vec<f64>,
    axes: Vec<Vec<f64>>,
}

impl AcgModel {
    pub fn new(p: usize, a: Vec<f64>) -> Result<Self> {
        if p < 2 || a.len() != p * p {
            return Err(Error::domain("ACG needs a p x p matrix with p >= 2"));
        }
        for i in 0..p {
            for j in 0..i {
                if (a[i * p + j] - a[j * p + i]).abs() > 1e-12 {
                    return Err(Error::domain("ACG matrix must be symmetric"));
                }
            }
        }
        let (eigenvalues, axes) = sym_eigen(p, &a);
        if eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::domain("ACG matrix must be positive definite"));
        }
        let det: f64 = eigenvalues.iter().product();
        if (det - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!("ACG matrix must have det 1, got {det}")));
        }
        // A^{1/2} = Σ √λ_k q_k q_kᵀ from the spectral decomposition.
        let mut sqrt_a = vec![0.0; p * p];
        for (lambda, q) in eigenvalues.iter().zip(&axes) {
            let root = lambda.sqrt();
            for i in 0..p {
                for j in 0..p {
                    sqrt_a[i * p + j] += root * q[i] * q[j];
                }
            }
        }
        Ok(AcgModel { p, a, sqrt_a, eigenvalues, axes })
    }

    /// Two-eigenvalue model: eigenvalue ratio `ratio` along `axis` against a
    /// (p−1)-fold eigenvalue in the complement, scaled so det = 1.
    pub fn axial(axis: &UnitVector, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0) || !ratio.is_finite() {
            return Err(Error::domain("eigenvalue ratio must be positive"));
        }
        let p = axis.dim();
        let b = ratio.powf(-1.0 / p as f64);
        let a_val = ratio * b;
        let s = axis.as_slice();
        let mut a = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..p {
                let proj = s[i] * s[j];
                let comp = if i == j { 1.0 - proj } else { -proj };
                a[i * p + j] = a_val * proj + b * comp;
            }
        }
        AcgModel::new(p, a)
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    /// Eigenvalues in descending order with matching unit eigenvectors.
    pub fn spectrum(&self) -> (&[f64], &[Vec<f64>]) {
        (&self.eigenvalues, &self.axes)
    }

    /// Ratio of the top eigenvalue to the (assumed common) remaining one.
    pub fn leading_ratio(&self) -> f64 {
        self.eigenvalues[0] / self.eigenvalues[self.p - 1]
    }

    /// Unit representative of the modal axis (top eigenvector).
    pub fn modal_axis(&self) -> UnitVector {
        UnitVector::new(self.axes[0].clone()).expect("eigenvector has unit norm")
    }
}

/// Sample ACG(A): x = A^{1/2} z / ‖A^{1/2} z‖ with z standard Gaussian. The
/// sign symmetry of z already makes both representatives equally likely.
pub fn sample_acg<R: Rng>(model: &AcgModel, n: usize, rng: &mut R) -> Vec<UnitVector> {
    let p = model.p;
    (0..n)
        .map(|_| loop {
            let z: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
            let y: Vec<f64> = (0..p)
                .map(|i| (0..p).map(|j| model.sqrt_a[i * p + j] * z[j]).sum())
                .collect();
            if let Ok(u) = UnitVector::new(y) {
                break u;
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_matrix_gives_uniform_axes() {
        let model = AcgModel::new(3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let n = 20_000;
        let pts = sample_acg(&model, n, &mut rng);
        // Scatter matrix of a uniform axial law is I/3.
        let mut scatter = [0.0; 9];
        for x in &pts {
            let s = x.as_slice();
            for i in 0..3 {
                for j in 0..3 {
                    scatter[i * 3 + j] += s[i] * s[j] / n as f64;
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 / 3.0 } else { 0.0 };
                assert_abs_diff_eq!(scatter[i * 3 + j], want, epsilon = 0.01);
            }
        }
    }

    #[test]
    fn axial_constructor_hits_det_one_and_ratio() {
        let axis = UnitVector::new(vec![0.6, 0.8, 0.0]).unwrap();
        let model = AcgModel::axial(&axis, 4.0).unwrap();
        assert_abs_diff_eq!(model.leading_ratio(), 4.0, epsilon = 1e-9);
        let det: f64 = model.spectrum().0.iter().product();
        assert_abs_diff_eq!(det, 1.0, epsilon = 1e-10);
        // Modal axis matches up to sign.
        assert!(model.modal_axis().dot(&axis).abs() > 1.0 - 1e-9);
    }

    #[test]
    fn axial_projection_has_the_predicted_law() {
        // For the two-eigenvalue model, u = t/√(r + (1−r)t²) with t = xᵀaxis
        // and r = ratio recovers the uniform-sphere distribution of t, i.e.
        // U(−1,1) on S². This exercises the sampler end to end.
        let axis = UnitVector::new(vec![0.0, 0.0, 1.0]).unwrap();
        let ratio = 4.0;
        let model = AcgModel::axial(&axis, ratio).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 20_000;
        let mut us: Vec<f64> = sample_acg(&model, n, &mut rng)
            .iter()
            .map(|x| {
                let t = x.dot(&axis);
                t / (ratio + (1.0 - ratio) * t * t).sqrt()
            })
            .collect();
        us.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, u) in us.iter().enumerate() {
            let f = 0.5 * (u + 1.0);
            ks = ks.max((f - i as f64 / n as f64).abs());
            ks = ks.max((f - (i + 1) as f64 / n as f64).abs());
        }
        assert!(ks <= 2.0 / (n as f64).sqrt(), "KS distance {ks}");
    }

    #[test]
    fn constructor_rejects_bad_matrices() {
        // Asymmetric.
        assert!(AcgModel::new(2, vec![1.0, 0.2, 0.0, 1.0]).is_err());
        // Determinant far from one.
        assert!(AcgModel::new(2, vec![2.0, 0.0, 0.0, 2.0]).is_err());
        // Not positive definite (det = 1 but indefinite).
        assert!(AcgModel::new(2, vec![0.0, 1.0, 1.0, 0.0]).is_err());
    }
}
