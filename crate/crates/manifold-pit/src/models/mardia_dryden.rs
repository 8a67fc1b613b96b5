//! The Mardia-Dryden isotropic shape distribution on Σ^k_2 ≅ CP^{k−2}.
//!
//! Perturbing a mean pre-shape μ by i.i.d. complex Gaussian noise of
//! variance τ per complex coordinate and projecting to shape space gives the
//! density (relative to the uniform measure)
//!
//!   f([z]) = e^{κ(cos²ρ − 1)} L_{k−2}(−κ cos²ρ),   κ = 1/τ,
//!
//! where cos ρ = |⟨z, μ⟩| and L is the Laguerre polynomial. The identity
//! ₁F₁(k−1; 1; x) = eˣ L_{k−2}(−x) shows this integrates to exactly 1; the
//! exponent sign matters, the version with e^{κ(1 − cos²ρ)} does not
//! normalize. In these coordinates s = cos²ρ, the uniform law on CP^{k−2}
//! has CDF 1 − (1−s)^{k−2}.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::shape::ShapePoint;
use crate::models::uniform::uniform_shape;
use crate::models::FitNote;
use crate::numerics::cdf::MonotoneCdf;
use crate::numerics::special::{binomial, exp_growth_moment, laguerre};

/// Largest κ̂ a fit reports.
pub const KAPPA_CAP: f64 = 1e4;
/// Above this κ the series CDF gives way to direct quadrature tabulation.
const SERIES_KAPPA_LIMIT: f64 = 30.0;

#[derive(Debug, Clone)]
pub struct MardiaDrydenModel {
    pub mu: ShapePoint,
    pub kappa: f64,
}

impl MardiaDrydenModel {
    pub fn new(mu: ShapePoint, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::domain(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        Ok(MardiaDrydenModel { mu, kappa })
    }

    pub fn landmark_count(&self) -> usize {
        self.mu.landmark_count()
    }

    /// Density at [z] with respect to the uniform distribution on CP^{k−2}.
    pub fn density(&self, z: &ShapePoint) -> f64 {
        let c2 = self.mu.cos_distance(z).powi(2);
        let order = self.landmark_count() - 2;
        (self.kappa * (c2 - 1.0)).exp() * laguerre(order, -self.kappa * c2)
    }

    /// CDF of s = cos²ρ([X], [μ]) when [X] follows the model. κ = 0 gives
    /// 1 − (1−s)^{k−2} in closed form; moderate κ uses the binomial/Laguerre
    /// series with stable positive integrals ∫₀ˣ e^{κu} u^m du; large κ falls
    /// back to quadrature tabulation of the density.
    pub fn cos2_cdf(&self) -> Result<MonotoneCdf> {
        let k = self.landmark_count();
        let kappa = self.kappa;
        cos2_cdf_for(k, kappa)
    }
}

/// `MardiaDrydenModel::cos2_cdf` for explicit (k, κ).
pub fn cos2_cdf_for(k: usize, kappa: f64) -> Result<MonotoneCdf> {
    if k < 3 {
        return Err(Error::domain("shape spaces need at least three landmarks"));
    }
    if kappa < 1e-12 {
        let power = (k - 2) as i32;
        return Ok(MonotoneCdf::analytic(1.0, move |s| 1.0 - (1.0 - s).powi(power)));
    }
    if kappa > SERIES_KAPPA_LIMIT {
        let order = k - 2;
        let tail = (k as i32) - 3;
        let density = move |s: f64| {
            (kappa * (s - 1.0)).exp() * laguerre(order, -kappa * s) * (1.0 - s).powi(tail)
        };
        return MonotoneCdf::tabulated_density(1.0, &density);
    }
    // Unnormalized mass on [0, x]:
    //   Σ_i Σ_r C(k−2, i) C(k−3, r) (−1)^r (κ^i / i!) ∫₀ˣ e^{κ s} s^{i+r} ds,
    // from expanding L_{k−2}(−κs) and (1−s)^{k−3}; constants cancel in the
    // ratio below.
    let mass = move |x: f64| -> Result<f64> {
        let mut total = 0.0;
        let mut kappa_pow_over_fact = 1.0;
        for i in 0..=(k - 2) {
            if i > 0 {
                kappa_pow_over_fact *= kappa / i as f64;
            }
            let ci = binomial(k - 2, i);
            for r in 0..=(k - 3) {
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                let coeff = ci * binomial(k - 3, r) * sign * kappa_pow_over_fact;
                total += coeff * exp_growth_moment(i + r, kappa, x)?;
            }
        }
        Ok(total)
    };
    let denom = mass(1.0)?;
    if !(denom > 0.0) {
        return Err(Error::domain("shape CDF mass must be positive"));
    }
    let f = move |x: f64| -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        (mass(x).unwrap_or(f64::NAN) / denom).clamp(0.0, 1.0)
    };
    Ok(MonotoneCdf::analytic(1.0, f))
}

/// Exact isotropic sampler: perturb the mean pre-shape coordinates with
/// complex Gaussian noise of variance 1/κ per coordinate and project. κ = 0
/// falls back to the uniform law.
pub fn sample_md_isotropic<R: Rng>(
    model: &MardiaDrydenModel,
    n: usize,
    rng: &mut R,
) -> Result<Vec<ShapePoint>> {
    let k = model.landmark_count();
    if model.kappa < 1e-12 {
        return (0..n).map(|_| uniform_shape(k, rng)).collect();
    }
    // Real-coordinate deviation: τ = 1/κ per complex entry splits evenly.
    let sigma = (0.5 / model.kappa).sqrt();
    let mu = model.mu.coords();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let z: Vec<Complex64> = mu
            .iter()
            .map(|m| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                m + Complex64::new(sigma * re, sigma * im)
            })
            .collect();
        out.push(ShapePoint::new(z)?);
    }
    Ok(out)
}

/// Anisotropic perturbation of a raw landmark configuration: each landmark
/// moves by independent N₂(0, diag(sigma²)) noise in the plane, then the
/// configuration is Helmertized and projected to shape space.
pub fn sample_md_anisotropic<R: Rng>(
    mu_landmarks: &[Complex64],
    sigma: [f64; 2],
    n: usize,
    rng: &mut R,
) -> Result<Vec<ShapePoint>> {
    if mu_landmarks.len() < 3 {
        return Err(Error::domain("need at least three landmarks"));
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let pts: Vec<(f64, f64)> = mu_landmarks
            .iter()
            .map(|m| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                (m.re + sigma[0] * re, m.im + sigma[1] * im)
            })
            .collect();
        out.push(ShapePoint::from_landmarks(&pts)?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MardiaDrydenFit {
    pub model: MardiaDrydenModel,
    pub note: Option<FitNote>,
}

/// Maximum likelihood fit of the isotropic model: [μ̂] is the dominant
/// eigenvector of the complex scatter matrix (the full Procrustes mean) and
/// κ̂ maximizes the profile log-likelihood by golden-section search in ln κ.
pub fn md_fit_isotropic(points: &[ShapePoint]) -> Result<MardiaDrydenFit> {
    if points.len() < 2 {
        return Err(Error::domain("the shape fit needs at least two points"));
    }
    let k = points[0].landmark_count();
    if points.iter().any(|z| z.landmark_count() != k) {
        return Err(Error::domain("shape fit points must share a landmark count"));
    }
    let mu = procrustes_mean(points, k)?;

    let order = k - 2;
    let cos2: Vec<f64> = points.iter().map(|z| mu.cos_distance(z).powi(2)).collect();
    let loglik = |kappa: f64| -> f64 {
        cos2.iter()
            .map(|&c2| kappa * (c2 - 1.0) + laguerre(order, -kappa * c2).ln())
            .sum()
    };

    // Golden-section maximization in ln κ over [1e−6, KAPPA_CAP].
    let (mut lo, mut hi) = ((1e-6_f64).ln(), KAPPA_CAP.ln());
    let phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = loglik(x1.exp());
    let mut f2 = loglik(x2.exp());
    for _ in 0..120 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = loglik(x1.exp());
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = loglik(x2.exp());
        }
    }
    let kappa = (0.5 * (lo + hi)).exp();

    let note = if (loglik(1e-6) - loglik(KAPPA_CAP)).abs() < 1e-10 {
        Some(FitNote::FlatLikelihood)
    } else if kappa > 0.99 * KAPPA_CAP {
        Some(FitNote::KappaCapped)
    } else {
        None
    };
    let kappa = kappa.min(KAPPA_CAP);
    Ok(MardiaDrydenFit { model: MardiaDrydenModel::new(mu, kappa)?, note })
}

/// Dominant eigenvector of the complex scatter matrix Σ z z*, computed via
/// the real 2m×2m embedding [[A, −B], [B, A]] of the Hermitian matrix A + iB.
fn procrustes_mean(points: &[ShapePoint], k: usize) -> Result<ShapePoint> {
    let m = k - 1;
    let n = points.len() as f64;
    let mut re = vec![0.0; m * m];
    let mut im = vec![0.0; m * m];
    for z in points {
        let c = z.coords();
        for a in 0..m {
            for b in 0..m {
                let prod = c[a] * c[b].conj();
                re[a * m + b] += prod.re / n;
                im[a * m + b] += prod.im / n;
            }
        }
    }
    let dim = 2 * m;
    let mut embed = vec![0.0; dim * dim];
    for a in 0..m {
        for b in 0..m {
            embed[a * dim + b] = re[a * m + b];
            embed[a * dim + (m + b)] = -im[a * m + b];
            embed[(m + a) * dim + b] = im[a * m + b];
            embed[(m + a) * dim + (m + b)] = re[a * m + b];
        }
    }
    let (_, vectors) = crate::numerics::linalg::sym_eigen(dim, &embed);
    let top = &vectors[0];
    let coords: Vec<Complex64> =
        (0..m).map(|a| Complex64::new(top[a], top[m + a])).collect();
    ShapePoint::new(coords)
}
