//! The Fisher (von Mises-Fisher) distribution on S², with exact sampling and
//! maximum likelihood fitting.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::sphere::UnitVector;
use crate::models::FitNote;

/// Largest κ̂ a fit reports; degenerate samples hit this cap.
pub const KAPPA_CAP: f64 = 1e4;

/// Fisher distribution F(μ, κ) on S²: density ∝ exp(κ xᵀμ).
#[derive(Debug, Clone)]
pub struct FisherModel {
    pub mu: UnitVector,
    pub kappa: f64,
}

impl FisherModel {
    pub fn new(mu: UnitVector, kappa: f64) -> Result<Self> {
        if mu.dim() != 3 {
            return Err(Error::domain("the Fisher model lives on S² (3 coordinates)"));
        }
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::domain(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        Ok(FisherModel { mu, kappa })
    }

    /// CDF of t = xᵀμ: (e^{κt} − e^{−κ})/(e^{κ} − e^{−κ}), computed in a form
    /// stable for large κ; reduces to (1+t)/2 at κ = 0.
    pub fn t_cdf(&self, t: f64) -> f64 {
        let k = self.kappa;
        let t = t.clamp(-1.0, 1.0);
        if k < 1e-10 {
            return 0.5 * (1.0 + t);
        }
        // Divide numerator and denominator by e^{κ}.
        let num = (k * (t - 1.0)).exp() - (-2.0 * k).exp();
        let den = 1.0 - (-2.0 * k).exp();
        (num / den).clamp(0.0, 1.0)
    }

    /// Inverse of `t_cdf`, exact in closed form.
    pub fn t_quantile(&self, q: f64) -> f64 {
        let k = self.kappa;
        let q = q.clamp(0.0, 1.0);
        if k < 1e-10 {
            return 2.0 * q - 1.0;
        }
        // t = 1 + ln(q + (1−q) e^{−2κ})/κ, the large-κ-stable rearrangement.
        (1.0 + (q + (1.0 - q) * (-2.0 * k).exp()).ln() / k).clamp(-1.0, 1.0)
    }
}

/// Exact Fisher sampler: inverse-CDF colatitude plus uniform longitude.
pub fn sample_fisher<R: Rng>(model: &FisherModel, n: usize, rng: &mut R) -> Vec<UnitVector> {
    let (e1, e2) = orthonormal_frame(&model.mu);
    let m = model.mu.as_slice();
    (0..n)
        .map(|_| {
            let t = model.t_quantile(rng.gen::<f64>());
            let s = (1.0 - t * t).max(0.0).sqrt();
            let xi = rng.gen::<f64>() * std::f64::consts::TAU;
            let (c, sn) = (xi.cos(), xi.sin());
            let coords: Vec<f64> = (0..3)
                .map(|i| t * m[i] + s * (c * e1[i] + sn * e2[i]))
                .collect();
            UnitVector::new(coords).expect("sampled point lies on the sphere")
        })
        .collect()
}

/// An orthonormal pair spanning the plane normal to m.
pub(crate) fn orthonormal_frame(m: &UnitVector) -> ([f64; 3], [f64; 3]) {
    let s = m.as_slice();
    // Start from the coordinate axis least aligned with m.
    let mut axis = [0.0; 3];
    let least = (0..3).min_by(|&i, &j| s[i].abs().partial_cmp(&s[j].abs()).unwrap()).unwrap();
    axis[least] = 1.0;
    let dot: f64 = axis.iter().zip(s).map(|(a, b)| a * b).sum();
    let mut e1 = [0.0; 3];
    for i in 0..3 {
        e1[i] = axis[i] - dot * s[i];
    }
    let norm = e1.iter().map(|a| a * a).sum::<f64>().sqrt();
    for v in &mut e1 {
        *v /= norm;
    }
    let e2 = [
        s[1] * e1[2] - s[2] * e1[1],
        s[2] * e1[0] - s[0] * e1[2],
        s[0] * e1[1] - s[1] * e1[0],
    ];
    (e1, e2)
}

/// A fitted model together with a note when the fit hit a guard rail.
#[derive(Debug, Clone)]
pub struct FisherFit {
    pub model: FisherModel,
    pub note: Option<FitNote>,
}

/// Maximum likelihood fit on S²: μ̂ is the resultant direction and κ̂ solves
/// coth κ − 1/κ = R̄.
pub fn fisher_mle(points: &[UnitVector]) -> Result<FisherFit> {
    if points.len() < 2 {
        return Err(Error::domain("the Fisher MLE needs at least two points"));
    }
    if points.iter().any(|x| x.dim() != 3) {
        return Err(Error::domain("the Fisher MLE expects points on S²"));
    }
    let n = points.len() as f64;
    let mut sum = [0.0; 3];
    for x in points {
        for (s, xi) in sum.iter_mut().zip(x.as_slice()) {
            *s += xi;
        }
    }
    let resultant = sum.iter().map(|a| a * a).sum::<f64>().sqrt();
    let rbar = resultant / n;
    if rbar < 1e-9 {
        // No preferred direction; report the uniform member with a fixed axis.
        let model = FisherModel::new(UnitVector::new(vec![0.0, 0.0, 1.0])?, 0.0)?;
        return Ok(FisherFit { model, note: Some(FitNote::DegenerateResultant) });
    }
    let mu = UnitVector::new(sum.to_vec())?;
    let (kappa, note) = solve_concentration(rbar);
    Ok(FisherFit { model: FisherModel::new(mu, kappa)?, note })
}

/// Mean resultant length of F(·, κ) on S²: A₃(κ) = coth κ − 1/κ.
fn mean_resultant(kappa: f64) -> f64 {
    if kappa < 1e-4 {
        // Series: κ/3 − κ³/45, avoiding the coth cancellation.
        return kappa / 3.0 - kappa.powi(3) / 45.0;
    }
    // coth κ = 1 + 2/(e^{2κ} − 1) avoids overflow for large κ.
    1.0 + 2.0 / ((2.0 * kappa).exp_m1()) - 1.0 / kappa
}

fn solve_concentration(rbar: f64) -> (f64, Option<FitNote>) {
    if rbar >= mean_resultant(KAPPA_CAP) {
        return (KAPPA_CAP, Some(FitNote::KappaCapped));
    }
    let (mut lo, mut hi) = (0.0, KAPPA_CAP);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean_resultant(mid) < rbar {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), None)
}
