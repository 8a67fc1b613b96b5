//! Closed-form transforms for rotationally symmetric distributions on S^{p-1}.
//!
//! A rotationally symmetric density about an axis μ depends on x only through
//! t = xᵀμ. Matching the CDF of t to the uniform one gives a scalar map
//! u(t), and the full transform rescales the component along μ from t to u
//! while keeping the tangential direction:
//!
//!     φ(x) = u μ + sqrt((1 - u²)/(1 - t²)) (I - μμᵀ) x.
//!
//! The Fisher and angular central Gaussian families admit closed forms for
//! u(t); anything else goes through a pair of monotone CDFs.

use crate::error::Result;
use crate::geometry::sphere::UnitVector;
use crate::numerics::cdf::MonotoneCdf;

const POLE_TOL: f64 = 1e-12;

/// The u(t) map for the Fisher distribution on S² with concentration κ:
/// u = (2 e^{κ(t-1)} - 1 - e^{-2κ}) / (1 - e^{-2κ}), evaluated stably.
pub fn fisher_u(t: f64, kappa: f64) -> f64 {
    if kappa < 1e-12 {
        return t;
    }
    // u = 1 - 2·expm1(κ(t-1)) / expm1(-2κ); both factors are ≤ 0.
    1.0 - 2.0 * (kappa * (t - 1.0)).exp_m1() / (-2.0 * kappa).exp_m1()
}

/// Inverse of [`fisher_u`]: t = 1 + ln(1 + (1-u)/2 · expm1(-2κ)) / κ.
pub fn fisher_u_inv(u: f64, kappa: f64) -> f64 {
    if kappa < 1e-12 {
        return u;
    }
    1.0 + (0.5 * (1.0 - u) * (-2.0 * kappa).exp_m1()).ln_1p() / kappa
}

/// High-concentration approximation u ≈ 2 e^{κ(t-1)} - 1, accurate to
/// 2 e^{-2κ} uniformly in t.
pub fn fisher_u_approx(t: f64, kappa: f64) -> f64 {
    2.0 * (kappa * (t - 1.0)).exp() - 1.0
}

/// The u(t) map for the angular central Gaussian with axis ratio a/b:
/// u = t / sqrt(ratio + (1 - ratio) t²). Odd in t with u(±1) = ±1.
pub fn acg_u(t: f64, ratio: f64) -> f64 {
    t / (ratio + (1.0 - ratio) * t * t).sqrt()
}

/// Inverse of [`acg_u`], which is `acg_u` with the reciprocal ratio.
pub fn acg_u_inv(u: f64, ratio: f64) -> f64 {
    acg_u(u, 1.0 / ratio)
}

/// Rescales the component of x along μ from t = xᵀμ to the given u, keeping
/// the tangential direction. At the poles (|t| = 1) the tangential part
/// vanishes and the point maps radially: t = ±1 goes to ±μ.
pub fn rotsym_map(mu: &UnitVector, x: &UnitVector, u: f64) -> UnitVector {
    let t = mu.dot(x);
    let m = mu.as_slice();
    let xs = x.as_slice();
    let tang_sq = (1.0 - t * t).max(0.0);
    if tang_sq < POLE_TOL * POLE_TOL {
        let sign = if t >= 0.0 { 1.0 } else { -1.0 };
        return UnitVector::new(m.iter().map(|&c| sign * c).collect()).expect("unit axis");
    }
    let u = u.clamp(-1.0, 1.0);
    let scale = ((1.0 - u * u).max(0.0) / tang_sq).sqrt();
    let coords: Vec<f64> =
        xs.iter().zip(m).map(|(&xi, &mi)| u * mi + scale * (xi - t * mi)).collect();
    UnitVector::new(coords).expect("nonzero by construction")
}

/// The rotationally symmetric transform with the scalar map given by a pair
/// of colatitude CDFs: G_mu for the source distribution and G_0 for the
/// target, both CDFs of acos(xᵀμ) on [0, π]. The output keeps the tangential
/// direction of x and has colatitude G_0⁻¹(G_mu(acos t)).
pub fn pit_rotsym(
    g_mu: &MonotoneCdf,
    g_0: &MonotoneCdf,
    mu: &UnitVector,
    x: &UnitVector,
) -> Result<UnitVector> {
    let t = mu.dot(x).clamp(-1.0, 1.0);
    let v = t.acos();
    let u = g_0.invert(g_mu.eval(v))?.cos();
    Ok(rotsym_map(mu, x, u))
}
