//! The circle transform: uniformizing a continuous positive density on S¹.
//!
//! Points are represented by angles. The transform anchors at a median (or a
//! caller-chosen anchor), splits the circle into the two half-circles on
//! either side, and matches each side's conditional CDF to the uniform one.
//! Since a geodesic median balances the two half-circle masses exactly, the
//! pushforward is uniform; with an arbitrary anchor it is uniform up to the
//! side-mass imbalance, which the per-side normalization keeps out of the
//! conditional laws.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::cdf::MonotoneCdf;
use crate::numerics::quadrature::gauss_legendre_integrate;

/// Relative flatness below which a density is treated as uniform.
pub const UNIFORM_REL_TOL: f64 = 1e-9;
/// Objective gap below which two distant median candidates count as tied.
const MEDIAN_TIE_GAP: f64 = 1e-8;
const COARSE_GRID: usize = 2048;

/// Wraps an angle into (-π, π].
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// A built uniformizing map on the circle. `forward` sends the source
/// distribution to the uniform distribution on (-π, π]; `inverse` undoes it.
#[derive(Debug, Clone)]
pub enum CircleTransform {
    Identity,
    Anchored { anchor: f64, positive: MonotoneCdf, negative: MonotoneCdf },
}

impl CircleTransform {
    /// Identity map, for levels whose marginal is already uniform.
    pub fn identity() -> Self {
        CircleTransform::Identity
    }

    /// Builds the transform for a (possibly unnormalized) density g of the
    /// angle, anchored at the given angle. Detects a numerically flat g and
    /// returns the identity in that case.
    pub fn new(g: &dyn Fn(f64) -> f64, anchor: f64) -> Result<Self> {
        if density_is_flat(g) {
            return Ok(CircleTransform::Identity);
        }
        let positive = MonotoneCdf::tabulated_density(PI, &|s| g(wrap_angle(anchor + s)))?;
        let negative = MonotoneCdf::tabulated_density(PI, &|s| g(wrap_angle(anchor - s)))?;
        Ok(CircleTransform::Anchored { anchor: wrap_angle(anchor), positive, negative })
    }

    /// Builds the transform anchored at the geodesic median of g.
    pub fn from_density(g: &dyn Fn(f64) -> f64) -> Result<Self> {
        if density_is_flat(g) {
            return Ok(CircleTransform::Identity);
        }
        let anchor = circle_median(g)?;
        Self::new(g, anchor)
    }

    pub fn forward(&self, theta: f64) -> f64 {
        match self {
            CircleTransform::Identity => wrap_angle(theta),
            CircleTransform::Anchored { anchor, positive, negative } => {
                let delta = wrap_angle(theta - anchor);
                let (sign, cdf) =
                    if delta >= 0.0 { (1.0, positive) } else { (-1.0, negative) };
                wrap_angle(anchor + sign * PI * cdf.eval(delta.abs()))
            }
        }
    }

    pub fn inverse(&self, theta: f64) -> Result<f64> {
        match self {
            CircleTransform::Identity => Ok(wrap_angle(theta)),
            CircleTransform::Anchored { anchor, positive, negative } => {
                let delta = wrap_angle(theta - anchor);
                let (sign, cdf) =
                    if delta >= 0.0 { (1.0, positive) } else { (-1.0, negative) };
                let offset = cdf.invert(delta.abs() / PI)?;
                Ok(wrap_angle(anchor + sign * offset))
            }
        }
    }
}

fn density_is_flat(g: &dyn Fn(f64) -> f64) -> bool {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..256 {
        let v = g(-PI + 2.0 * PI * (i as f64 + 0.5) / 256.0);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi > 0.0 && (hi - lo) <= UNIFORM_REL_TOL * hi
}

/// Geodesic median of a 2π-periodic density on the circle: the minimizer of
/// M(m) = ∫ d_arc(m, θ) g(θ) dθ. A coarse scan of M brackets the global
/// minimum and detects ties; the bracket is then refined by solving the
/// stationarity condition (each half-circle carries half the mass).
/// Errors with `AmbiguousMedian` when distant candidates tie.
pub fn circle_median(g: &dyn Fn(f64) -> f64) -> Result<f64> {
    // Coarse objective scan on shared quadrature nodes.
    let n = COARSE_GRID;
    let nodes: Vec<f64> = (0..n).map(|i| -PI + 2.0 * PI * (i as f64 + 0.5) / n as f64).collect();
    let weights: Vec<f64> = nodes.iter().map(|&t| g(t)).collect();
    let total_coarse: f64 = weights.iter().sum();
    if !(total_coarse > 0.0) {
        return Err(Error::domain("circle density is not positive"));
    }
    let objective = |m: f64| -> f64 {
        nodes
            .iter()
            .zip(&weights)
            .map(|(&t, &w)| w * wrap_angle(t - m).abs())
            .sum::<f64>()
            / total_coarse
    };
    let mut best = (f64::INFINITY, 0.0);
    let mut values = Vec::with_capacity(n);
    for &m in &nodes {
        let v = objective(m);
        values.push(v);
        if v < best.0 {
            best = (v, m);
        }
    }
    // A second minimum well away from the best one means the median is not
    // identified (antipodal or otherwise symmetric mass).
    let step = 2.0 * PI / n as f64;
    let runner_up = nodes
        .iter()
        .zip(&values)
        .filter(|(&m, _)| wrap_angle(m - best.1).abs() > 64.0 * step)
        .map(|(_, &v)| v)
        .fold(f64::INFINITY, f64::min);
    if runner_up - best.0 < MEDIAN_TIE_GAP {
        return Err(Error::AmbiguousMedian { gap: (runner_up - best.0).abs() });
    }
    // At the median the mass of (m, m + π) equals half the total; the excess
    // K(m) = mass(m, m + π) - total/2 crosses zero downward there. Bisection
    // in a bracket around the coarse minimum pins it to quadrature precision.
    // Fixed rules here rather than adaptive ones: the scan has already
    // isolated the root, the bisection only needs locally consistent masses,
    // and a fixed rule stays robust when g itself is quadrature-backed and
    // carries noise near its own resolution floor.
    let total = gauss_legendre_integrate(g, -PI, PI, 512);
    let excess =
        |m: f64| -> Result<f64> { Ok(gauss_legendre_integrate(g, m, m + PI, 320) - 0.5 * total) };
    let mut lo = best.1 - step;
    let mut hi = best.1 + step;
    let (mut k_lo, mut k_hi) = (excess(lo)?, excess(hi)?);
    for _ in 0..8 {
        if k_lo > 0.0 && k_hi < 0.0 {
            break;
        }
        lo -= step;
        hi += step;
        k_lo = excess(lo)?;
        k_hi = excess(hi)?;
    }
    if !(k_lo > 0.0 && k_hi < 0.0) {
        // The balance point did not bracket; fall back to the scan minimum.
        return Ok(wrap_angle(best.1));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(wrap_angle(0.5 * (lo + hi)))
}

/// Integral of a density over the circle, for normalization checks.
pub fn circle_mass(g: &dyn Fn(f64) -> f64) -> f64 {
    gauss_legendre_integrate(g, -PI, PI, 128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn von_mises(mu: f64, kappa: f64) -> impl Fn(f64) -> f64 {
        move |t: f64| (kappa * (t - mu).cos()).exp()
    }

    #[test]
    fn flat_density_becomes_identity() {
        let map = CircleTransform::from_density(&|_| 0.7).unwrap();
        assert!(matches!(map, CircleTransform::Identity));
        assert_abs_diff_eq!(map.forward(1.3), 1.3, epsilon = 1e-15);
    }

    #[test]
    fn median_of_a_von_mises_is_its_center() {
        for &mu in &[0.0, 1.1, -2.4] {
            let m = circle_median(&von_mises(mu, 3.0)).unwrap();
            assert_abs_diff_eq!(wrap_angle(m - mu), 0.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn median_of_antipodal_mass_is_ambiguous() {
        // Two equal bumps at 0 and π.
        let g = |t: f64| (6.0 * t.cos().powi(2)).exp();
        assert!(matches!(circle_median(&g), Err(Error::AmbiguousMedian { .. })));
    }

    #[test]
    fn forward_pushes_the_cdf_to_uniform() {
        // Check the pushforward by inverting a probability grid: for each
        // q, the g-mass of the arc mapped onto [anchor, anchor + qπ] is q/2.
        let g = von_mises(0.8, 2.0);
        let map = CircleTransform::from_density(&g).unwrap();
        let total = circle_mass(&g);
        for i in 1..20 {
            let q = i as f64 / 20.0;
            let hi = map.inverse(wrap_angle(0.8 + q * PI)).unwrap();
            let mass = gauss_legendre_integrate(&g, 0.8, unwrap_forward(hi, 0.8), 256) / total;
            assert_abs_diff_eq!(mass, q / 2.0, epsilon = 1e-4);
        }
    }

    // Lifts an angle to the branch closest above `base`.
    fn unwrap_forward(theta: f64, base: f64) -> f64 {
        let mut t = theta;
        while t < base {
            t += 2.0 * PI;
        }
        t
    }

    #[test]
    fn round_trips_are_tight() {
        let g = von_mises(-0.4, 1.5);
        let map = CircleTransform::from_density(&g).unwrap();
        for i in 0..64 {
            let theta = -PI + 2.0 * PI * (i as f64 + 0.5) / 64.0;
            let forth = map.forward(theta);
            let back = map.inverse(forth).unwrap();
            assert_abs_diff_eq!(wrap_angle(back - theta), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn anchor_is_a_fixed_point() {
        let g = von_mises(0.3, 2.5);
        let map = CircleTransform::from_density(&g).unwrap();
        let anchor = match &map {
            CircleTransform::Anchored { anchor, .. } => *anchor,
            _ => panic!("expected anchored map"),
        };
        assert_abs_diff_eq!(wrap_angle(map.forward(anchor) - anchor), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn forward_is_monotone_on_each_side() {
        let g = von_mises(0.0, 2.0);
        let map = CircleTransform::from_density(&g).unwrap();
        let mut prev = map.forward(1e-6);
        for i in 1..1024 {
            let theta = 1e-6 + (PI - 2e-6) * i as f64 / 1024.0;
            let out = map.forward(theta);
            assert!(out > prev, "not increasing at theta = {theta}");
            prev = out;
        }
    }
}
