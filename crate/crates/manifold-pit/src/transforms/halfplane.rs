//! PIT on the Poincaré half-plane, into a Gaussian tangent-plane target.
//!
//! Around a base point m, a point decomposes into geodesic polar coordinates
//! (r, θ) through the log map; the hyperbolic area element is sinh(r) dr dθ.
//! The transform keeps geodesics through m pointed at m: the direction moves
//! through the circle PIT of the direction marginal, and the radius moves
//! through the conditional CDF onto the Rayleigh law — so that in the
//! orthonormal tangent coordinates at m the output follows the standard
//! bivariate normal distribution.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::halfplane::{halfplane_exp, halfplane_log, HalfPlanePoint};
use crate::numerics::quadrature::gauss_legendre_integrate;
use crate::transforms::circle::CircleTransform;

/// Nodes for the radial integrals (integrands are smooth in r).
const RAY_NODES: usize = 96;
/// Radii below this are an exact fixed point at the base.
const CENTER_TOL: f64 = 1e-14;

pub type HalfPlaneDensity = Arc<dyn Fn(&HalfPlanePoint) -> f64 + Send + Sync>;

/// The half-plane PIT for a source density with an explicit support radius:
/// the density must carry negligible mass beyond hyperbolic distance
/// `radius` from the base.
#[derive(Clone)]
pub struct HalfPlaneTransform {
    base: HalfPlanePoint,
    density: HalfPlaneDensity,
    radius: f64,
    circle: CircleTransform,
}

impl std::fmt::Debug for HalfPlaneTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "HalfPlaneTransform {{ base: ({}, {}), radius: {} }}",
            self.base.x, self.base.y, self.radius
        )
    }
}

impl HalfPlaneTransform {
    pub fn new(base: HalfPlanePoint, density: HalfPlaneDensity, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::domain(format!("support radius must be positive, got {radius}")));
        }
        let marginal = {
            let density = density.clone();
            move |theta: f64| ray_mass(&density, base, theta, 0.0, radius)
        };
        let circle = CircleTransform::from_density(&marginal)?;
        Ok(HalfPlaneTransform { base, density, radius, circle })
    }

    pub fn base(&self) -> HalfPlanePoint {
        self.base
    }

    /// Source sample in; out, the tangent coordinates at the base follow the
    /// standard bivariate normal law.
    pub fn forward(&self, p: &HalfPlanePoint) -> Result<HalfPlanePoint> {
        let (r, theta) = self.polar(p);
        if r < CENTER_TOL {
            return Ok(*p);
        }
        let q = self.conditional_q(theta, r)?;
        // Rayleigh quantile; clamp keeps the overflow of an exhausted tail finite.
        let r_new = (-2.0 * (-q.min(1.0 - 1e-16)).ln_1p()).sqrt();
        let theta_new = self.circle.forward(theta);
        Ok(self.compose(r_new, theta_new))
    }

    /// Gaussian tangent sample in, source sample out.
    pub fn inverse(&self, p: &HalfPlanePoint) -> Result<HalfPlanePoint> {
        let (r, theta) = self.polar(p);
        if r < CENTER_TOL {
            return Ok(*p);
        }
        let q = -(-0.5 * r * r).exp_m1();
        let theta_src = self.circle.inverse(theta)?;
        let r_src = self.invert_conditional(theta_src, q)?;
        Ok(self.compose(r_src, theta_src))
    }

    /// Geodesic polar coordinates of p around the base: hyperbolic radius
    /// and tangent direction angle (angles are conformal, so the Euclidean
    /// angle of the log vector is the Riemannian one).
    fn polar(&self, p: &HalfPlanePoint) -> (f64, f64) {
        let (vx, vy) = halfplane_log(self.base, *p);
        let r = (vx * vx + vy * vy).sqrt() / self.base.y;
        (r, vy.atan2(vx))
    }

    fn compose(&self, r: f64, theta: f64) -> HalfPlanePoint {
        let scale = r * self.base.y;
        halfplane_exp(self.base, (scale * theta.cos(), scale * theta.sin()))
    }

    fn conditional_q(&self, theta: f64, r: f64) -> Result<f64> {
        let total = ray_mass(&self.density, self.base, theta, 0.0, self.radius);
        if !(total > 0.0) {
            return Err(Error::domain("source density has no mass along a ray"));
        }
        if r >= self.radius {
            return Ok(1.0);
        }
        Ok((ray_mass(&self.density, self.base, theta, 0.0, r) / total).clamp(0.0, 1.0))
    }

    fn invert_conditional(&self, theta: f64, q: f64) -> Result<f64> {
        if q <= 0.0 {
            return Ok(0.0);
        }
        if q >= 1.0 {
            return Ok(self.radius);
        }
        let total = ray_mass(&self.density, self.base, theta, 0.0, self.radius);
        if !(total > 0.0) {
            return Err(Error::domain("source density has no mass along a ray"));
        }
        let (mut lo, mut hi) = (0.0_f64, self.radius);
        let mut below = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let mass = below + ray_mass(&self.density, self.base, theta, lo, mid);
            if mass / total < q {
                below = mass;
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Mass of the source along the geodesic ray from `base` in direction θ,
/// between hyperbolic radii lo and hi; sinh r is the hyperbolic area factor.
fn ray_mass(f: &HalfPlaneDensity, base: HalfPlanePoint, theta: f64, lo: f64, hi: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    gauss_legendre_integrate(
        &|r| {
            let scale = r * base.y;
            f(&halfplane_exp(base, (scale * c, scale * s))) * r.sinh()
        },
        lo,
        hi,
        RAY_NODES,
    )
}
