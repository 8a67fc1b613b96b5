//! PIT on the ternary simplex, in radial and exponential coordinates.
//!
//! Both transforms split a point into a direction-like part and a radial
//! part around the centroid. Under the uniform distribution on Δ₂ the radial
//! conditional CDF given the direction is quadratic in the radius, and the
//! direction marginal is uniform along the boundary for the star-shaped
//! (radial) coordinates, or proportional to the squared exit radius for the
//! straight-line exponential coordinates. The forward maps push the source
//! conditionals onto those laws; flat sources short-circuit to the exact
//! identity.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::simplex::{
    radial_compose, radial_projection, simplex_exit_radius, simplex_log, RadialCoords,
    SimplexPoint,
};
use crate::models::dirichlet::DirichletModel;
use crate::numerics::quadrature::gauss_legendre_integrate;
use crate::transforms::circle::{wrap_angle, CircleTransform};

/// Relative spread below which a probed density counts as uniform.
const FLAT_TOL: f64 = 1e-9;
/// Nodes for the one-dimensional ray integrals (integrands are smooth).
const RAY_NODES: usize = 64;

pub type SimplexDensity = Arc<dyn Fn(&SimplexPoint) -> f64 + Send + Sync>;

/// Where a simplex transform's source law comes from. Non-uniform sources
/// are supported on the ternary simplex (p = 3); the uniform source gives
/// the exact identity in any dimension.
pub enum SimplexSource<'a> {
    Uniform { p: usize },
    Dirichlet(&'a DirichletModel),
    Density { p: usize, f: SimplexDensity },
}

/// Resolves a source to its density, or `None` when it is uniform.
fn resolve(source: &SimplexSource) -> Result<(usize, Option<SimplexDensity>)> {
    match source {
        SimplexSource::Uniform { p } => {
            if *p < 2 {
                return Err(Error::domain("simplex needs p ≥ 2 coordinates"));
            }
            Ok((*p, None))
        }
        SimplexSource::Dirichlet(model) => {
            if model.alpha.iter().all(|&a| (a - 1.0).abs() < 1e-12) {
                return Ok((model.dim(), None));
            }
            check_ternary(model.dim())?;
            let model = (*model).clone();
            let f: SimplexDensity =
                Arc::new(move |y: &SimplexPoint| model.density(y).unwrap_or(0.0));
            Ok((3, Some(f)))
        }
        SimplexSource::Density { p, f } => {
            check_ternary(*p)?;
            if density_is_flat(f) {
                return Ok((3, None));
            }
            Ok((3, Some(f.clone())))
        }
    }
}

fn check_ternary(p: usize) -> Result<()> {
    if p != 3 {
        return Err(Error::domain(format!(
            "non-uniform simplex sources are supported for p = 3 only, got p = {p}"
        )));
    }
    Ok(())
}

/// Probes the density on an interior (radius, boundary angle) grid.
fn density_is_flat(f: &SimplexDensity) -> bool {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..17 {
        let r = 0.05 + 0.9 * i as f64 / 16.0;
        for j in 0..48 {
            let theta = -PI + 2.0 * PI * j as f64 / 48.0;
            let v = f(&radial_compose(r, &boundary_point(theta)));
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    hi > 0.0 && (hi - lo) <= FLAT_TOL * hi
}

/// Arclength position of a boundary point as an angle: the edge cycle
/// V₁ → V₂ → V₃ → V₁ wraps once around the circle, each edge spanning 2π/3.
fn boundary_angle(face: usize, z: &SimplexPoint) -> f64 {
    let edge = (face + 1) % 3;
    let s = z.as_slice()[(edge + 1) % 3];
    wrap_angle(2.0 * PI * (edge as f64 + s) / 3.0)
}

/// Inverse of [`boundary_angle`].
fn boundary_point(theta: f64) -> SimplexPoint {
    let frac = wrap_angle(theta).rem_euclid(2.0 * PI) / (2.0 * PI);
    let t = frac * 3.0;
    let edge = (t.floor() as usize).min(2);
    let s = t - edge as f64;
    let mut coords = [0.0_f64; 3];
    coords[edge] = 1.0 - s;
    coords[(edge + 1) % 3] = s;
    SimplexPoint::new(coords.to_vec()).expect("boundary coordinates form a composition")
}

/// Mass of the source along the segment c → z between radii lo and hi; the
/// factor s is the area element of the star-shaped coordinates on Δ₂.
fn ray_mass(f: &SimplexDensity, z: &SimplexPoint, lo: f64, hi: f64) -> f64 {
    gauss_legendre_integrate(&|s| f(&radial_compose(s, z)) * s, lo, hi, RAY_NODES)
}

fn conditional_q(f: &SimplexDensity, z: &SimplexPoint, r: f64) -> Result<f64> {
    let total = ray_mass(f, z, 0.0, 1.0);
    if !(total > 0.0) {
        return Err(Error::domain("source density has no mass along a ray"));
    }
    if r <= 0.0 {
        return Ok(0.0);
    }
    if r >= 1.0 {
        return Ok(1.0);
    }
    Ok((ray_mass(f, z, 0.0, r) / total).clamp(0.0, 1.0))
}

fn invert_conditional(f: &SimplexDensity, z: &SimplexPoint, q: f64) -> Result<f64> {
    if q <= 0.0 {
        return Ok(0.0);
    }
    if q >= 1.0 {
        return Ok(1.0);
    }
    let total = ray_mass(f, z, 0.0, 1.0);
    if !(total > 0.0) {
        return Err(Error::domain("source density has no mass along a ray"));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut below = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let mass = below + ray_mass(f, z, lo, mid);
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

/// Star-shaped PIT: radius through the conditional CDF (uniform target r²),
/// boundary point through the circle PIT of the boundary marginal.
#[derive(Clone)]
pub struct SimplexRadialTransform {
    p: usize,
    density: Option<SimplexDensity>,
    boundary: CircleTransform,
}

impl std::fmt::Debug for SimplexRadialTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SimplexRadialTransform {{ p: {}, flat: {} }}",
            self.p,
            self.density.is_none()
        )
    }
}

impl SimplexRadialTransform {
    pub fn new(source: &SimplexSource) -> Result<Self> {
        let (p, density) = resolve(source)?;
        let boundary = match &density {
            None => CircleTransform::Identity,
            Some(f) => {
                let f = f.clone();
                // Boundary marginal: total ray mass toward each edge point.
                CircleTransform::from_density(&move |theta| {
                    ray_mass(&f, &boundary_point(theta), 0.0, 1.0)
                })?
            }
        };
        Ok(SimplexRadialTransform { p, density, boundary })
    }

    fn check_dim(&self, y: &SimplexPoint) -> Result<()> {
        if y.dim_count() != self.p {
            return Err(Error::domain(format!(
                "point has {} coordinates, transform expects {}",
                y.dim_count(),
                self.p
            )));
        }
        Ok(())
    }

    /// Source sample in, uniform sample out.
    pub fn forward(&self, y: &SimplexPoint) -> Result<SimplexPoint> {
        self.check_dim(y)?;
        let Some(f) = &self.density else { return Ok(y.clone()) };
        match radial_projection(y) {
            RadialCoords::Centroid => Ok(y.clone()),
            RadialCoords::Interior { r, face, z } => {
                let q = conditional_q(f, &z, r)?;
                let theta = self.boundary.forward(boundary_angle(face, &z));
                Ok(radial_compose(q.sqrt(), &boundary_point(theta)))
            }
        }
    }

    /// Uniform sample in, source sample out.
    pub fn inverse(&self, y: &SimplexPoint) -> Result<SimplexPoint> {
        self.check_dim(y)?;
        let Some(f) = &self.density else { return Ok(y.clone()) };
        match radial_projection(y) {
            RadialCoords::Centroid => Ok(y.clone()),
            RadialCoords::Interior { r, face, z } => {
                let theta = self.boundary.inverse(boundary_angle(face, &z))?;
                let z_src = boundary_point(theta);
                let r_src = invert_conditional(f, &z_src, (r * r).min(1.0))?;
                Ok(radial_compose(r_src, &z_src))
            }
        }
    }
}

/// Orthonormal zero-sum frame for directions at the centroid; the first
/// vector points at vertex 1 and anchors both direction PITs.
const DIR_A: [f64; 3] = [
    0.816_496_580_927_726,  //  2/√6
    -0.408_248_290_463_863, // -1/√6
    -0.408_248_290_463_863,
];
const DIR_B: [f64; 3] = [0.0, std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2];

fn direction(alpha: f64) -> [f64; 3] {
    let (s, c) = alpha.sin_cos();
    [
        c * DIR_A[0] + s * DIR_B[0],
        c * DIR_A[1] + s * DIR_B[1],
        c * DIR_A[2] + s * DIR_B[2],
    ]
}

fn direction_angle(u: &[f64]) -> f64 {
    let a = u[0] * DIR_A[0] + u[1] * DIR_A[1] + u[2] * DIR_A[2];
    let b = u[0] * DIR_B[0] + u[1] * DIR_B[1] + u[2] * DIR_B[2];
    b.atan2(a)
}

/// Builds c + r·u directly, tolerating boundary outputs (r = exit radius).
fn exp_point(r: f64, u: &[f64]) -> Result<SimplexPoint> {
    let inv_p = 1.0 / u.len() as f64;
    SimplexPoint::new(u.iter().map(|&uj| (inv_p + r * uj).max(0.0)).collect())
}

/// Mass of the source along the ray c + s·u between radii lo and hi; the
/// factor s is the polar area element in the simplex plane.
fn exp_ray_mass(f: &SimplexDensity, u: &[f64], lo: f64, hi: f64) -> f64 {
    gauss_legendre_integrate(
        &|s| f(&exp_point(s, u).expect("ray stays inside the simplex")) * s,
        lo,
        hi,
        RAY_NODES,
    )
}

fn exp_conditional_q(f: &SimplexDensity, u: &[f64], exit: f64, r: f64) -> Result<f64> {
    let total = exp_ray_mass(f, u, 0.0, exit);
    if !(total > 0.0) {
        return Err(Error::domain("source density has no mass along a ray"));
    }
    if r <= 0.0 {
        return Ok(0.0);
    }
    if r >= exit {
        return Ok(1.0);
    }
    Ok((exp_ray_mass(f, u, 0.0, r) / total).clamp(0.0, 1.0))
}

fn invert_exp_conditional(f: &SimplexDensity, u: &[f64], exit: f64, q: f64) -> Result<f64> {
    if q <= 0.0 {
        return Ok(0.0);
    }
    if q >= 1.0 {
        return Ok(exit);
    }
    let total = exp_ray_mass(f, u, 0.0, exit);
    if !(total > 0.0) {
        return Err(Error::domain("source density has no mass along a ray"));
    }
    let (mut lo, mut hi) = (0.0_f64, exit);
    let mut below = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let mass = below + exp_ray_mass(f, u, lo, mid);
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

/// Straight-line (exponential) PIT: rays from the centroid map to rays from
/// the centroid. The direction moves through the source direction PIT and
/// back through the inverse of the uniform target's direction PIT (density
/// ∝ squared exit radius); the radius moves through the conditional CDF and
/// lands on the uniform conditional (r/exit)².
#[derive(Clone)]
pub struct SimplexExpTransform {
    p: usize,
    density: Option<SimplexDensity>,
    model_dir: CircleTransform,
    target_dir: CircleTransform,
}

impl std::fmt::Debug for SimplexExpTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SimplexExpTransform {{ p: {}, flat: {} }}",
            self.p,
            self.density.is_none()
        )
    }
}

impl SimplexExpTransform {
    pub fn new(source: &SimplexSource) -> Result<Self> {
        let (p, density) = resolve(source)?;
        let (model_dir, target_dir) = match &density {
            None => (CircleTransform::Identity, CircleTransform::Identity),
            Some(f) => {
                let f = f.clone();
                let model = CircleTransform::new(
                    &move |alpha| {
                        let u = direction(alpha);
                        let exit = simplex_exit_radius(&u).expect("unit zero-sum direction");
                        exp_ray_mass(&f, &u, 0.0, exit)
                    },
                    0.0,
                )?;
                let target = CircleTransform::new(
                    &|alpha| {
                        let exit = simplex_exit_radius(&direction(alpha))
                            .expect("unit zero-sum direction");
                        exit * exit
                    },
                    0.0,
                )?;
                (model, target)
            }
        };
        Ok(SimplexExpTransform { p, density, model_dir, target_dir })
    }

    fn check_dim(&self, y: &SimplexPoint) -> Result<()> {
        if y.dim_count() != self.p {
            return Err(Error::domain(format!(
                "point has {} coordinates, transform expects {}",
                y.dim_count(),
                self.p
            )));
        }
        Ok(())
    }

    /// Source sample in, uniform sample out.
    pub fn forward(&self, y: &SimplexPoint) -> Result<SimplexPoint> {
        self.check_dim(y)?;
        let Some(f) = &self.density else { return Ok(y.clone()) };
        let Some((r, u)) = simplex_log(y) else { return Ok(y.clone()) };
        let exit = simplex_exit_radius(&u)?;
        let q = exp_conditional_q(f, &u, exit, r)?;
        let alpha = self.target_dir.inverse(self.model_dir.forward(direction_angle(&u)))?;
        let u_new = direction(alpha);
        let exit_new = simplex_exit_radius(&u_new)?;
        exp_point((exit_new * q.sqrt()).min(exit_new), &u_new)
    }

    /// Uniform sample in, source sample out.
    pub fn inverse(&self, y: &SimplexPoint) -> Result<SimplexPoint> {
        self.check_dim(y)?;
        let Some(f) = &self.density else { return Ok(y.clone()) };
        let Some((r, u)) = simplex_log(y) else { return Ok(y.clone()) };
        let exit = simplex_exit_radius(&u)?;
        let q = ((r / exit) * (r / exit)).min(1.0);
        let alpha = self.model_dir.inverse(self.target_dir.forward(direction_angle(&u)))?;
        let u_src = direction(alpha);
        let exit_src = simplex_exit_radius(&u_src)?;
        let r_src = invert_exp_conditional(f, &u_src, exit_src, q)?;
        exp_point(r_src, &u_src)
    }
}
