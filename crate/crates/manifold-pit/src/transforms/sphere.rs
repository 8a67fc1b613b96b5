//! Generic PIT engine on S¹ and S² by conditional-CDF matching in chart
//! coordinates.
//!
//! About a chart axis m, a point of S² is (t, θ) with t = mᵀx and θ the
//! longitude in a fixed tangent frame at m. The surface measure factors as
//! dt dθ, so a density f splits into the conditional law of t given θ and a
//! marginal law of θ. Sending t through its conditional CDF onto the flat
//! t-law and θ through the circle transform of the marginal pushes f to the
//! uniform distribution; on S¹ only the circle step remains. Chart axes come
//! from the model when it names one and from a weighted Fréchet median of the
//! density otherwise.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::sphere::UnitVector;
use crate::models::acg::AcgModel;
use crate::models::fisher::{orthonormal_frame, FisherModel};
use crate::numerics::quadrature::{gauss_legendre, gauss_legendre_integrate};
use crate::transforms::circle::CircleTransform;

/// Tangential norm below which a point counts as a chart pole. The
/// conditional CDF is exactly 0 or 1 there, so poles are fixed points and
/// pass through unchanged.
pub const POLE_TOL: f64 = 1e-12;

/// Relative spread below which a probed density counts as uniform.
const FLAT_TOL: f64 = 1e-9;

/// Nodes for the conditional-CDF integrals along a chart ray. The densities
/// here are analytic in t, so Gauss-Legendre converges spectrally and the
/// partial masses keep full relative accuracy even deep in a tail.
const RAY_NODES: usize = 96;

/// Nodes for integrating out t at a fixed angle (the circle marginal).
const MARGINAL_NODES: usize = 64;

/// Gauss-Legendre t-nodes and equally spaced angles for the quadrature grid
/// behind the numeric chart axis.
const MEDIAN_T_NODES: usize = 64;
const MEDIAN_ANGLES: usize = 128;

/// A density on the sphere with respect to the uniform measure, up to
/// normalization.
pub type SphereDensity = Arc<dyn Fn(&UnitVector) -> f64 + Send + Sync>;

/// Where a chart comes from: a model that names its own anchors, or a bare
/// density that gets the numeric treatment.
pub enum ChartSource<'a> {
    /// Uniform on S^{p-1}: the transform is the identity.
    Uniform { p: usize },
    /// Fisher on S²: the chart axis is the mean direction and the angle
    /// marginal is flat by rotational symmetry.
    Fisher(&'a FisherModel),
    /// Angular central Gaussian: the chart axis is the modal axis and the
    /// angle level is anchored at the second eigenvector. An antipodally
    /// symmetric density ties every median search, so the model has to name
    /// its anchors itself.
    Acg(&'a AcgModel),
    /// A continuous positive density with respect to the uniform measure,
    /// p in {2, 3}; the chart axis is its Fréchet median.
    Density { p: usize, f: SphereDensity },
}

/// Anchors of the nested chart: the S² axis (absent when the density is
/// already uniform) and the anchor angle of the circle level below it
/// (absent when that marginal is flat).
#[derive(Debug, Clone)]
pub struct NestedSphereChart {
    p: usize,
    axis: Option<UnitVector>,
    anchor: Option<f64>,
}

impl NestedSphereChart {
    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn axis(&self) -> Option<&UnitVector> {
        self.axis.as_ref()
    }

    pub fn anchor(&self) -> Option<f64> {
        self.anchor
    }

    /// Dimension of the subsphere at which the descent stopped because the
    /// remaining marginal was flat: p-1 for a fully uniform density (empty
    /// chart), 1 when only the S² axis is set, 0 when the circle level is
    /// anchored too.
    pub fn uniform_level(&self) -> usize {
        match (&self.axis, &self.anchor) {
            (None, None) => self.p - 1,
            (Some(_), None) => 1,
            _ => 0,
        }
    }
}

/// Builds just the chart for a source. The engine constructor does the same
/// work and keeps the transform tables, so prefer `SphereEngine::new` when a
/// transform is wanted as well.
pub fn build_nested_chart(source: &ChartSource) -> Result<NestedSphereChart> {
    Ok(SphereEngine::new(source)?.chart().clone())
}

/// The generic PIT on S¹ and S² for a charted source density.
#[derive(Clone)]
pub struct SphereEngine {
    chart: NestedSphereChart,
    density: SphereDensity,
    frame: Option<([f64; 3], [f64; 3])>,
    circle: CircleTransform,
    flat: bool,
}

impl std::fmt::Debug for SphereEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SphereEngine {{ chart: {:?}, flat: {} }}", self.chart, self.flat)
    }
}

impl SphereEngine {
    pub fn new(source: &ChartSource) -> Result<Self> {
        match source {
            ChartSource::Uniform { p } => {
                check_dim(*p)?;
                Ok(Self::flat(*p))
            }
            ChartSource::Fisher(model) => {
                if model.kappa < 1e-12 {
                    return Ok(Self::flat(3));
                }
                let mu = model.mu.clone();
                let kappa = model.kappa;
                let density: SphereDensity =
                    Arc::new(move |x: &UnitVector| (kappa * (x.dot(&mu) - 1.0)).exp());
                Self::charted(density, model.mu.clone(), None)
            }
            ChartSource::Acg(model) => {
                let p = model.dim();
                check_dim(p)?;
                let density = acg_density(model);
                let (_, axes) = model.spectrum();
                if p == 2 {
                    let anchor = axes[0][1].atan2(axes[0][0]);
                    let f = density.clone();
                    let g = move |theta: f64| f(&circle_point(theta));
                    let circle = CircleTransform::new(&g, anchor)?;
                    return Ok(Self::on_circle(density, circle));
                }
                let axis = model.modal_axis();
                let (e1, e2) = orthonormal_frame(&axis);
                let v = &axes[1];
                let anchor = dot3(v, &e2).atan2(dot3(v, &e1));
                Self::charted(density, axis, Some(anchor))
            }
            ChartSource::Density { p, f } => {
                check_dim(*p)?;
                if *p == 2 {
                    let f2 = f.clone();
                    let g = move |theta: f64| f2(&circle_point(theta));
                    let circle = CircleTransform::from_density(&g)?;
                    return Ok(Self::on_circle(f.clone(), circle));
                }
                if sphere_density_is_flat(f) {
                    return Ok(Self::flat(3));
                }
                let axis = numeric_axis(f)?;
                Self::charted(f.clone(), axis, None)
            }
        }
    }

    fn flat(p: usize) -> Self {
        SphereEngine {
            chart: NestedSphereChart { p, axis: None, anchor: None },
            density: Arc::new(|_| 1.0),
            frame: None,
            circle: CircleTransform::identity(),
            flat: true,
        }
    }

    fn on_circle(density: SphereDensity, circle: CircleTransform) -> Self {
        let anchor = match &circle {
            CircleTransform::Identity => None,
            CircleTransform::Anchored { anchor, .. } => Some(*anchor),
        };
        let flat = anchor.is_none();
        SphereEngine {
            chart: NestedSphereChart { p: 2, axis: None, anchor },
            density,
            frame: None,
            circle,
            flat,
        }
    }

    /// S² engine about a known axis. An anchor hint fixes the circle level
    /// (for model sources whose symmetry would tie a median search); without
    /// one the circle anchor is the marginal's own median.
    fn charted(density: SphereDensity, axis: UnitVector, anchor_hint: Option<f64>) -> Result<Self> {
        let (e1, e2) = orthonormal_frame(&axis);
        let f = density.clone();
        let ax = axis.clone();
        // Integrated in colatitude, where the integrand is analytic at the
        // poles (see `ray_mass`).
        let marginal = move |theta: f64| {
            gauss_legendre_integrate(
                &|v: f64| f(&point_in_frame(&ax, &e1, &e2, v.cos(), theta)) * v.sin(),
                0.0,
                PI,
                MARGINAL_NODES,
            )
        };
        let circle = match anchor_hint {
            Some(a) => CircleTransform::new(&marginal, a)?,
            None => CircleTransform::from_density(&marginal)?,
        };
        let anchor = match &circle {
            CircleTransform::Identity => None,
            CircleTransform::Anchored { anchor, .. } => Some(*anchor),
        };
        Ok(SphereEngine {
            chart: NestedSphereChart { p: 3, axis: Some(axis), anchor },
            density,
            frame: Some((e1, e2)),
            circle,
            flat: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.p
    }

    pub fn chart(&self) -> &NestedSphereChart {
        &self.chart
    }

    pub fn forward(&self, x: &UnitVector) -> Result<UnitVector> {
        self.check_point(x)?;
        if self.flat {
            return Ok(x.clone());
        }
        if self.chart.p == 2 {
            let s = x.as_slice();
            return Ok(circle_point(self.circle.forward(s[1].atan2(s[0]))));
        }
        let (t, theta) = match self.coordinates(x) {
            Some(tt) => tt,
            None => return Ok(x.clone()),
        };
        let q = self.conditional_q(theta, t)?;
        let t_new = (2.0 * q - 1.0).clamp(-1.0, 1.0);
        let theta_new = self.circle.forward(theta);
        let axis = self.chart.axis.as_ref().expect("charted engine has an axis");
        let (e1, e2) = self.frame.expect("charted engine has a frame");
        Ok(point_in_frame(axis, &e1, &e2, t_new, theta_new))
    }

    pub fn inverse(&self, y: &UnitVector) -> Result<UnitVector> {
        self.check_point(y)?;
        if self.flat {
            return Ok(y.clone());
        }
        if self.chart.p == 2 {
            let s = y.as_slice();
            return Ok(circle_point(self.circle.inverse(s[1].atan2(s[0]))?));
        }
        let (t_new, theta_new) = match self.coordinates(y) {
            Some(tt) => tt,
            None => return Ok(y.clone()),
        };
        let theta = self.circle.inverse(theta_new)?;
        let t = self.invert_conditional(theta, 0.5 * (1.0 + t_new))?;
        let axis = self.chart.axis.as_ref().expect("charted engine has an axis");
        let (e1, e2) = self.frame.expect("charted engine has a frame");
        Ok(point_in_frame(axis, &e1, &e2, t, theta))
    }

    fn check_point(&self, x: &UnitVector) -> Result<()> {
        if x.dim() != self.chart.p {
            return Err(Error::domain(format!(
                "point has {} coordinates, engine expects {}",
                x.dim(),
                self.chart.p
            )));
        }
        Ok(())
    }

    /// Chart coordinates of x, or None at a pole.
    fn coordinates(&self, x: &UnitVector) -> Option<(f64, f64)> {
        let axis = self.chart.axis.as_ref().expect("charted engine has an axis");
        let (e1, e2) = self.frame.expect("charted engine has a frame");
        let t = axis.dot(x).clamp(-1.0, 1.0);
        let a = axis.as_slice();
        let s = x.as_slice();
        let tang = [s[0] - t * a[0], s[1] - t * a[1], s[2] - t * a[2]];
        let norm = dot3(&tang, &tang).sqrt();
        if norm < POLE_TOL {
            return None;
        }
        Some((t, dot3(&tang, &e2).atan2(dot3(&tang, &e1))))
    }

    /// Mass of the colatitude band [from_v, to_v] along the ray at a fixed
    /// angle. In t the integrand carries √(1-t²) (branch points at the
    /// poles, which cost Gauss-Legendre its spectral rate); in colatitude it
    /// is analytic, so the partial masses keep full relative accuracy.
    fn ray_mass(&self, theta: f64, from_v: f64, to_v: f64) -> f64 {
        let axis = self.chart.axis.as_ref().expect("charted engine has an axis");
        let (e1, e2) = self.frame.expect("charted engine has a frame");
        let f = &self.density;
        gauss_legendre_integrate(
            &|v| f(&point_in_frame(axis, &e1, &e2, v.cos(), theta)) * v.sin(),
            from_v,
            to_v,
            RAY_NODES,
        )
    }

    /// Conditional CDF of t given the angle: mass of [-1, t] along the ray
    /// over the full ray mass.
    fn conditional_q(&self, theta: f64, t: f64) -> Result<f64> {
        let total = self.ray_mass(theta, 0.0, PI);
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::domain("density has no mass along a chart ray"));
        }
        if t <= -1.0 {
            return Ok(0.0);
        }
        if t >= 1.0 {
            return Ok(1.0);
        }
        Ok((self.ray_mass(theta, t.acos(), PI) / total).clamp(0.0, 1.0))
    }

    /// Inverts the conditional CDF by bisection in colatitude, accumulating
    /// the mass above the moving endpoint so each step only integrates a
    /// short band.
    fn invert_conditional(&self, theta: f64, q: f64) -> Result<f64> {
        if q <= 0.0 {
            return Ok(-1.0);
        }
        if q >= 1.0 {
            return Ok(1.0);
        }
        let total = self.ray_mass(theta, 0.0, PI);
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::domain("density has no mass along a chart ray"));
        }
        let target = q * total;
        let (mut lo, mut hi) = (0.0_f64, PI);
        let mut above = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let at_mid = above + self.ray_mass(theta, mid, hi);
            if at_mid < target {
                hi = mid;
                above = at_mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        Ok((0.5 * (lo + hi)).cos())
    }
}

fn check_dim(p: usize) -> Result<()> {
    if p == 2 || p == 3 {
        Ok(())
    } else {
        Err(Error::domain(format!("the numeric engine covers S¹ and S² only, got p = {p}")))
    }
}

fn dot3(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn circle_point(theta: f64) -> UnitVector {
    UnitVector::new(vec![theta.cos(), theta.sin()]).expect("unit by construction")
}

fn point_in_frame(
    axis: &UnitVector,
    e1: &[f64; 3],
    e2: &[f64; 3],
    t: f64,
    theta: f64,
) -> UnitVector {
    let r = (1.0 - t * t).max(0.0).sqrt();
    let (c, s) = (theta.cos(), theta.sin());
    let a = axis.as_slice();
    UnitVector::new(vec![
        t * a[0] + r * (c * e1[0] + s * e2[0]),
        t * a[1] + r * (c * e1[1] + s * e2[1]),
        t * a[2] + r * (c * e1[2] + s * e2[2]),
    ])
    .expect("unit by construction")
}

/// ACG density on sphere representatives: (xᵀA⁻¹x)^{-p/2}.
fn acg_density(model: &AcgModel) -> SphereDensity {
    let p = model.dim();
    let (eigenvalues, axes) = model.spectrum();
    let mut inverse = vec![0.0; p * p];
    for (lambda, q) in eigenvalues.iter().zip(axes) {
        for i in 0..p {
            for j in 0..p {
                inverse[i * p + j] += q[i] * q[j] / lambda;
            }
        }
    }
    let exponent = -(p as f64) / 2.0;
    Arc::new(move |x: &UnitVector| {
        let s = x.as_slice();
        let mut quad = 0.0;
        for i in 0..p {
            for j in 0..p {
                quad += s[i] * inverse[i * p + j] * s[j];
            }
        }
        quad.powf(exponent)
    })
}

/// Deterministic flatness probe over a pole-free grid on S².
fn sphere_density_is_flat(f: &SphereDensity) -> bool {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..33 {
        let t = -1.0 + 2.0 * (i as f64 + 0.5) / 33.0;
        let r = (1.0 - t * t).max(0.0).sqrt();
        for j in 0..64 {
            let theta = TAU * (j as f64 + 0.5) / 64.0 - PI;
            let x = UnitVector::new(vec![r * theta.cos(), r * theta.sin(), t])
                .expect("unit by construction");
            let v = f(&x);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    hi > 0.0 && (hi - lo) <= FLAT_TOL * hi
}

/// Fréchet median of a density on S², by Weiszfeld iteration with the update
/// integrals taken in polar coordinates about the current iterate. The
/// median objective ∫ d(m, x) f(x) dσ has a kink at x = m, so a fixed
/// quadrature grid only reaches O(h²); recentering puts the kink at the
/// origin of the chart, where log_m(x)/d = (cos φ, sin φ) and both update
/// integrals are smooth, so every iteration sees spectrally accurate values.
fn numeric_axis(f: &SphereDensity) -> Result<UnitVector> {
    let (nodes, weights) = gauss_legendre(MEDIAN_T_NODES);
    // Start from the quadrature resultant (its integrand is smooth), or the
    // grid mode when the resultant degenerates.
    let mut resultant = [0.0; 3];
    let mut total = 0.0;
    let mut mode = (f64::NEG_INFINITY, [0.0, 0.0, 1.0]);
    for (t, wt) in nodes.iter().zip(&weights) {
        let r = (1.0 - t * t).max(0.0).sqrt();
        for j in 0..MEDIAN_ANGLES {
            let theta = TAU * (j as f64 + 0.5) / MEDIAN_ANGLES as f64 - PI;
            let x = [r * theta.cos(), r * theta.sin(), *t];
            let val = f(&UnitVector::new(x.to_vec()).expect("unit by construction"));
            if !val.is_finite() || val < 0.0 {
                return Err(Error::domain(format!("density value {val} at a grid point")));
            }
            total += wt * val;
            for (acc, xi) in resultant.iter_mut().zip(&x) {
                *acc += wt * val * xi;
            }
            if val > mode.0 {
                mode = (val, x);
            }
        }
    }
    if !(total > 0.0) {
        return Err(Error::domain("density vanishes on the whole chart grid"));
    }
    let res_norm = dot3(&resultant, &resultant).sqrt();
    let mut m = if res_norm > 1e-9 * total {
        UnitVector::new(resultant.to_vec()).expect("checked nonzero")
    } else {
        UnitVector::new(mode.1.to_vec()).expect("unit by construction")
    };

    let (r_nodes, r_weights) = gauss_legendre(MEDIAN_T_NODES);
    let mut converged = false;
    for _ in 0..200 {
        let (e1, e2) = orthonormal_frame(&m);
        // Weiszfeld step: exp_m(N / D) with N = ∫ u(φ) f sin r dr dφ in the
        // tangent frame and D = ∫ f (sin r / r) dr dφ.
        let mut n1 = 0.0;
        let mut n2 = 0.0;
        let mut d = 0.0;
        for (rn, rw) in r_nodes.iter().zip(&r_weights) {
            let r = 0.5 * PI * (rn + 1.0);
            let w_r = 0.5 * PI * rw;
            let (sin_r, cos_r) = r.sin_cos();
            for j in 0..MEDIAN_ANGLES {
                let phi = TAU * (j as f64 + 0.5) / MEDIAN_ANGLES as f64 - PI;
                let (sin_p, cos_p) = phi.sin_cos();
                let a = m.as_slice();
                let x = UnitVector::new(vec![
                    cos_r * a[0] + sin_r * (cos_p * e1[0] + sin_p * e2[0]),
                    cos_r * a[1] + sin_r * (cos_p * e1[1] + sin_p * e2[1]),
                    cos_r * a[2] + sin_r * (cos_p * e1[2] + sin_p * e2[2]),
                ])
                .expect("unit by construction");
                let val = f(&x) * w_r;
                n1 += val * cos_p * sin_r;
                n2 += val * sin_p * sin_r;
                // sin(r)/r is analytic; the limit at r = 0 is 1.
                d += val * if r > 1e-12 { sin_r / r } else { 1.0 };
            }
        }
        let step = [
            (n1 * e1[0] + n2 * e2[0]) / d,
            (n1 * e1[1] + n2 * e2[1]) / d,
            (n1 * e1[2] + n2 * e2[2]) / d,
        ];
        let step_norm = dot3(&step, &step).sqrt();
        m = crate::geometry::sphere::sphere_exp(&m, &step);
        if step_norm < 1e-13 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { routine: "numeric_axis", iterations: 200 });
    }

    // F(m) + F(-m) = π ∫f: a normalized objective at π/2 means the antipode
    // does just as well and the chart axis is not identified.
    let (e1, e2) = orthonormal_frame(&m);
    let mut objective = 0.0;
    let mut mass = 0.0;
    for (rn, rw) in r_nodes.iter().zip(&r_weights) {
        let r = 0.5 * PI * (rn + 1.0);
        let w_r = 0.5 * PI * rw;
        let (sin_r, cos_r) = r.sin_cos();
        for j in 0..MEDIAN_ANGLES {
            let phi = TAU * (j as f64 + 0.5) / MEDIAN_ANGLES as f64 - PI;
            let (sin_p, cos_p) = phi.sin_cos();
            let a = m.as_slice();
            let x = UnitVector::new(vec![
                cos_r * a[0] + sin_r * (cos_p * e1[0] + sin_p * e2[0]),
                cos_r * a[1] + sin_r * (cos_p * e1[1] + sin_p * e2[1]),
                cos_r * a[2] + sin_r * (cos_p * e1[2] + sin_p * e2[2]),
            ])
            .expect("unit by construction");
            let val = f(&x) * w_r * sin_r;
            objective += val * r;
            mass += val;
        }
    }
    let gap = (PI - 2.0 * objective / mass).abs();
    if gap < 1e-6 {
        return Err(Error::AmbiguousMedian { gap });
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::models::fisher::sample_fisher;
    use crate::models::uniform::uniform_sphere;
    use crate::transforms::rotsym::{acg_u, fisher_u, rotsym_map};

    fn uv(v: &[f64]) -> UnitVector {
        UnitVector::new(v.to_vec()).unwrap()
    }

    /// Chordal distance: the geodesic one runs through acos, which cannot
    /// resolve distances below √(2ε) ≈ 1.5e-8.
    fn chord(a: &UnitVector, b: &UnitVector) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn uniform_source_is_the_identity() {
        for p in [2, 3] {
            let engine = SphereEngine::new(&ChartSource::Uniform { p }).unwrap();
            assert_eq!(engine.chart().uniform_level(), p - 1);
            assert!(engine.chart().axis().is_none());
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for _ in 0..20 {
                let x = uniform_sphere(p, &mut rng);
                let y = engine.forward(&x).unwrap();
                assert_abs_diff_eq!(x.dot(&y), 1.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn flat_density_probes_as_uniform() {
        let f: SphereDensity = Arc::new(|_| 0.7);
        let engine = SphereEngine::new(&ChartSource::Density { p: 3, f }).unwrap();
        assert_eq!(engine.chart().uniform_level(), 2);
        let x = uv(&[0.6, 0.0, 0.8]);
        assert_abs_diff_eq!(engine.forward(&x).unwrap().dot(&x), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn fisher_chart_names_the_mean_axis() {
        let mu = uv(&[0.36, 0.48, 0.8]);
        let model = FisherModel::new(mu.clone(), 10.0).unwrap();
        let engine = SphereEngine::new(&ChartSource::Fisher(&model)).unwrap();
        let chart = engine.chart();
        assert_eq!(chart.uniform_level(), 1);
        assert_abs_diff_eq!(chart.axis().unwrap().dot(&mu), 1.0, epsilon = 1e-15);
        assert!(chart.anchor().is_none(), "rotational symmetry should flatten the angle level");
    }

    #[test]
    fn engine_matches_the_rotationally_symmetric_closed_form() {
        let mu = uv(&[0.48, 0.6, 0.64]);
        let kappa = 10.0;
        let model = FisherModel::new(mu.clone(), kappa).unwrap();
        let engine = SphereEngine::new(&ChartSource::Fisher(&model)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst = 0.0_f64;
        for _ in 0..1000 {
            let x = uniform_sphere(3, &mut rng);
            let got = engine.forward(&x).unwrap();
            let want = rotsym_map(&mu, &x, fisher_u(mu.dot(&x), kappa));
            worst = worst.max(got.geodesic_distance(&want));
        }
        assert!(worst < 1e-6, "worst disagreement {worst}");
    }

    #[test]
    fn engine_matches_the_axial_acg_closed_form() {
        let axis = uv(&[0.0, 0.6, 0.8]);
        let ratio = 4.0;
        let model = AcgModel::axial(&axis, ratio).unwrap();
        let engine = SphereEngine::new(&ChartSource::Acg(&model)).unwrap();
        let chart = engine.chart();
        assert_abs_diff_eq!(chart.axis().unwrap().dot(&axis).abs(), 1.0, epsilon = 1e-10);
        assert!(chart.anchor().is_none(), "two eigenvalues give a flat angle marginal");
        let m = chart.axis().unwrap().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut worst = 0.0_f64;
        for _ in 0..500 {
            let x = uniform_sphere(3, &mut rng);
            let got = engine.forward(&x).unwrap();
            let want = rotsym_map(&m, &x, acg_u(m.dot(&x), ratio));
            worst = worst.max(got.geodesic_distance(&want));
        }
        assert!(worst < 1e-6, "worst disagreement {worst}");
    }

    #[test]
    fn numeric_chart_recovers_the_fisher_axis() {
        let mu = uv(&[-0.6, 0.64, 0.48]);
        let kappa = 4.0;
        let m = mu.clone();
        let f: SphereDensity = Arc::new(move |x| (kappa * (x.dot(&m) - 1.0)).exp());
        let engine = SphereEngine::new(&ChartSource::Density { p: 3, f }).unwrap();
        let axis = engine.chart().axis().unwrap();
        assert!(axis.geodesic_distance(&mu) < 1e-8, "axis off by {}", axis.geodesic_distance(&mu));
    }

    #[test]
    fn antipodally_symmetric_density_ties_the_median() {
        let v = uv(&[0.0, 0.0, 1.0]);
        let f: SphereDensity = Arc::new(move |x| (3.0 * x.dot(&v).powi(2)).exp());
        let err = SphereEngine::new(&ChartSource::Density { p: 3, f }).unwrap_err();
        assert!(matches!(err, Error::AmbiguousMedian { .. }), "got {err:?}");
    }

    #[test]
    fn poles_pass_through_unchanged() {
        let mu = uv(&[0.0, 0.8, 0.6]);
        let model = FisherModel::new(mu.clone(), 5.0).unwrap();
        let engine = SphereEngine::new(&ChartSource::Fisher(&model)).unwrap();
        for pole in [mu.clone(), mu.antipode()] {
            let y = engine.forward(&pole).unwrap();
            assert_abs_diff_eq!(y.dot(&pole), 1.0, epsilon = 1e-15);
            let back = engine.inverse(&pole).unwrap();
            assert_abs_diff_eq!(back.dot(&pole), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn engine_round_trips_on_a_symmetric_source() {
        let mu = uv(&[0.48, 0.6, 0.64]);
        let model = FisherModel::new(mu, 10.0).unwrap();
        let engine = SphereEngine::new(&ChartSource::Fisher(&model)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..250 {
            // Where e^{κ(t-1)} falls below f64 resolution the forward map
            // contracts the tail past what the output coordinates can store
            // (the closed form saturates identically), so the round-trip
            // check keeps κ(1 - t) ≤ 15.
            let x = uniform_sphere(3, &mut rng);
            if engine.chart().axis().unwrap().dot(&x) < -0.5 {
                continue;
            }
            let there = engine.forward(&x).unwrap();
            let back = engine.inverse(&there).unwrap();
            assert!(chord(&back, &x) < 1e-9, "moved {}", chord(&back, &x));
        }
    }

    #[test]
    fn engine_round_trips_on_a_skew_source() {
        // A linear pull toward z against a quadratic ridge oblique to it: at
        // the median the ridge leaves an odd t·sinθ cross term, so the angle
        // marginal is genuinely 2π-periodic and the circle level anchors.
        let a = uv(&[0.0, 0.0, 1.0]);
        let w = uv(&[0.6, 0.0, 0.8]);
        let f: SphereDensity =
            Arc::new(move |x| (0.8 * x.dot(&a) + 1.2 * x.dot(&w).powi(2)).exp());
        let engine = SphereEngine::new(&ChartSource::Density { p: 3, f }).unwrap();
        assert!(engine.chart().anchor().is_some(), "skew density should anchor the circle");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let x = uniform_sphere(3, &mut rng);
            let there = engine.forward(&x).unwrap();
            let back = engine.inverse(&there).unwrap();
            assert!(chord(&back, &x) < 1e-9, "moved {}", chord(&back, &x));
        }
    }

    #[test]
    fn circle_engine_round_trips() {
        let f: SphereDensity = Arc::new(|x| (1.3 * x.as_slice()[0] - 0.4 * x.as_slice()[1]).exp());
        let engine = SphereEngine::new(&ChartSource::Density { p: 2, f }).unwrap();
        assert_eq!(engine.chart().uniform_level(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let x = uniform_sphere(2, &mut rng);
            let there = engine.forward(&x).unwrap();
            let back = engine.inverse(&there).unwrap();
            assert!(chord(&back, &x) < 1e-9, "moved {}", chord(&back, &x));
        }
    }

    #[test]
    fn transformed_fisher_cosines_are_uniform_in_moments() {
        // t' = 2F(t) - 1 with t ~ F is uniform on [-1, 1]: mean 0, variance
        // 1/3. With n = 4000 the mean's standard error is 0.0091.
        let mu = uv(&[0.6, 0.0, 0.8]);
        let model = FisherModel::new(mu.clone(), 10.0).unwrap();
        let engine = SphereEngine::new(&ChartSource::Fisher(&model)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 4000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for x in sample_fisher(&model, n, &mut rng) {
            let t_new = mu.dot(&engine.forward(&x).unwrap());
            sum += t_new;
            sum_sq += t_new * t_new;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.04, "mean {mean}");
        assert!((var - 1.0 / 3.0).abs() < 0.04, "variance {var}");
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let engine = SphereEngine::new(&ChartSource::Uniform { p: 3 }).unwrap();
        let x = uv(&[1.0, 0.0]);
        assert!(engine.forward(&x).is_err());
        assert!(check_dim(4).is_err());
    }
}
