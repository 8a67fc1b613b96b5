//! The Poincaré upper half-plane: metric (dx² + dy²)/y².
//!
//! Geodesics are vertical rays and semicircles centered on the boundary.
//! Exp and log are closed-form through the Möbius action: rotating the
//! tangent plane at i by φ is the SL(2, R) element R_φ with half-angle
//! entries, so the geodesic with direction φ from the vertical is R_φ
//! applied to the vertical geodesic i e^s. Written out, every intermediate
//! stays bounded for all directions; there is no circle-center coordinate
//! that degenerates on near-vertical rays.

use crate::error::{Error, Result};

/// A point (x, y) with y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!("half-plane point needs y > 0, got ({x}, {y})")));
        }
        Ok(HalfPlanePoint { x, y })
    }
}

/// Hyperbolic distance: cosh d = 1 + |a - b|² / (2 y_a y_b).
pub fn halfplane_distance(a: HalfPlanePoint, b: HalfPlanePoint) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let arg = 1.0 + (dx * dx + dy * dy) / (2.0 * a.y * b.y);
    arg.acosh()
}

/// Exponential map at `m`: follows the unit-speed geodesic leaving `m` with
/// initial Euclidean direction v/|v| for hyperbolic arclength |v|/m.y.
///
/// `v` holds Euclidean components of a tangent vector at m; its Riemannian
/// length is |v|/m.y.
pub fn halfplane_exp(m: HalfPlanePoint, v: (f64, f64)) -> HalfPlanePoint {
    let speed = (v.0 * v.0 + v.1 * v.1).sqrt();
    let s = speed / m.y;
    if s < 1e-300 {
        return m;
    }
    let (dx, dy) = (v.0 / speed, v.1 / speed);
    // Direction angle from the upward vertical; R_φ(i e^s) in normalized
    // coordinates, written with w = e^{-s} so large s stays stable.
    let phi = (-dx).atan2(dy);
    let (sh, ch) = (0.5 * phi).sin_cos();
    let w = (-s).exp();
    let den = ch * ch * w * w + sh * sh;
    let zx = sh * ch * (w * w - 1.0) / den;
    let zy = w / den;
    HalfPlanePoint { x: m.x + m.y * zx, y: m.y * zy }
}

/// Log map at `m`: the tangent vector (Euclidean components) whose
/// exponential reaches `p`. Returns (0, 0) when p = m.
pub fn halfplane_log(m: HalfPlanePoint, p: HalfPlanePoint) -> (f64, f64) {
    let dist = halfplane_distance(m, p);
    if dist < 1e-300 {
        return (0.0, 0.0);
    }
    // In coordinates normalized so m sits at i, the rotation R_{-φ} must send
    // p onto the upper vertical axis; solving Re R_{-φ}(z) = 0 with modulus
    // at least one gives φ = atan2(-2 Re z, |z|² - 1).
    let zx = (p.x - m.x) / m.y;
    let zy = p.y / m.y;
    let phi = (-2.0 * zx).atan2(zx * zx + zy * zy - 1.0);
    (-dist * m.y * phi.sin(), dist * m.y * phi.cos())
}
