//! 3 x 3 rotation matrices, axis-angle form, quaternion conversion.

use crate::error::{Error, Result};

/// A rotation of R^3, stored row-major. Invariant: RᵀR = I, det R = +1,
/// both within 1e-9 (checked on the fallible constructors).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3(pub [f64; 9]);

impl Rotation3 {
    pub fn identity() -> Self {
        Rotation3([1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])
    }

    /// Validates orthonormality and orientation of a raw matrix.
    pub fn new(m: [f64; 9]) -> Result<Self> {
        let r = Rotation3(m);
        let e = r.orthonormality_defect();
        if e > 1e-9 {
            return Err(Error::domain(format!("matrix is not orthonormal (defect {e:e})")));
        }
        if r.det() < 0.0 {
            return Err(Error::domain("matrix has negative determinant"));
        }
        Ok(r)
    }

    /// max |RᵀR - I| entry.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += self.0[k * 3 + i] * self.0[k * 3 + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
            + m[2] * (m[3] * m[7] - m[4] * m[6])
    }

    pub fn transpose(&self) -> Rotation3 {
        let m = &self.0;
        Rotation3([m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]])
    }

    pub fn multiply(&self, other: &Rotation3) -> Rotation3 {
        let a = &self.0;
        let b = &other.0;
        let mut out = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                out[i * 3 + j] = (0..3).map(|k| a[i * 3 + k] * b[k * 3 + j]).sum();
            }
        }
        Rotation3(out)
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
            m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
            m[6] * v[0] + m[7] * v[1] + m[8] * v[2],
        ]
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[4] + self.0[8]
    }

    /// Rodrigues formula. `axis` need not be normalized.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n < 1e-12 {
            return Err(Error::domain("axis too short to normalize"));
        }
        let (x, y, z) = (axis[0] / n, axis[1] / n, axis[2] / n);
        let (s, c) = angle.sin_cos();
        let oc = 1.0 - c;
        Ok(Rotation3([
            c + x * x * oc,
            x * y * oc - z * s,
            x * z * oc + y * s,
            y * x * oc + z * s,
            c + y * y * oc,
            y * z * oc - x * s,
            z * x * oc - y * s,
            z * y * oc + x * s,
            c + z * z * oc,
        ]))
    }

    /// From a unit quaternion (w, x, y, z); normalizes defensively.
    pub fn from_quaternion(q: [f64; 4]) -> Result<Self> {
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n < 1e-12 {
            return Err(Error::domain("quaternion too short to normalize"));
        }
        let (w, x, y, z) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
        Ok(Rotation3([
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ]))
    }

    /// Axis-angle decomposition with angle in [0, π].
    ///
    /// Near the identity the axis is conventionally (0, 0, 1); near angle π
    /// the axis is recovered from the symmetric part. Axis sign for angle π is
    /// fixed by the first nonzero coordinate being positive.
    pub fn axis_angle(&self) -> ([f64; 3], f64) {
        let m = &self.0;
        let cos_t = ((self.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
        let angle = cos_t.acos();
        if angle < 1e-9 {
            return ([0.0, 0.0, 1.0], angle);
        }
        if angle < std::f64::consts::PI - 1e-6 {
            let ax = [m[7] - m[5], m[2] - m[6], m[3] - m[1]];
            let s = 2.0 * angle.sin();
            return ([ax[0] / s, ax[1] / s, ax[2] / s], angle);
        }
        // Angle ≈ π: use R + I = 2(aaᵀ) + O(π - angle).
        let xx = ((m[0] + 1.0) * 0.5).max(0.0).sqrt();
        let yy = ((m[4] + 1.0) * 0.5).max(0.0).sqrt();
        let zz = ((m[8] + 1.0) * 0.5).max(0.0).sqrt();
        let mut a = if xx >= yy && xx >= zz {
            [xx, (m[1] + m[3]) / (4.0 * xx), (m[2] + m[6]) / (4.0 * xx)]
        } else if yy >= zz {
            [(m[1] + m[3]) / (4.0 * yy), yy, (m[5] + m[7]) / (4.0 * yy)]
        } else {
            [(m[2] + m[6]) / (4.0 * zz), (m[5] + m[7]) / (4.0 * zz), zz]
        };
        let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        for c in &mut a {
            *c /= n;
        }
        for c in a {
            if c.abs() > 1e-12 {
                if c < 0.0 {
                    a = [-a[0], -a[1], -a[2]];
                }
                break;
            }
        }
        (a, angle)
    }
}

/// The rotation carrying unit vector `a` to unit vector `b` along the plane
/// they span (identity when a = b; a fixed 180° flip when a = -b).
pub fn rotation_taking(a: [f64; 3], b: [f64; 3]) -> Rotation3 {
    let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let s = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    if s < 1e-12 {
        if dot > 0.0 {
            return Rotation3::identity();
        }
        // Antipodal: rotate π about any axis orthogonal to a.
        let helper = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let axis = [
            a[1] * helper[2] - a[2] * helper[1],
            a[2] * helper[0] - a[0] * helper[2],
            a[0] * helper[1] - a[1] * helper[0],
        ];
        return Rotation3::from_axis_angle(axis, std::f64::consts::PI).expect("axis nonzero");
    }
    Rotation3::from_axis_angle(cross, s.atan2(dot)).expect("axis nonzero")
}
