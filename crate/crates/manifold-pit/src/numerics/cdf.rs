//! Monotone CDFs: validation, inversion, and table-backed interpolants.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Inversion tolerance in CDF value.
const INVERT_TOL: f64 = 1e-12;
/// Grid size used by `validate`.
const VALIDATE_GRID: usize = 1024;

/// Solves F(r) = q on [lo, hi] for a nondecreasing F, by a bracketed
/// bisection/secant hybrid. Terminates when |F(r) - q| ≤ 1e-12 or the
/// bracket collapses; errors after 200 iterations without either.
pub fn invert_cdf(f: &dyn Fn(f64) -> f64, q: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::range(format!("invert_cdf target {q} outside [0, 1]")));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a) - q, f(b) - q);
    if fa > 0.0 && fa <= INVERT_TOL {
        return Ok(a);
    }
    if fb < 0.0 && -fb <= INVERT_TOL {
        return Ok(b);
    }
    if fa > 0.0 || fb < 0.0 {
        return Err(Error::domain(format!(
            "invert_cdf bracket does not contain target: F({a}) - q = {fa}, F({b}) - q = {fb}"
        )));
    }
    for iter in 0..200 {
        // Secant proposal when it lands strictly inside the bracket; forced
        // bisection every fourth step keeps the bracket shrinking.
        let mid = 0.5 * (a + b);
        let secant = if (fb - fa).abs() > 1e-300 { a - fa * (b - a) / (fb - fa) } else { mid };
        let x = if iter % 4 != 3 && secant > a && secant < b { secant } else { mid };
        let fx = f(x) - q;
        if fx.abs() <= INVERT_TOL {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if b - a < 1e-16 * (1.0 + b.abs()) {
            return Ok(0.5 * (a + b));
        }
    }
    Err(Error::NonConvergence { routine: "invert_cdf", iterations: 200 })
}

/// A cumulative distribution function on a compact support [0, end].
///
/// Either a closure (analytic form, quadrature composition, ...) or a
/// monotone piecewise-cubic table; both expose evaluation and inversion and
/// the same object serves the forward and the inverse transform, so round
/// trips see one consistent function.
#[derive(Clone)]
pub struct MonotoneCdf {
    end: f64,
    kind: Kind,
}

impl std::fmt::Debug for MonotoneCdf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            Kind::Analytic(_) => "analytic",
            Kind::Table(_) => "table",
        };
        write!(f, "MonotoneCdf {{ end: {}, kind: {} }}", self.end, kind)
    }
}

#[derive(Clone)]
enum Kind {
    Analytic(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Table(Arc<PchipCurve>),
}

impl MonotoneCdf {
    /// Wraps a closure assumed to satisfy F(0) = 0, F(end) = 1, nondecreasing.
    pub fn analytic(end: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        MonotoneCdf { end, kind: Kind::Analytic(Arc::new(f)) }
    }

    /// Tabulates `f` on a 513-point Chebyshev grid over [0, end] and fits a
    /// monotone piecewise cubic through the values.
    pub fn tabulated(end: f64, f: &dyn Fn(f64) -> f64) -> Result<Self> {
        let xs = chebyshev_nodes(513, 0.0, end);
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let curve = PchipCurve::new(xs, ys)?;
        Ok(MonotoneCdf { end, kind: Kind::Table(Arc::new(curve)) })
    }

    /// Tabulates the cumulative integral of a nonnegative `density` over
    /// [0, end], normalized to total mass 1. Each Chebyshev segment is
    /// integrated with a 5-point Gauss-Legendre rule, so smooth densities are
    /// resolved far below the interpolation error of the table itself.
    pub fn tabulated_density(end: f64, density: &dyn Fn(f64) -> f64) -> Result<Self> {
        Self::tabulated_density_n(end, density, 513)
    }

    /// As `tabulated_density` with an explicit node count, for callers whose
    /// downstream error budget needs a finer (or tolerates a coarser) table.
    pub fn tabulated_density_n(end: f64, density: &dyn Fn(f64) -> f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("CDF table needs at least 2 nodes, got {n}")));
        }
        let xs = chebyshev_nodes(n, 0.0, end);
        let (gl_nodes, gl_weights) = crate::numerics::quadrature::gauss_legendre(5);
        let mut ys = Vec::with_capacity(xs.len());
        ys.push(0.0);
        let mut acc = 0.0;
        for w in xs.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let segment: f64 = gl_nodes
                .iter()
                .zip(&gl_weights)
                .map(|(&t, &wt)| wt * density(mid + half * t))
                .sum::<f64>()
                * half;
            acc += segment.max(0.0);
            ys.push(acc);
        }
        if !(acc > 0.0) || !acc.is_finite() {
            return Err(Error::domain("density integrates to a non-positive or non-finite mass"));
        }
        for y in &mut ys {
            *y /= acc;
        }
        *ys.last_mut().expect("nonempty") = 1.0;
        let curve = PchipCurve::new(xs, ys)?;
        Ok(MonotoneCdf { end, kind: Kind::Table(Arc::new(curve)) })
    }

    /// Builds directly from precomputed (x, F(x)) pairs.
    pub fn from_table(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let end = *xs.last().ok_or_else(|| Error::domain("empty table"))?;
        let curve = PchipCurve::new(xs, ys)?;
        Ok(MonotoneCdf { end, kind: Kind::Table(Arc::new(curve)) })
    }

    pub fn support_end(&self) -> f64 {
        self.end
    }

    /// F(r), clamped to the support.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, self.end);
        match &self.kind {
            Kind::Analytic(f) => f(r),
            Kind::Table(t) => t.eval(r),
        }
    }

    /// F^{-1}(q). Endpoints map exactly: 0 -> 0, 1 -> end.
    pub fn invert(&self, q: f64) -> Result<f64> {
        if q <= 0.0 {
            return Ok(0.0);
        }
        if q >= 1.0 {
            return Ok(self.end);
        }
        match &self.kind {
            Kind::Analytic(f) => invert_cdf(&**f, q, 0.0, self.end),
            Kind::Table(t) => t.invert(q),
        }
    }

    /// Checks F(0) ≈ 0, F(end) ≈ 1 (to 1e-10) and monotonicity on a
    /// 1024-point grid.
    pub fn validate(&self) -> Result<()> {
        let f0 = self.eval(0.0);
        let f1 = self.eval(self.end);
        if f0.abs() > 1e-10 || (f1 - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!(
                "CDF endpoints off: F(0) = {f0:e}, F(end) - 1 = {:e}",
                f1 - 1.0
            )));
        }
        let mut prev = f0;
        for i in 1..=VALIDATE_GRID {
            let x = self.end * i as f64 / VALIDATE_GRID as f64;
            let y = self.eval(x);
            if y < prev - 1e-12 {
                return Err(Error::NonMonotone { near: x });
            }
            prev = y;
        }
        Ok(())
    }
}

/// Chebyshev extrema on [a, b], ordered increasing, endpoints included.
pub fn chebyshev_nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|j| {
            let t = (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos();
            a + 0.5 * (b - a) * (1.0 - t)
        })
        .collect()
}

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes).
///
/// Interpolates nondecreasing data exactly at the nodes and stays
/// nondecreasing in between, which keeps table-backed CDFs invertible.
pub struct PchipCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl PchipCurve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::domain("pchip needs at least two matching nodes"));
        }
        for i in 1..n {
            if xs[i] <= xs[i - 1] {
                return Err(Error::domain("pchip nodes must be strictly increasing"));
            }
            if ys[i] < ys[i - 1] - 1e-12 * (1.0 + ys[i - 1].abs()) {
                return Err(Error::NonMonotone { near: xs[i] });
            }
        }
        let mut d = vec![0.0; n - 1];
        for i in 0..n - 1 {
            d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
            d[i] = d[i].max(0.0);
        }
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = d[0];
            slopes[1] = d[0];
            return Ok(PchipCurve { xs, ys, slopes });
        }
        slopes[0] = clip_endpoint_slope(pick_endpoint_slope(xs[1] - xs[0], xs[2] - xs[1], d[0], d[1]), d[0]);
        slopes[n - 1] = clip_endpoint_slope(
            pick_endpoint_slope(xs[n - 1] - xs[n - 2], xs[n - 2] - xs[n - 3], d[n - 2], d[n - 3]),
            d[n - 2],
        );
        for i in 1..n - 1 {
            if d[i - 1] <= 0.0 || d[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                slopes[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        Ok(PchipCurve { xs, ys, slopes })
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    fn eval_derivative(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let dh00 = (6.0 * t2 - 6.0 * t) / h;
        let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
        let dh01 = (-6.0 * t2 + 6.0 * t) / h;
        let dh11 = 3.0 * t2 - 2.0 * t;
        dh00 * self.ys[i] + dh10 * self.slopes[i] + dh01 * self.ys[i + 1] + dh11 * self.slopes[i + 1]
    }

    /// Solves eval(x) = q by segment bracketing plus safeguarded Newton.
    pub fn invert(&self, q: f64) -> Result<f64> {
        let n = self.xs.len();
        if q <= self.ys[0] {
            return Ok(self.xs[0]);
        }
        if q >= self.ys[n - 1] {
            return Ok(self.xs[n - 1]);
        }
        // First segment whose right value reaches q.
        let mut i = match self.ys.binary_search_by(|v| v.partial_cmp(&q).unwrap()) {
            Ok(j) => return Ok(self.xs[j]),
            Err(j) => j.saturating_sub(1),
        };
        while self.ys[i + 1] < q {
            i += 1;
        }
        let (mut a, mut b) = (self.xs[i], self.xs[i + 1]);
        let mut x = 0.5 * (a + b);
        for _ in 0..100 {
            let fx = self.eval(x) - q;
            if fx.abs() <= INVERT_TOL {
                return Ok(x);
            }
            if fx < 0.0 {
                a = x;
            } else {
                b = x;
            }
            let dfx = self.eval_derivative(x);
            let newton = if dfx > 1e-300 { x - fx / dfx } else { f64::NAN };
            x = if newton.is_finite() && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if b - a < 1e-17 * (1.0 + b.abs()) {
                return Ok(x);
            }
        }
        // Flat stretch: the bracket is tight even if the value gap is not.
        Ok(0.5 * (a + b))
    }
}

fn pick_endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
}

fn clip_endpoint_slope(m: f64, d0: f64) -> f64 {
    if m * d0 <= 0.0 {
        0.0
    } else if m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
