//! Adaptive Simpson quadrature and Gauss-Legendre rules.

use crate::error::{Error, Result};

/// Hard ceiling on function evaluations for one adaptive integral.
const MAX_EVALS: usize = 1_000_000;

/// ∫_a^b f, adaptive Simpson with interval bisection and Richardson control.
///
/// The local acceptance test is |S_fine - S_coarse| ≤ 15 tol_local, with the
/// tolerance split across halves, so the global error is bounded by `tol` up
/// to the usual smoothness caveats.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("adaptive_simpson needs finite endpoints"));
    }
    if a == b {
        return Ok(0.0);
    }
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: f64| -> f64 {
        evals.set(evals.get() + 1);
        f(x)
    };
    let fa = eval(a);
    let fb = eval(b);
    let m = 0.5 * (a + b);
    let fm = eval(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    // Explicit stack of (a, fa, b, fb, m, fm, S, tol); recursion depth capped
    // through the evaluation budget.
    struct Panel {
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        s: f64,
        tol: f64,
        depth: u32,
    }
    let mut stack = vec![Panel { a, fa, b, fb, m, fm, s: whole, tol: tol.max(1e-15), depth: 0 }];
    let mut total = 0.0;
    while let Some(p) = stack.pop() {
        if evals.get() > MAX_EVALS {
            return Err(Error::NonConvergence { routine: "adaptive_simpson", iterations: MAX_EVALS });
        }
        let lm = 0.5 * (p.a + p.m);
        let rm = 0.5 * (p.m + p.b);
        let flm = eval(lm);
        let frm = eval(rm);
        let sl = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        let sr = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        let delta = sl + sr - p.s;
        // A few forced splits guard against symmetric integrands that fool the
        // error estimate on the opening panels.
        let converged = delta.abs() <= 15.0 * p.tol && p.depth >= 2;
        if converged || (p.b - p.a) < 1e-14 * (b - a).abs() {
            total += sl + sr + delta / 15.0;
        } else {
            let half_tol = 0.5 * p.tol;
            let deeper = p.depth + 1;
            stack.push(Panel { a: p.a, fa: p.fa, b: p.m, fb: p.fm, m: lm, fm: flm, s: sl, tol: half_tol, depth: deeper });
            stack.push(Panel { a: p.m, fa: p.fm, b: p.b, fb: p.fb, m: rm, fm: frm, s: sr, tol: half_tol, depth: deeper });
        }
    }
    Ok(total)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// ∫_a^b f by a fixed n-point Gauss-Legendre rule.
pub fn gauss_legendre_integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}
