//! Special functions: gamma-family, Laguerre polynomials, exponential moments.

use crate::error::{Error, Result};

/// Machine-level convergence threshold for the series and continued fractions.
const EPS: f64 = 3e-16;

/// ln Γ(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection; fine for the non-integer arguments we meet.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Digamma ψ(x) for x > 0: recurrence shift to x ≥ 10, then the asymptotic
/// series with Bernoulli coefficients. Absolute accuracy well under 1e-12.
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma needs x > 0, got {x}");
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // ln x - 1/(2x) - sum B_{2k}/(2k x^{2k})
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    acc + x.ln() - 0.5 * inv - series
}

/// Trigamma ψ'(x) for x > 0, same shift-then-asymptotic scheme.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma needs x > 0, got {x}");
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/x + 1/(2x^2) + sum B_{2k}/x^{2k+1}
    let series = inv
        * (1.0
            + inv * (0.5
                + inv * (1.0 / 6.0
                    - inv2
                        * (1.0 / 30.0
                            - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0)))))));
    acc + series
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * l - kf * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Exact n! as f64 (n ≤ 170).
pub fn factorial(n: usize) -> f64 {
    assert!(n <= 170, "factorial overflows f64 beyond 170!");
    let mut acc = 1.0;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

/// Binomial coefficient C(n, k) as f64, exact for the small orders used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Regularized lower incomplete gamma P(a, x), a > 0, x ≥ 0.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "gamma_p domain: a = {a}, x = {x}");
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "gamma_q domain: a = {a}, x = {x}");
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..500 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_cf(a: f64, x: f64) -> f64 {
    // Modified Lentz on the standard continued fraction.
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// ∫_0^x e^{-κ s} s^m ds for integer m ≥ 0, κ ≥ 0, x ≥ 0.
///
/// Evaluated as γ(m+1, κx)/κ^{m+1} through the incomplete-gamma series or
/// continued fraction; both branches are cancellation-free, unlike the naive
/// integration-by-parts recurrence, which loses digits whenever κ ≲ m.
pub fn exp_decay_moment(m: usize, kappa: f64, x: f64) -> f64 {
    assert!(kappa >= 0.0 && x >= 0.0, "domain: kappa = {kappa}, x = {x}");
    if x == 0.0 {
        return 0.0;
    }
    let a = (m + 1) as f64;
    let z = kappa * x;
    if z < a + 1.0 {
        // x^a e^{-z} sum_n z^n / (a (a+1) ... (a+n)), all terms positive.
        let mut term = 1.0 / a;
        let mut sum = term;
        for n in 1..1000 {
            term *= z / (a + n as f64);
            sum += term;
            if term < sum * EPS {
                break;
            }
        }
        x.powi(m as i32 + 1) * (-z).exp() * sum
    } else {
        // Full moment minus the tail; κ is large enough that κ^{a} is safe.
        factorial(m) / kappa.powi(m as i32 + 1) * (1.0 - gamma_q_cf(a, z))
    }
}

/// ∫_0^x e^{+κ s} s^m ds for integer m ≥ 0, κ ≥ 0, x ∈ [0, 1].
///
/// Positive-term series Σ_j κ^j x^{m+j+1} / (j! (m+j+1)); callers keep κ
/// moderate (the shape-space CDF switches to quadrature beyond κ = 30).
pub fn exp_growth_moment(m: usize, kappa: f64, x: f64) -> Result<f64> {
    if !(0.0..=600.0).contains(&(kappa * x)) || x < 0.0 || x > 1.0 {
        return Err(Error::range(format!(
            "exp_growth_moment needs κx in [0, 600], x in [0, 1]; got κ = {kappa}, x = {x}"
        )));
    }
    let mut term = x.powi(m as i32 + 1);
    let mut sum = term / (m as f64 + 1.0);
    for j in 1..2000 {
        let jf = j as f64;
        term *= kappa * x / jf;
        let contrib = term / (m as f64 + jf + 1.0);
        sum += contrib;
        if contrib < sum * EPS {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { routine: "exp_growth_moment", iterations: 2000 })
}

/// Survival function of the chi-square distribution with `df` degrees of freedom.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(0.5 * df, 0.5 * x)
}

/// Quantile of the chi-square distribution, by monotone bisection on the CDF.
pub fn chi_square_quantile(p: f64, df: f64) -> f64 {
    assert!((0.0..1.0).contains(&p), "quantile level must be in [0, 1)");
    if p == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, df.max(1.0));
    while chi_square_sf(hi, df) > 1.0 - p {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - chi_square_sf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * (1.0 + hi) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Standard normal CDF via the a = 1/2 incomplete gamma: erf(y) = P(1/2, y²).
pub fn normal_cdf(x: f64) -> f64 {
    let half_erf = 0.5 * gamma_p(0.5, 0.5 * x * x);
    if x >= 0.0 {
        0.5 + half_erf
    } else {
        0.5 - half_erf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn digamma_reference_values() {
        // ψ(1) = -γ, ψ(1/2) = -γ - 2 ln 2, the rest from the recurrence and
        // independently tabulated high-precision values.
        assert_abs_diff_eq!(digamma(1.0), -0.577_215_664_901_532_9, epsilon = 1e-13);
        assert_abs_diff_eq!(digamma(0.5), -1.963_510_026_021_423_5, epsilon = 1e-13);
        assert_abs_diff_eq!(digamma(2.5), 0.703_156_640_645_243_2, epsilon = 1e-13);
        assert_abs_diff_eq!(digamma(10.0), 2.251_752_589_066_721_1, epsilon = 1e-13);
    }

    #[test]
    fn trigamma_reference_values() {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        assert_abs_diff_eq!(trigamma(1.0), pi2 / 6.0, epsilon = 1e-13);
        assert_abs_diff_eq!(trigamma(0.5), pi2 / 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(trigamma(2.5), pi2 / 2.0 - 4.0 - 1.0 / 2.25, epsilon = 1e-12);
        // ψ'(10) = π²/6 − Σ_{k=1}^{9} k^{-2}
        let tail: f64 = (1..10).map(|k| 1.0 / (k as f64 * k as f64)).sum();
        assert_abs_diff_eq!(trigamma(10.0), pi2 / 6.0 - tail, epsilon = 1e-13);
    }

    #[test]
    fn laguerre_small_orders() {
        assert_eq!(laguerre(0, 5.0), 1.0);
        assert_abs_diff_eq!(laguerre(1, 0.3), 0.7, epsilon = 1e-15);
        // L_3(x) = (-x³ + 9x² - 18x + 6)/6, so L_3(2) = -1/3.
        assert_abs_diff_eq!(laguerre(3, 2.0), -1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn laguerre_matches_series_oracle() {
        // L_n(x) = Σ C(n,k) (-x)^k / k!, evaluated directly.
        let oracle = |n: usize, x: f64| -> f64 {
            (0..=n)
                .map(|k| binomial(n, k) * (-x).powi(k as i32) / factorial(k))
                .sum()
        };
        for &n in &[2usize, 4, 5, 7] {
            for &x in &[-3.0, -0.5, 0.0, 1.3, 6.0] {
                assert_abs_diff_eq!(laguerre(n, x), oracle(n, x), epsilon = 1e-10 * (1.0 + oracle(n, x).abs()));
            }
        }
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert_abs_diff_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(ln_gamma(5.0), 24.0_f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(ln_gamma(0.5), std::f64::consts::PI.sqrt().ln(), epsilon = 1e-13);
    }

    #[test]
    fn incomplete_gamma_against_poisson_sums() {
        // For integer a, Q(a, x) = e^{-x} Σ_{k<a} x^k/k!.
        let poisson_q = |a: usize, x: f64| -> f64 {
            (0..a).map(|k| (-x).exp() * x.powi(k as i32) / factorial(k)).sum()
        };
        for &(a, x) in &[(1usize, 0.3), (3, 2.5), (3, 7.0), (6, 2.0), (10, 25.0)] {
            assert_abs_diff_eq!(gamma_q(a as f64, x), poisson_q(a, x), epsilon = 1e-13);
            assert_abs_diff_eq!(gamma_p(a as f64, x), 1.0 - poisson_q(a, x), epsilon = 1e-13);
        }
        // erf(1) = P(1/2, 1)
        assert_abs_diff_eq!(gamma_p(0.5, 1.0), 0.842_700_792_949_714_9, epsilon = 1e-13);
    }

    /// Plain composite-Simpson oracle, independent of the adaptive machinery.
    fn simpson_oracle(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut acc = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn exp_decay_moment_against_quadrature() {
        let cases = [(2usize, 3.0, 0.7), (5, 0.125, 1.0), (0, 10.0, 0.4), (7, 1.0, 0.9)];
        for &(m, kappa, x) in &cases {
            let oracle = simpson_oracle(&|s: f64| (-kappa * s).exp() * s.powi(m as i32), 0.0, x, 4096);
            assert_abs_diff_eq!(exp_decay_moment(m, kappa, x), oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn exp_decay_moment_limits() {
        // κ = 0 reduces to the plain power integral.
        assert_abs_diff_eq!(exp_decay_moment(2, 0.0, 0.7), 0.7_f64.powi(3) / 3.0, epsilon = 1e-15);
        // Tiny κ stays on the stable series branch.
        let tiny = exp_decay_moment(5, 1e-10, 1.0);
        assert_abs_diff_eq!(tiny, 1.0 / 6.0 - 1e-10 / 7.0, epsilon = 1e-14);
        // Large κ exercises the continued-fraction branch.
        let oracle = simpson_oracle(&|s: f64| (-50.0 * s).exp() * s * s, 0.0, 1.0, 1 << 15);
        assert_abs_diff_eq!(exp_decay_moment(2, 50.0, 1.0), oracle, epsilon = 1e-13);
    }

    #[test]
    fn exp_growth_moment_against_quadrature() {
        for &(m, kappa, x) in &[(3usize, 2.0, 0.8), (0, 25.0, 1.0), (5, 0.125, 0.6)] {
            let oracle = simpson_oracle(&|s: f64| (kappa * s).exp() * s.powi(m as i32), 0.0, x, 1 << 14);
            let got = exp_growth_moment(m, kappa, x).unwrap();
            assert_abs_diff_eq!(got, oracle, epsilon = 1e-11 * (1.0 + oracle));
        }
    }

    #[test]
    fn chi_square_tail_and_quantile() {
        // Classical 95% quantiles.
        assert_abs_diff_eq!(chi_square_sf(3.841_458_820_694_124, 1.0), 0.05, epsilon = 1e-12);
        assert_abs_diff_eq!(chi_square_quantile(0.95, 3.0), 7.814_727_903_251_179, epsilon = 1e-9);
        let q = chi_square_quantile(0.999, 15.0);
        assert_abs_diff_eq!(1.0 - chi_square_sf(q, 15.0), 0.999, epsilon = 1e-12);
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert_abs_diff_eq!(normal_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(normal_cdf(1.959_963_984_540_054), 0.975, epsilon = 1e-12);
        assert_abs_diff_eq!(normal_cdf(-1.0), 0.158_655_253_931_457_05, epsilon = 1e-12);
    }
}
