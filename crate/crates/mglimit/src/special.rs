//! Scalar special functions used by the analytic layer.
//!
//! Everything is built on two primitives: a Lanczos log-gamma and the
//! regularized incomplete gamma pair (series for `x < a + 1`, Lentz
//! continued fraction otherwise). The error function, the normal CDF and
//! the Kolmogorov distribution are derived from those, so a single pair of
//! kernels carries all the accuracy requirements (absolute error well below
//! 1e-12 on the ranges exercised here).

/// Smallest magnitude admitted inside the Lentz recurrence.
const FPMIN: f64 = 1e-300;
/// Relative tolerance for series/continued-fraction termination.
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 600;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

/// Natural log of the gamma function for `x > 0`.
///
/// Panics on non-positive or non-finite input; nothing in this crate
/// evaluates gamma on the reflection side.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0 && x.is_finite(), "ln_gamma: x must be positive, got {x}");
    if x < 0.5 {
        // One reflection keeps the Lanczos sum on its accurate branch.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x) / Γ(a)`.
pub fn reg_gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "reg_gamma_p: need a > 0, x >= 0");
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn reg_gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "reg_gamma_q: need a > 0, x >= 0");
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

/// Series expansion of P(a, x), convergent and stable for x < a + 1.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            let log_prefix = -x + a * x.ln() - ln_gamma(a);
            return (sum * log_prefix.exp()).min(1.0);
        }
    }
    panic!("gamma_p_series failed to converge for a={a}, x={x}");
}

/// Modified-Lentz evaluation of the Q(a, x) continued fraction for x >= a + 1.
fn gamma_q_cf(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            let log_prefix = -x + a * x.ln() - ln_gamma(a);
            return (h * log_prefix.exp()).clamp(0.0, 1.0);
        }
    }
    panic!("gamma_q_cf failed to converge for a={a}, x={x}");
}

/// Error function, via erf(x) = P(1/2, x²) for x >= 0.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        -erf(-x)
    } else if x == 0.0 {
        0.0
    } else {
        reg_gamma_p(0.5, x * x)
    }
}

/// Complementary error function; uses the continued-fraction branch in the
/// far tail so values near 0 keep full relative accuracy.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x == 0.0 {
        1.0
    } else {
        reg_gamma_q(0.5, x * x)
    }
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile on (0, 1); bisection bracket plus Newton polish.
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "normal_quantile: p must lie in (0,1), got {p}");
    // The median is exact by symmetry.
    if p == 0.5 {
        return 0.0;
    }
    let mut lo = -40.0;
    let mut hi = 40.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..4 {
        let density = normal_pdf(z);
        if density > 0.0 {
            z -= (normal_cdf(z) - p) / density;
        }
    }
    z
}

/// CDF of the Kolmogorov distribution (sup of the Brownian bridge modulus).
///
/// The two theta-series representations are swapped at x = 1 so each side
/// uses its rapidly convergent form.
pub fn kolmogorov_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < 1.0 {
        // sqrt(2π)/x · Σ exp(-(2j-1)² π² / (8x²))
        let mut sum = 0.0;
        let factor = std::f64::consts::PI * std::f64::consts::PI / (8.0 * x * x);
        for j in 1..MAX_ITER {
            let odd = (2 * j - 1) as f64;
            let term = (-odd * odd * factor).exp();
            sum += term;
            if term < EPS * sum.max(1e-30) {
                break;
            }
        }
        ((2.0 * std::f64::consts::PI).sqrt() / x * sum).clamp(0.0, 1.0)
    } else {
        // 1 - 2 Σ (-1)^{j-1} exp(-2 j² x²)
        let mut sum = 0.0;
        for j in 1..MAX_ITER {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * x * x).exp();
            if j % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
            if term < EPS {
                break;
            }
        }
        (1.0 - 2.0 * sum).clamp(0.0, 1.0)
    }
}

/// Quantile of the Kolmogorov distribution on (0, 1), by bisection.
pub fn kolmogorov_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "kolmogorov_quantile: p must lie in (0,1)");
    let mut lo = 1e-6;
    let mut hi = 8.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
