//! Statistical utilities shared by the experiment suites: normal
//! confidence intervals, Kolmogorov-Smirnov and chi-square goodness of fit,
//! and the folded-normal reference law for the total-degree process.

use crate::special::{kolmogorov_quantile, normal_cdf, normal_quantile};

/// Sample mean with a normal-approximation confidence half-width at the
/// given two-sided level. Panics on fewer than two samples.
pub fn mean_ci(samples: &[f64], level: f64) -> (f64, f64) {
    assert!(samples.len() >= 2, "confidence interval needs at least two samples");
    assert!((0.0..1.0).contains(&level), "level must lie in [0, 1)");
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    let sd = (ss / (n - 1.0)).sqrt();
    let z = normal_quantile(0.5 + level / 2.0);
    (mean, z * sd / n.sqrt())
}

/// Kolmogorov-Smirnov statistic: the sup gap between the empirical CDF of
/// the samples and a reference CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!samples.is_empty(), "KS statistic needs samples");
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("samples must not be NaN"));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Asymptotic KS critical value at significance alpha for n samples.
pub fn ks_critical_value(n: u64, alpha: f64) -> f64 {
    assert!(n > 0 && alpha > 0.0 && alpha < 1.0);
    kolmogorov_quantile(1.0 - alpha) / (n as f64).sqrt()
}

/// CDF of a + |N(mu, sigma^2)|: zero below the shift a, and
/// Phi((x-a-mu)/sigma) - Phi((-(x-a)-mu)/sigma) above it.
pub fn folded_normal_cdf(x: f64, mu: f64, sigma: f64, a: f64) -> f64 {
    assert!(sigma > 0.0, "sigma must be positive");
    if x < a {
        return 0.0;
    }
    let t = x - a;
    (normal_cdf((t - mu) / sigma) - normal_cdf((-t - mu) / sigma)).max(0.0)
}

/// Mean of a + |N(mu, sigma^2)|.
pub fn folded_normal_mean(mu: f64, sigma: f64, a: f64) -> f64 {
    assert!(sigma > 0.0, "sigma must be positive");
    a + sigma * (2.0 / std::f64::consts::PI).sqrt() * (-mu * mu / (2.0 * sigma * sigma)).exp()
        + mu * (1.0 - 2.0 * normal_cdf(-mu / sigma))
}

/// Pearson chi-square goodness-of-fit statistic and its degrees of freedom
/// (cells minus one). Expected probabilities must be positive and sum to 1.
pub fn chi_square_gof(counts: &[u64], expected_probs: &[f64]) -> (f64, usize) {
    assert_eq!(counts.len(), expected_probs.len(), "cell count mismatch");
    assert!(!counts.is_empty(), "need at least one cell");
    let total: u64 = counts.iter().sum();
    assert!(total > 0, "need at least one observation");
    let prob_sum: f64 = expected_probs.iter().sum();
    assert!((prob_sum - 1.0).abs() < 1e-9, "expected probabilities must sum to 1");
    let mut stat = 0.0;
    for (&c, &p) in counts.iter().zip(expected_probs) {
        assert!(p > 0.0, "expected cell probability must be positive");
        let e = total as f64 * p;
        let diff = c as f64 - e;
        stat += diff * diff / e;
    }
    (stat, counts.len() - 1)
}
