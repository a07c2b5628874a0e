//! Analytic limit objects: the Poisson family, the Gamma(theta, theta)
//! distribution with its generalized inverse, the static Poisson-Gamma
//! multigraphon, the folded Brownian total-degree path, and nested Monte
//! Carlo estimates of limiting induced densities.

use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::exact;
use crate::multigraph::Pattern;
use crate::multigraphon::{Estimate, Multigraphon, RunningMean};
use crate::special::{ln_gamma, reg_gamma_p};

/// Poisson probability of exactly r events at rate lambda.
pub fn poisson_pmf(r: u32, lambda: f64) -> f64 {
    assert!(lambda >= 0.0 && lambda.is_finite(), "rate must be finite and non-negative");
    if lambda == 0.0 {
        return if r == 0 { 1.0 } else { 0.0 };
    }
    (r as f64 * lambda.ln() - lambda - ln_gamma(r as f64 + 1.0)).exp()
}

/// Poisson upper tail P(X >= r), evaluated through the regularized lower
/// incomplete gamma function rather than by subtracting partial sums.
pub fn poisson_tail(r: u32, lambda: f64) -> f64 {
    assert!(lambda >= 0.0 && lambda.is_finite(), "rate must be finite and non-negative");
    if r == 0 {
        return 1.0;
    }
    if lambda == 0.0 {
        return 0.0;
    }
    reg_gamma_p(r as f64, lambda)
}

/// CDF of the Gamma distribution with shape theta and rate theta (unit
/// mean).
pub fn gamma_cdf(x: f64, theta: f64) -> f64 {
    assert!(theta > 0.0 && theta.is_finite(), "theta must be positive");
    if x <= 0.0 {
        return 0.0;
    }
    reg_gamma_p(theta, theta * x)
}

fn gamma_pdf(x: f64, theta: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (theta * theta.ln() + (theta - 1.0) * x.ln() - theta * x - ln_gamma(theta)).exp()
}

/// Generalized inverse of [`gamma_cdf`]: the smallest x with CDF(x) >= u.
/// u = 1 returns the +infinity sentinel; kernel constructors reject it.
pub fn gamma_quantile(u: f64, theta: f64) -> f64 {
    assert!(theta > 0.0 && theta.is_finite(), "theta must be positive");
    assert!((0.0..=1.0).contains(&u), "u must lie in [0,1], got {u}");
    if u == 0.0 {
        return 0.0;
    }
    if u == 1.0 {
        return f64::INFINITY;
    }
    if theta == 1.0 {
        // Unit-mean exponential closed form.
        return -(-u).ln_1p();
    }
    let mut hi = 1.0f64;
    while gamma_cdf(hi, theta) < u {
        hi *= 2.0;
        assert!(hi.is_finite(), "quantile bracket diverged at u = {u}");
    }
    // Resolve the bracket to relative width 1e-12; tiny-shape quantiles sit
    // many orders of magnitude below the initial bracket, so the tolerance
    // must scale with hi rather than stay absolute.
    let mut lo = 0.0f64;
    for _ in 0..300 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if gamma_cdf(mid, theta) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    // Newton polish inside the bracket.
    for _ in 0..4 {
        let d = gamma_pdf(x, theta);
        if d <= 0.0 {
            break;
        }
        let step = (gamma_cdf(x, theta) - u) / d;
        let next = x - step;
        if next > lo && next < hi {
            x = next;
        }
    }
    x
}

#[derive(Clone)]
enum Quantile {
    Gamma { theta: f64 },
    Constant,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Quantile {
    fn at(&self, u: f64) -> f64 {
        match self {
            Quantile::Gamma { theta } => gamma_quantile(u, *theta),
            Quantile::Constant => 1.0,
            Quantile::Custom(f) => f(u),
        }
    }
}

/// Static limiting multigraphon. Off the diagonal the multiplicity at
/// (x, z) is Poisson with rate y q(x) q(z), where q is the degree-profile
/// quantile and y the limiting half-edge density; on the diagonal the loop
/// count is Poisson with rate y q(x)^2 / 2, so odd multiplicities carry no
/// mass.
#[derive(Clone)]
pub struct PoissonGammaKernel {
    y: f64,
    quantile: Quantile,
}

impl PoissonGammaKernel {
    /// Realized half-edge density of this kernel.
    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Kernel with the Gamma(theta, theta) degree profile.
pub fn static_limit_kernel(y: f64, theta: f64) -> PoissonGammaKernel {
    assert!(y > 0.0 && y.is_finite(), "y must be positive and finite");
    assert!(theta > 0.0 && theta.is_finite(), "theta must be positive");
    PoissonGammaKernel { y, quantile: Quantile::Gamma { theta } }
}

/// Kernel for the constant-degree case: the quantile collapses to 1 and
/// every off-diagonal cell is Poisson(c).
pub fn degenerate_kernel(c: f64) -> PoissonGammaKernel {
    assert!(c > 0.0 && c.is_finite(), "c must be positive and finite");
    PoissonGammaKernel { y: c, quantile: Quantile::Constant }
}

/// Kernel with a caller-supplied quantile function. The function must be
/// finite and non-negative on the open unit interval; a handful of probe
/// points reject quantiles that leak the u = 1 infinity sentinel.
pub fn kernel_with_quantile(
    y: f64,
    quantile: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> PoissonGammaKernel {
    assert!(y > 0.0 && y.is_finite(), "y must be positive and finite");
    for &u in &[1e-9, 0.25, 0.5, 0.75, 1.0 - 1e-9] {
        let v = quantile(u);
        assert!(v.is_finite() && v >= 0.0, "quantile must be finite and non-negative, got {v} at {u}");
    }
    PoissonGammaKernel { y, quantile: Quantile::Custom(Arc::new(quantile)) }
}

impl Multigraphon for PoissonGammaKernel {
    fn eval(&self, r: u32, x: f64, z: f64) -> f64 {
        if x == z {
            if r % 2 == 1 {
                return 0.0;
            }
            let q = self.quantile.at(x);
            poisson_pmf(r / 2, self.y * q * q / 2.0)
        } else {
            poisson_pmf(r, self.y * self.quantile.at(x) * self.quantile.at(z))
        }
    }

    fn tail(&self, r: u32, x: f64, z: f64) -> f64 {
        if x == z {
            // Multiplicity is twice the loop count: P(2K >= r) = P(K >= ceil(r/2)).
            let q = self.quantile.at(x);
            poisson_tail(r.div_ceil(2), self.y * q * q / 2.0)
        } else {
            poisson_tail(r, self.y * self.quantile.at(x) * self.quantile.at(z))
        }
    }
}

/// Parameters of the limiting total-degree process
/// Y(s) = a + |scale B(s) + rho0 - a|.
#[derive(Clone, Copy, Debug)]
pub struct LimitParams {
    pub theta: f64,
    pub a: f64,
    pub rho0: f64,
    /// Scale on the driving Brownian motion. Defaults to 2.
    pub diffusion_scale: f64,
}

impl LimitParams {
    pub fn new(theta: f64, a: f64, rho0: f64) -> Self {
        assert!(theta > 0.0 && theta.is_finite(), "theta must be positive");
        assert!(a > 0.0 && a.is_finite(), "a must be positive");
        assert!(rho0 >= a && rho0.is_finite(), "need rho0 >= a");
        LimitParams { theta, a, rho0, diffusion_scale: 2.0 }
    }

    pub fn with_diffusion_scale(mut self, scale: f64) -> Self {
        assert!(scale > 0.0 && scale.is_finite(), "scale must be positive");
        self.diffusion_scale = scale;
        self
    }
}

/// One realized limiting path: Y sampled jointly at a fixed time grid.
#[derive(Clone, Debug)]
pub struct LimitPath {
    pub points: Vec<PathPoint>,
}

#[derive(Clone, Copy, Debug)]
pub struct PathPoint {
    pub time: f64,
    pub y: f64,
}

impl LimitPath {
    /// Static kernel realized at each sampled time.
    pub fn kernels(&self, theta: f64) -> Vec<PoissonGammaKernel> {
        self.points.iter().map(|p| static_limit_kernel(p.y, theta)).collect()
    }
}

/// Sample Y(s) = a + |scale B(s) + rho0 - a| jointly at the given sorted
/// times via Gaussian increments of the free process.
pub fn sample_limit_path(params: &LimitParams, times: &[f64], rng: &mut impl Rng) -> LimitPath {
    let mut prev_t = 0.0;
    let mut w = params.rho0 - params.a;
    let mut points = Vec::with_capacity(times.len());
    for &s in times {
        assert!(s >= prev_t && s.is_finite(), "times must be sorted and non-negative");
        let ds = s - prev_t;
        if ds > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            w += params.diffusion_scale * ds.sqrt() * z;
        }
        points.push(PathPoint { time: s, y: params.a + w.abs() });
        prev_t = s;
    }
    LimitPath { points }
}

/// Pattern weight of an exchangeable multiplicity kernel at half-edge
/// density y: the expectation over iid Gamma(theta, theta) marks of the
/// product of Poisson cell probabilities the pattern prescribes, diagonal
/// cells included.
pub fn psi_expectation(
    f: &Pattern,
    y: f64,
    theta: f64,
    n_samples: u64,
    rng: &mut impl Rng,
) -> Estimate {
    assert!(y > 0.0 && y.is_finite(), "y must be positive");
    assert!(theta > 0.0 && theta.is_finite(), "theta must be positive");
    assert!(n_samples >= 1, "need at least one sample");
    let k = f.k();
    let gamma = Gamma::new(theta, 1.0 / theta).expect("valid shape and scale");
    let mut mean = RunningMean::new();
    let mut zeta = vec![0.0f64; k];
    for _ in 0..n_samples {
        for z in zeta.iter_mut() {
            *z = gamma.sample(rng);
        }
        let mut v = 1.0;
        for i in 0..k {
            v *= poisson_pmf(f.a(i, i) / 2, y * zeta[i] * zeta[i] / 2.0);
            for j in (i + 1)..k {
                v *= poisson_pmf(f.a(i, j), y * zeta[i] * zeta[j]);
            }
        }
        mean.push(v);
    }
    mean.estimate()
}

/// Nested Monte Carlo estimate of the limiting expected induced density at
/// time s: outer draws realize Y(s) from the folded Gaussian marginal,
/// inner draws average the pattern weight at that Y. The reported stderr is
/// the spread of the per-path inner means, which absorbs both noise layers.
pub fn expected_ind_density_at_time(
    f: &Pattern,
    s: f64,
    params: &LimitParams,
    n_outer: u64,
    n_inner: u64,
    rng: &mut impl Rng,
) -> Estimate {
    assert!(s >= 0.0 && s.is_finite(), "time must be non-negative");
    assert!(n_outer >= 1 && n_inner >= 1, "need samples at both levels");
    let mu = params.rho0 - params.a;
    let sigma = params.diffusion_scale * s.sqrt();
    let mut outer = RunningMean::new();
    for _ in 0..n_outer {
        let w = if sigma > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            mu + sigma * z
        } else {
            mu
        };
        let y = params.a + w.abs();
        let inner = psi_expectation(f, y, params.theta, n_inner, rng);
        outer.push(inner.value);
    }
    outer.estimate()
}

/// Average of a symmetric k-ary function over injective index tuples.
/// Exact (stderr 0) when the number of injections fits the budget,
/// otherwise an unbiased sample of `budget` uniform injections.
pub fn u_statistic(
    k: usize,
    xs: &[f64],
    f: impl Fn(&[f64]) -> f64,
    budget: u64,
    rng: &mut impl Rng,
) -> Estimate {
    let n = xs.len();
    assert!(k >= 1, "order must be at least 1");
    assert!(k <= n, "U-statistic order exceeds the sample size");
    let total = exact::falling_factorial(n as u64, k as u64);
    if total <= num_bigint::BigInt::from(budget) {
        let mut sum = 0.0;
        let mut count = 0u64;
        let mut used = vec![false; n];
        let mut tuple = vec![0.0f64; k];
        exhaustive_injections(xs, &f, 0, &mut used, &mut tuple, &mut sum, &mut count);
        Estimate { value: sum / count as f64, n_samples: count, stderr: 0.0 }
    } else {
        let mut mean = RunningMean::new();
        let mut idx: Vec<usize> = (0..n).collect();
        let mut tuple = vec![0.0f64; k];
        for _ in 0..budget {
            // Partial Fisher-Yates draw of k distinct indices.
            for pos in 0..k {
                let j = rng.random_range(pos..n);
                idx.swap(pos, j);
                tuple[pos] = xs[idx[pos]];
            }
            mean.push(f(&tuple));
        }
        mean.estimate()
    }
}

fn exhaustive_injections(
    xs: &[f64],
    f: &impl Fn(&[f64]) -> f64,
    depth: usize,
    used: &mut [bool],
    tuple: &mut [f64],
    sum: &mut f64,
    count: &mut u64,
) {
    if depth == tuple.len() {
        *sum += f(tuple);
        *count += 1;
        return;
    }
    for i in 0..xs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        tuple[depth] = xs[i];
        exhaustive_injections(xs, f, depth + 1, used, tuple, sum, count);
        used[i] = false;
    }
}
