//! Random multigraph generators and their exact probability mass functions:
//! the configuration model (uniform pairing of labeled half-edges) and the
//! sequential growth model that adds edges with degree-proportional weights.
//!
//! Samplers work in floating point; every closed-form pmf is exact big
//! rational, so oracle comparisons are equality checks rather than
//! tolerance checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::exact;
use crate::multigraph::Multigraph;
use crate::special::ln_gamma;

/// Errors from generator construction and pmf evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("degree total {total} is odd; half-edges cannot be paired")]
    OddTotal { total: u64 },
    #[error("graph degrees do not match the prescribed sequence")]
    DegreeMismatch,
    #[error("state space needs {required} atoms but the cap is {cap}")]
    CapExceeded { required: u128, cap: u64 },
}

/// Prescribed degrees for the configuration model. Zero entries are legal;
/// only the pairing step insists on an even total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    d: Vec<u64>,
}

impl DegreeSequence {
    pub fn new(d: Vec<u64>) -> Self {
        assert!(!d.is_empty(), "a degree sequence needs at least one vertex");
        DegreeSequence { d }
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.d
    }

    /// Total number of half-edges.
    pub fn total(&self) -> u64 {
        self.d.iter().sum()
    }
}

/// Parameters of the growth model: `m` edges are added one at a time among
/// `n` vertices, endpoints drawn with weight degree + theta.
#[derive(Clone, Copy, Debug)]
pub struct GrowthParams {
    pub n: usize,
    pub theta: f64,
    pub m: u64,
}

impl GrowthParams {
    pub fn new(n: usize, theta: f64, m: u64) -> Self {
        assert!(n >= 1, "need at least one vertex");
        assert!(theta > 0.0 && theta.is_finite(), "theta must be positive");
        GrowthParams { n, theta, m }
    }
}

/// Uniform configuration-model draw: pair the lowest unmatched half-edge
/// with a uniformly random remaining one until none are left.
pub fn sample_cm(d: &DegreeSequence, rng: &mut impl Rng) -> Result<Multigraph, GeneratorError> {
    let total = d.total();
    if total % 2 != 0 {
        return Err(GeneratorError::OddTotal { total });
    }
    let mut owners: Vec<u32> = Vec::with_capacity(total as usize);
    for (v, &deg) in d.degrees().iter().enumerate() {
        owners.extend(std::iter::repeat(v as u32).take(deg as usize));
    }
    let mut g = Multigraph::empty(d.n());
    let mut i = 0;
    while i < owners.len() {
        let j = rng.random_range(i + 1..owners.len());
        owners.swap(i + 1, j);
        g.add_entry(owners[i] as usize, owners[i + 1] as usize);
        i += 2;
    }
    Ok(g)
}

/// Exact configuration-model probability of a labeled multigraph:
/// the number of pairings projecting to it over (l-1)!! total, i.e.
/// prod d_i! / ((l-1)!! prod_{i<j} z_ij! prod_i z_ii!!).
pub fn cm_prob(g: &Multigraph, d: &DegreeSequence) -> Result<BigRational, GeneratorError> {
    if g.n() != d.n() || g.degrees().iter().zip(d.degrees()).any(|(a, b)| a != b) {
        return Err(GeneratorError::DegreeMismatch);
    }
    let total = d.total();
    if total % 2 != 0 {
        return Err(GeneratorError::OddTotal { total });
    }
    let mut numer = BigInt::one();
    for &deg in d.degrees() {
        numer *= exact::factorial(deg);
    }
    let mut denom = if total == 0 { BigInt::one() } else { exact::double_factorial(total - 1) };
    for i in 0..g.n() {
        denom *= exact::double_factorial(g.z(i, i) as u64);
        for j in (i + 1)..g.n() {
            denom *= exact::factorial(g.z(i, j) as u64);
        }
    }
    Ok(BigRational::new(numer, denom))
}

/// One endpoint draw with weight degree + theta, realized as a mixture:
/// with probability L' / (L' + n theta) return the owner of a uniform
/// half-edge slot, else a uniform vertex. `provisional` adds one phantom
/// half-edge owned by that vertex (the second endpoint of the pair law sees
/// the first endpoint's fresh half-edge).
pub(crate) fn draw_endpoint(
    g: &Multigraph,
    theta: f64,
    provisional: Option<usize>,
    rng: &mut impl Rng,
) -> usize {
    let l = g.half_edge_count() + provisional.map_or(0, |_| 1);
    let n = g.n();
    let u = rng.random::<f64>() * (l as f64 + n as f64 * theta);
    if u < l as f64 {
        let slot = rng.random_range(0..l);
        if slot == g.half_edge_count() {
            return provisional.unwrap();
        }
        let (a, b) = g.edge_entries()[(slot / 2) as usize];
        if slot % 2 == 0 {
            a as usize
        } else {
            b as usize
        }
    } else {
        rng.random_range(0..n)
    }
}

/// Grow a multigraph by `params.m` sequential edge additions.
///
/// Each addition draws endpoint one with probability proportional to
/// degree + theta, then endpoint two with the same weights except the first
/// endpoint counts its just-created half-edge; jointly that reproduces the
/// pair law 2(d_i+theta)(d_j+theta) off the diagonal and
/// (d_i+theta)(d_i+theta+1) on it, both over (2t+n theta)(2t+n theta+1).
pub fn grow(params: &GrowthParams, start: Option<Multigraph>, rng: &mut impl Rng) -> Multigraph {
    let mut g = match start {
        Some(s) => {
            assert_eq!(s.n(), params.n, "start graph has the wrong vertex count");
            s
        }
        None => Multigraph::empty(params.n),
    };
    for _ in 0..params.m {
        let i = draw_endpoint(&g, params.theta, None, rng);
        let j = draw_endpoint(&g, params.theta, Some(i), rng);
        g.add_entry(i, j);
    }
    g
}

/// Exact probability that the growth model run for m steps produces a given
/// labeled multigraph: prod_i theta^{(d_i)} / (n theta)^{(2m)} times
/// (2m)!! / (prod_{i<j} z_ij! prod_i z_ii!!).
pub fn growth_graph_prob(g: &Multigraph, theta: &BigRational) -> BigRational {
    let two_m = g.half_edge_count();
    assert!(two_m % 2 == 0, "half-edge count is always even");
    let n_theta = theta * exact::int(g.n() as u64);
    let mut p = BigRational::new(exact::double_factorial(two_m), BigInt::one());
    p /= exact::rising_factorial(&n_theta, two_m);
    for i in 0..g.n() {
        p *= exact::rising_factorial(theta, g.degree(i));
        p /= BigRational::new(exact::double_factorial(g.z(i, i) as u64), BigInt::one());
        for j in (i + 1)..g.n() {
            p /= BigRational::new(exact::factorial(g.z(i, j) as u64), BigInt::one());
        }
    }
    p
}

/// Exact probability that the growth model's degree sequence after m steps
/// equals `d`: (2m)! / (n theta)^{(2m)} prod_i theta^{(d_i)} / d_i!.
pub fn growth_degree_prob(
    d: &DegreeSequence,
    theta: &BigRational,
) -> Result<BigRational, GeneratorError> {
    let total = d.total();
    if total % 2 != 0 {
        return Err(GeneratorError::OddTotal { total });
    }
    let n_theta = theta * exact::int(d.n() as u64);
    let mut p = BigRational::new(exact::factorial(total), BigInt::one());
    p /= exact::rising_factorial(&n_theta, total);
    for &deg in d.degrees() {
        p *= exact::rising_factorial(theta, deg);
        p /= BigRational::new(exact::factorial(deg), BigInt::one());
    }
    Ok(p)
}

/// Negative binomial pmf with shape `theta` and the given mean:
/// (1-p)^theta p^r theta^{(r)} / r! at success probability
/// p = mean / (mean + theta).
pub fn nb_pmf(r: u32, theta: f64, mean: f64) -> f64 {
    assert!(theta > 0.0 && mean >= 0.0);
    if mean == 0.0 {
        return if r == 0 { 1.0 } else { 0.0 };
    }
    let p = mean / (mean + theta);
    let log_pmf = theta * (1.0 - p).ln() + r as f64 * p.ln() + ln_gamma(theta + r as f64)
        - ln_gamma(theta)
        - ln_gamma(r as f64 + 1.0);
    log_pmf.exp()
}

/// Exact law of n iid negative binomials conditioned on total 2m, as a map
/// from degree sequences to probabilities. The success probability cancels
/// under the conditioning, so the result is a rational function of theta
/// alone and must coincide with [`growth_degree_prob`].
pub fn nb_conditional_degree_law(
    n: usize,
    m: u64,
    theta: &BigRational,
    cap: u64,
) -> Result<Vec<(Vec<u64>, BigRational)>, GeneratorError> {
    let total = 2 * m;
    let states = compositions_count(total, n);
    if states > cap as u128 {
        return Err(GeneratorError::CapExceeded { required: states, cap });
    }
    let mut atoms: Vec<(Vec<u64>, BigRational)> = Vec::new();
    let mut normalizer = BigRational::zero();
    let mut d = vec![0u64; n];
    enumerate_compositions(total, 0, &mut d, &mut |d: &[u64]| {
        let mut w = BigRational::one();
        for &deg in d {
            w *= exact::rising_factorial(theta, deg);
            w /= BigRational::new(exact::factorial(deg), BigInt::one());
        }
        normalizer += &w;
        atoms.push((d.to_vec(), w));
    });
    for (_, w) in atoms.iter_mut() {
        *w /= &normalizer;
    }
    Ok(atoms)
}

fn compositions_count(total: u64, parts: usize) -> u128 {
    // C(total + parts - 1, parts - 1); small arguments only.
    let b = exact::binomial(total + parts as u64 - 1, parts as u64 - 1);
    b.try_into().unwrap_or(u128::MAX)
}

fn enumerate_compositions(left: u64, pos: usize, d: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
    if pos + 1 == d.len() {
        d[pos] = left;
        visit(d);
        return;
    }
    for v in 0..=left {
        d[pos] = v;
        enumerate_compositions(left - v, pos + 1, d, visit);
    }
}
