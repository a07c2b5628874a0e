//! Multigraphon kernels: a probability distribution over edge multiplicities
//! attached to every point pair of the unit square, symmetric, with no odd
//! mass on the diagonal.
//!
//! The trait is deliberately tiny (pointwise pmf, tail, optional support
//! bound); densities, distances and projections are free functions over it.
//! Step embeddings of finite graphs reproduce graph densities exactly in
//! expectation, which is what the oracle comparisons lean on.

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exact;
use crate::multigraph::{Multigraph, Pattern, PatternEnumeration};

/// Monte Carlo estimate: mean, sample count and standard error of the mean.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub n_samples: u64,
    /// Sample standard deviation divided by sqrt(n_samples).
    pub stderr: f64,
}

impl Estimate {
    /// Standard error of the difference of two independent estimates.
    pub fn combined_stderr(&self, other: &Estimate) -> f64 {
        (self.stderr * self.stderr + other.stderr * other.stderr).sqrt()
    }
}

/// Welford accumulator producing an [`Estimate`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RunningMean {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningMean {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Bessel-corrected sample variance; 0 for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn estimate(&self) -> Estimate {
        let stderr = if self.n < 2 { 0.0 } else { (self.variance() / self.n as f64).sqrt() };
        Estimate { value: self.mean, n_samples: self.n, stderr }
    }
}

/// Kernel interface: `eval` is the pmf at multiplicity `r` for the point
/// pair `(x, y)`, `tail` the mass at or above `r`.
pub trait Multigraphon {
    fn eval(&self, r: u32, x: f64, y: f64) -> f64;

    fn tail(&self, r: u32, x: f64, y: f64) -> f64;

    /// Largest multiplicity with nonzero mass, when finite.
    fn support_bound(&self) -> Option<u32> {
        None
    }
}

impl<T: Multigraphon + ?Sized> Multigraphon for &T {
    fn eval(&self, r: u32, x: f64, y: f64) -> f64 {
        (**self).eval(r, x, y)
    }
    fn tail(&self, r: u32, x: f64, y: f64) -> f64 {
        (**self).tail(r, x, y)
    }
    fn support_bound(&self) -> Option<u32> {
        (**self).support_bound()
    }
}

/// Step kernel of a finite graph: the unit interval is cut into n equal
/// cells and `eval(r, x, y)` is the indicator that the underlying entry
/// equals `r`.
#[derive(Clone, Debug)]
pub struct StepMultigraphon {
    graph: Multigraph,
}

impl StepMultigraphon {
    pub fn new(graph: Multigraph) -> Self {
        StepMultigraphon { graph }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    fn cell(&self, x: f64) -> usize {
        debug_assert!((0.0..=1.0).contains(&x), "coordinate outside [0,1]");
        let n = self.graph.n();
        ((n as f64 * x).ceil() as usize).clamp(1, n) - 1
    }
}

impl Multigraphon for StepMultigraphon {
    fn eval(&self, r: u32, x: f64, y: f64) -> f64 {
        if self.graph.z(self.cell(x), self.cell(y)) == r {
            1.0
        } else {
            0.0
        }
    }

    fn tail(&self, r: u32, x: f64, y: f64) -> f64 {
        if self.graph.z(self.cell(x), self.cell(y)) >= r {
            1.0
        } else {
            0.0
        }
    }

    fn support_bound(&self) -> Option<u32> {
        Some(self.graph.max_cell_multiplicity())
    }
}

fn draw_uniforms(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..k).map(|_| rng.random::<f64>()).collect()
}

fn hom_weight(h: &impl Multigraphon, f: &Pattern, u: &[f64]) -> f64 {
    let mut prod = 1.0;
    for i in 0..f.k() {
        for j in i..f.k() {
            prod *= h.tail(f.a(i, j), u[i], u[j]);
            if prod == 0.0 {
                return 0.0;
            }
        }
    }
    prod
}

fn ind_weight(h: &impl Multigraphon, f: &Pattern, u: &[f64]) -> f64 {
    let mut prod = 1.0;
    for i in 0..f.k() {
        for j in i..f.k() {
            prod *= h.eval(f.a(i, j), u[i], u[j]);
            if prod == 0.0 {
                return 0.0;
            }
        }
    }
    prod
}

/// Monte Carlo homomorphism density: mean over independent uniform vertex
/// positions of the product of pairwise tails (diagonal factors included).
pub fn hom_density_mc(
    h: &impl Multigraphon,
    f: &Pattern,
    n_samples: u64,
    rng: &mut impl Rng,
) -> Estimate {
    assert!(n_samples >= 1);
    let mut acc = RunningMean::new();
    for _ in 0..n_samples {
        let u = draw_uniforms(f.k(), rng);
        acc.push(hom_weight(h, f, &u));
    }
    acc.estimate()
}

/// Monte Carlo induced density: as [`hom_density_mc`] with pointwise pmf
/// factors instead of tails, diagonal cells included.
pub fn ind_density_mc(
    h: &impl Multigraphon,
    f: &Pattern,
    n_samples: u64,
    rng: &mut impl Rng,
) -> Estimate {
    assert!(n_samples >= 1);
    let mut acc = RunningMean::new();
    for _ in 0..n_samples {
        let u = draw_uniforms(f.k(), rng);
        acc.push(ind_weight(h, f, &u));
    }
    acc.estimate()
}

/// Monte Carlo estimate of the share of point pairs at multiplicity exactly
/// `r` (the kernel analogue of the graph pair marginal).
pub fn pair_multiplicity_mc(
    h: &impl Multigraphon,
    r: u32,
    n_samples: u64,
    rng: &mut impl Rng,
) -> Estimate {
    let mut acc = RunningMean::new();
    for _ in 0..n_samples {
        let (x, y) = (rng.random::<f64>(), rng.random::<f64>());
        acc.push(h.eval(r, x, y));
    }
    acc.estimate()
}

/// Monte Carlo estimate of the share of diagonal points carrying exactly
/// `r` loops.
pub fn loop_multiplicity_mc(
    h: &impl Multigraphon,
    r: u32,
    n_samples: u64,
    rng: &mut impl Rng,
) -> Estimate {
    let mut acc = RunningMean::new();
    for _ in 0..n_samples {
        let x = rng.random::<f64>();
        acc.push(h.eval(2 * r, x, x));
    }
    acc.estimate()
}

/// Result of the kernel-level multisubgraph distance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GraphonMsDistance {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub truncation_bound: f64,
}

/// Plug-in multisubgraph distance between two kernels.
///
/// Every density gap is estimated with common random numbers, so comparing
/// a kernel against itself returns exactly zero. Patterns beyond three
/// vertices contribute their weight to the truncation bound, as do the
/// 2^{-i_max} enumeration tail and the estimated marginal mass above
/// `r_max`. The reported stderr combines the per-term paired standard
/// errors in quadrature.
pub fn ms_distance_graphons(
    h1: &impl Multigraphon,
    h2: &impl Multigraphon,
    i_max: u32,
    r_max: u32,
    n_samples: u64,
    rng: &mut impl Rng,
) -> GraphonMsDistance {
    let mut value = 0.0;
    let mut var = 0.0;
    let mut weight = 0.5;
    let mut skipped = 0.0;
    for f in PatternEnumeration::new().take(i_max as usize) {
        if f.k() > 3 {
            skipped += weight;
        } else {
            let mut acc = RunningMean::new();
            for _ in 0..n_samples {
                let u = draw_uniforms(f.k(), rng);
                acc.push(hom_weight(h1, &f, &u) - hom_weight(h2, &f, &u));
            }
            let est = acc.estimate();
            value += weight * est.value.abs();
            var += weight * weight * est.stderr * est.stderr;
        }
        weight *= 0.5;
    }
    // Pair-marginal and loop-marginal gap sums, one paired batch per rank.
    for r in 0..=r_max {
        let mut pair = RunningMean::new();
        let mut diag = RunningMean::new();
        for _ in 0..n_samples {
            let (x, y) = (rng.random::<f64>(), rng.random::<f64>());
            pair.push(h1.eval(r, x, y) - h2.eval(r, x, y));
            diag.push(h1.eval(2 * r, x, x) - h2.eval(2 * r, x, x));
        }
        for est in [pair.estimate(), diag.estimate()] {
            value += est.value.abs();
            var += est.stderr * est.stderr;
        }
    }
    // Marginal mass above r_max for both kernels, estimated on shared draws.
    let mut tail_mass = RunningMean::new();
    for _ in 0..n_samples {
        let (x, y) = (rng.random::<f64>(), rng.random::<f64>());
        tail_mass.push(
            h1.tail(r_max + 1, x, y)
                + h2.tail(r_max + 1, x, y)
                + h1.tail(2 * r_max + 2, x, x)
                + h2.tail(2 * r_max + 2, x, x),
        );
    }
    let bound = 2f64.powi(-(i_max as i32)) + skipped + tail_mass.estimate().value;
    GraphonMsDistance {
        value,
        stderr: var.sqrt(),
        n_samples,
        truncation_bound: bound,
    }
}

/// Monte Carlo L1 gaps of the rank-`r` tails over the square and along the
/// diagonal.
pub fn d_sq_dg(
    h1: &impl Multigraphon,
    h2: &impl Multigraphon,
    r: u32,
    n_samples: u64,
    rng: &mut impl Rng,
) -> (Estimate, Estimate) {
    let mut sq = RunningMean::new();
    let mut dg = RunningMean::new();
    for _ in 0..n_samples {
        let (x, y) = (rng.random::<f64>(), rng.random::<f64>());
        sq.push((h1.tail(r, x, y) - h2.tail(r, x, y)).abs());
        dg.push((h1.tail(r, x, x) - h2.tail(r, x, x)).abs());
    }
    (sq.estimate(), dg.estimate())
}

/// Sorted union of the two cell grids `{i/n1}` and `{j/n2}` on [0,1].
fn refinement(n1: usize, n2: usize) -> Vec<BigRational> {
    let mut cuts: Vec<BigRational> = Vec::with_capacity(n1 + n2 + 1);
    for i in 0..=n1 {
        cuts.push(exact::ratio(i as i64, n1 as i64));
    }
    for j in 0..=n2 {
        cuts.push(exact::ratio(j as i64, n2 as i64));
    }
    cuts.sort();
    cuts.dedup();
    cuts
}

/// Cell of the step kernel on `n` cells containing the interval
/// `(cuts[s], cuts[s+1])`; the midpoint avoids boundary ambiguity.
fn segment_cell(lo: &BigRational, hi: &BigRational, n: usize) -> usize {
    let mid = (lo + hi) / exact::int(2);
    let scaled = mid * exact::int(n as u64);
    // ceil(n·mid) - 1 with exact arithmetic; mid is interior so never 0.
    let ceil = scaled.ceil().to_integer();
    let idx: usize = ceil.try_into().expect("cell index fits usize");
    idx.clamp(1, n) - 1
}

/// Exact square and diagonal tail gaps for two step kernels, by common grid
/// refinement. No sampling noise; used for oracle-grade comparisons.
pub fn d_sq_dg_exact_steps(
    g1: &Multigraph,
    g2: &Multigraph,
    r: u32,
) -> (BigRational, BigRational) {
    let (n1, n2) = (g1.n(), g2.n());
    let cuts = refinement(n1, n2);
    let mut cells = Vec::with_capacity(cuts.len() - 1);
    for s in 0..cuts.len() - 1 {
        let len = &cuts[s + 1] - &cuts[s];
        let c1 = segment_cell(&cuts[s], &cuts[s + 1], n1);
        let c2 = segment_cell(&cuts[s], &cuts[s + 1], n2);
        cells.push((len, c1, c2));
    }
    let mut sq = BigRational::zero();
    let mut dg = BigRational::zero();
    for (len_a, a1, a2) in &cells {
        let t1 = g1.z(*a1, *a1) >= r;
        let t2 = g2.z(*a2, *a2) >= r;
        if t1 != t2 {
            dg += len_a;
        }
        for (len_b, b1, b2) in &cells {
            let t1 = g1.z(*a1, *b1) >= r;
            let t2 = g2.z(*a2, *b2) >= r;
            if t1 != t2 {
                sq += len_a * len_b;
            }
        }
    }
    (sq, dg)
}

/// Simple graphon obtained by merging all positive multiplicities and
/// dropping loops: pointwise value tail(1, x, y).
pub struct ErasedGraphon<H> {
    inner: H,
}

impl<H: Multigraphon> ErasedGraphon<H> {
    pub fn new(inner: H) -> Self {
        ErasedGraphon { inner }
    }

    /// Edge probability of the erased kernel at `(x, y)`.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.inner.tail(1, x, y)
    }
}

/// Homomorphism density of a simple pattern in a simple graphon.
pub fn simple_hom_density_mc<H: Multigraphon>(
    h: &ErasedGraphon<H>,
    f: &Pattern,
    n_samples: u64,
    rng: &mut impl Rng,
) -> Estimate {
    assert!(f.is_simple(), "erased densities take simple patterns");
    let mut acc = RunningMean::new();
    for _ in 0..n_samples {
        let u = draw_uniforms(f.k(), rng);
        let mut prod = 1.0;
        for i in 0..f.k() {
            for j in (i + 1)..f.k() {
                if f.a(i, j) == 1 {
                    prod *= h.value(u[i], u[j]);
                }
            }
        }
        acc.push(prod);
    }
    acc.estimate()
}

/// Two-level collapse of a kernel: off the diagonal only multiplicities 0
/// and 1 survive (1 absorbs all positive mass); the diagonal becomes a
/// point mass at 0. Plain homomorphism densities of simple patterns in this
/// kernel coincide with simple-graphon densities of the erased kernel.
pub struct TwoLevelTruncation<H> {
    inner: H,
}

impl<H: Multigraphon> TwoLevelTruncation<H> {
    pub fn new(inner: H) -> Self {
        TwoLevelTruncation { inner }
    }
}

impl<H: Multigraphon> Multigraphon for TwoLevelTruncation<H> {
    fn eval(&self, r: u32, x: f64, y: f64) -> f64 {
        if x == y {
            return if r == 0 { 1.0 } else { 0.0 };
        }
        match r {
            0 => self.inner.eval(0, x, y),
            1 => self.inner.tail(1, x, y),
            _ => 0.0,
        }
    }

    fn tail(&self, r: u32, x: f64, y: f64) -> f64 {
        if x == y {
            return if r == 0 { 1.0 } else { 0.0 };
        }
        match r {
            0 => 1.0,
            1 => self.inner.tail(1, x, y),
            _ => 0.0,
        }
    }

    fn support_bound(&self) -> Option<u32> {
        Some(1)
    }
}

/// Worst defects found while probing the kernel axioms at random points.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct AxiomReport {
    /// max |Σ_r eval + tail(R+1) - 1| over probes.
    pub normalization: f64,
    /// max |eval(r,x,y) - eval(r,y,x)|.
    pub symmetry: f64,
    /// max eval(2r+1, x, x).
    pub odd_diagonal: f64,
    /// max |tail(r) - tail(r+1) - eval(r)|.
    pub tail_consistency: f64,
}

impl AxiomReport {
    pub fn worst(&self) -> f64 {
        self.normalization.max(self.symmetry).max(self.odd_diagonal).max(self.tail_consistency)
    }
}

/// Probe the kernel axioms at `n_probes` random points.
///
/// The normalization sum runs to the support bound when finite, otherwise
/// to the first rank whose tail drops below 1e-13 (capped at 4096).
pub fn probe_axioms(h: &impl Multigraphon, n_probes: u64, rng: &mut impl Rng) -> AxiomReport {
    let mut report = AxiomReport::default();
    for _ in 0..n_probes {
        let (x, y) = (rng.random::<f64>(), rng.random::<f64>());
        let r_stop = match h.support_bound() {
            Some(b) => b + 1,
            None => {
                let mut r = 1;
                while r < 4096 && h.tail(r, x, y) > 1e-13 {
                    r += 1;
                }
                r
            }
        };
        let mut sum = 0.0;
        for r in 0..r_stop {
            let e = h.eval(r, x, y);
            sum += e;
            report.symmetry = report.symmetry.max((e - h.eval(r, y, x)).abs());
            report.tail_consistency = report
                .tail_consistency
                .max((h.tail(r, x, y) - h.tail(r + 1, x, y) - e).abs());
        }
        sum += h.tail(r_stop, x, y);
        report.normalization = report.normalization.max((sum - 1.0).abs());
        for r in 0..=(r_stop / 2) {
            report.odd_diagonal = report.odd_diagonal.max(h.eval(2 * r + 1, x, x));
        }
    }
    report
}
