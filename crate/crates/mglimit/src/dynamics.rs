//! The edge-reconnection Markov chain: half-edge additions, uniform
//! deletions below a density threshold, and half-edge relocations, together
//! with its time-scaled observation process and a fast marginal sampler for
//! the total-degree path.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::generators::{draw_endpoint, grow, GrowthParams};
use crate::multigraph::{sampled_density, DensityKind, Multigraph, Pattern};
use crate::multigraphon::Estimate;
use crate::oracle::{enumerate_graphs_by_edges, ExactLaw, OracleError};

/// Errors from chain configuration and observation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },
    #[error("p1 = 0 leaves the observation time scale undefined")]
    UndefinedTimeScale,
    #[error("the fast path needs p1 = p2 and an initial count at or above the barrier")]
    FastPathUnavailable,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Chain parameters. `seed` is bookkeeping for replication layers; the
/// samplers themselves take an explicit rng.
#[derive(Clone, Copy, Debug)]
pub struct ReconnectParams {
    pub n: usize,
    pub theta: f64,
    pub p1: f64,
    pub p2: f64,
    pub a: f64,
    pub rho0: f64,
    pub seed: u64,
}

impl ReconnectParams {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let fail = |reason: &str| {
            Err(DynamicsError::InvalidParams { reason: reason.to_string() })
        };
        if self.n < 1 || self.n > 255 {
            return fail("n must lie in 1..=255");
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return fail("theta must be positive and finite");
        }
        if !(0.0..=1.0).contains(&self.p1) || !(0.0..=1.0).contains(&self.p2) {
            return fail("p1 and p2 must lie in [0,1]");
        }
        if self.p1 + self.p2 > 1.0 {
            return fail("p1 + p2 must not exceed 1");
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return fail("a must be positive and finite");
        }
        if !(self.rho0 >= self.a && self.rho0.is_finite()) {
            return fail("need rho0 >= a");
        }
        Ok(())
    }

    /// Initial half-edge count: 2 * floor(rho0 n^2 / 2).
    pub fn initial_half_edges(&self) -> u64 {
        2 * (self.rho0 * (self.n * self.n) as f64 / 2.0).floor() as u64
    }

    /// Strict threshold test: deletions are enabled only above a n^2 + 1.
    fn above_threshold(&self, l: u64) -> bool {
        l as f64 > self.a * (self.n * self.n) as f64 + 1.0
    }
}

/// Chain state. The edge list doubles as the half-edge pairing: slot 2k is
/// one side of entry k and slot 2k+1 the other, so partner lookup is O(1).
#[derive(Clone, Debug)]
pub struct ReconnectState {
    pub graph: Multigraph,
    /// Steps taken since initialization.
    pub m: u64,
}

impl ReconnectState {
    pub fn half_edges(&self) -> u64 {
        self.graph.half_edge_count()
    }

    /// Scaled half-edge density L / n^2.
    pub fn y(&self) -> f64 {
        self.half_edges() as f64 / (self.graph.n() * self.graph.n()) as f64
    }
}

/// Draw the initial state: the growth chain run to half the initial
/// half-edge target.
pub fn init_state(params: &ReconnectParams, rng: &mut impl Rng) -> ReconnectState {
    params.validate().expect("valid parameters");
    let m0 = params.initial_half_edges() / 2;
    let growth = GrowthParams::new(params.n, params.theta, m0);
    ReconnectState { graph: grow(&growth, None, rng), m: 0 }
}

/// Advance the chain one step: above the threshold add / delete / move with
/// probabilities p1 / p2 / 1-p1-p2, below it the deletion mass folds into
/// addition.
pub fn step(state: &mut ReconnectState, params: &ReconnectParams, rng: &mut impl Rng) {
    let l = state.graph.half_edge_count();
    let above = params.above_threshold(l);
    let u: f64 = rng.random();
    let action = if above {
        if u < params.p1 {
            Action::Add
        } else if u < params.p1 + params.p2 {
            Action::Delete
        } else {
            Action::Move
        }
    } else if u < params.p1 + params.p2 {
        Action::Add
    } else {
        Action::Move
    };
    debug_assert!(above || action != Action::Delete, "deletion below the threshold");
    match action {
        Action::Add => {
            let i = draw_endpoint(&state.graph, params.theta, None, rng);
            let j = draw_endpoint(&state.graph, params.theta, Some(i), rng);
            state.graph.add_entry(i, j);
        }
        Action::Delete => {
            let entries = state.graph.edge_entries().len();
            debug_assert!(entries > 0, "threshold guarantees a nonempty edge list");
            let idx = rng.random_range(0..entries);
            state.graph.remove_entry(idx);
        }
        Action::Move => {
            if l > 0 {
                // Uniform half-edge slot; its owner keeps the edge, the
                // partner half-edge is reattached with degree-plus-theta
                // weights at the pre-detachment degrees.
                let h = rng.random_range(0..l);
                let idx = (h / 2) as usize;
                let moved_side = 1 - (h % 2) as usize;
                let w = draw_endpoint(&state.graph, params.theta, None, rng);
                state.graph.move_half_edge(idx, moved_side, w);
            }
        }
    }
    state.m += 1;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Action {
    Add,
    Delete,
    Move,
}

/// Step index observed at scaled time s: floor(n^4 s / p1).
pub fn step_index_for_time(n: usize, p1: f64, s: f64) -> Result<u64, DynamicsError> {
    if p1 <= 0.0 {
        return Err(DynamicsError::UndefinedTimeScale);
    }
    if !(s.is_finite() && (0.0..=1e3).contains(&s)) {
        return Err(DynamicsError::InvalidParams { reason: format!("time {s} out of range") });
    }
    // n <= 255 keeps n^4 s / p1 far from the u64 edge for s <= 1e3.
    let n4 = (n as u64).pow(4);
    let m = (n4 as f64 * s / p1).floor();
    assert!(m < 9.2e18, "step index overflows u64");
    Ok(m as u64)
}

/// Densities recorded for one pattern at one observation time.
#[derive(Clone, Debug)]
pub struct PatternObservation {
    pub ind: Estimate,
    pub inj: Estimate,
    /// Injective density of the pattern in the erased simple graph; only
    /// recorded for simple patterns.
    pub erased_inj: Option<Estimate>,
}

/// One observation time: scaled density and per-pattern estimates.
#[derive(Clone, Debug)]
pub struct Observation {
    pub time: f64,
    pub step_index: u64,
    pub y: f64,
    pub per_pattern: Vec<PatternObservation>,
}

/// A full observed trajectory of one chain replicate.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub observations: Vec<Observation>,
}

/// Run one chain and record density estimates at each scaled time. The
/// chain is frozen while densities are sampled in place.
pub fn run_and_observe(
    params: &ReconnectParams,
    times: &[f64],
    patterns: &[Pattern],
    n_inj: u64,
    rng: &mut impl Rng,
) -> Result<Trajectory, DynamicsError> {
    params.validate()?;
    assert!(n_inj >= 1, "need at least one density sample");
    assert!(times.windows(2).all(|w| w[0] <= w[1]), "times must be sorted");
    if !times.is_empty() && params.p1 == 0.0 {
        return Err(DynamicsError::UndefinedTimeScale);
    }
    let mut state = init_state(params, rng);
    let mut observations = Vec::with_capacity(times.len());
    for &s in times {
        let target = step_index_for_time(params.n, params.p1, s)?;
        while state.m < target {
            step(&mut state, params, rng);
        }
        let erased = if patterns.iter().any(|f| f.is_simple()) {
            Some(state.graph.erased())
        } else {
            None
        };
        let per_pattern = patterns
            .iter()
            .map(|f| PatternObservation {
                ind: sampled_density(f, &state.graph, DensityKind::Ind, n_inj, rng),
                inj: sampled_density(f, &state.graph, DensityKind::Inj, n_inj, rng),
                erased_inj: erased
                    .as_ref()
                    .filter(|_| f.is_simple())
                    .map(|e| sampled_density(f, e, DensityKind::Inj, n_inj, rng)),
            })
            .collect();
        observations.push(Observation { time: s, step_index: target, y: state.y(), per_pattern });
    }
    Ok(Trajectory { observations })
}

/// Reflection barrier: the largest even count at or below the threshold.
/// Below it the chain is forced upward, mirroring the folded walk at the
/// barrier.
fn reflection_barrier(params: &ReconnectParams) -> u64 {
    let threshold = params.a * (params.n * params.n) as f64 + 1.0;
    2 * (threshold / 2.0).floor() as u64
}

/// Marginal of the half-edge count along a path, ignoring graph structure.
///
/// Valid for p1 = p2: the count is then a lazy +-2 walk reflected at the
/// barrier, so L(m) = b + |2 S(m) + L(0) - b| pathwise, with S a lazy unit
/// walk. Increments are drawn in bulk: the number of non-lazy steps in a
/// block is binomial, and their sum is a recentred binomial.
pub fn sample_l_path_fast(
    params: &ReconnectParams,
    step_indices: &[u64],
    rng: &mut impl Rng,
) -> Result<Vec<u64>, DynamicsError> {
    params.validate()?;
    assert!(step_indices.windows(2).all(|w| w[0] <= w[1]), "steps must be sorted");
    let l0 = params.initial_half_edges();
    let b = reflection_barrier(params);
    if params.p1 != params.p2 || l0 < b {
        return Err(DynamicsError::FastPathUnavailable);
    }
    let mut s: i64 = 0;
    let mut prev = 0u64;
    let mut out = Vec::with_capacity(step_indices.len());
    for &m in step_indices {
        let block = m - prev;
        if block > 0 && params.p1 > 0.0 {
            let moves = Binomial::new(block, 2.0 * params.p1)
                .expect("valid binomial parameters")
                .sample(rng);
            let ups = Binomial::new(moves, 0.5).expect("valid binomial parameters").sample(rng);
            s += 2 * ups as i64 - moves as i64;
        }
        let w = 2 * s + l0 as i64 - b as i64;
        out.push(b + w.unsigned_abs());
        prev = m;
    }
    Ok(out)
}

/// Per-bucket report from [`conditional_cm_check`].
#[derive(Clone, Debug)]
pub struct LBucketReport {
    pub half_edges: u64,
    pub draws: u64,
    pub tv: f64,
}

/// Empirical check that the chain's conditional law given the half-edge
/// count matches the growth law with that many edges: run `n_draws`
/// independent chains for m steps, bucket by final count, and measure each
/// bucket against the exact closed-form law.
pub fn conditional_cm_check(
    params: &ReconnectParams,
    m: u64,
    n_draws: u64,
    rng: &mut impl Rng,
) -> Result<Vec<LBucketReport>, DynamicsError> {
    params.validate()?;
    use std::collections::BTreeMap;
    let mut buckets: BTreeMap<u64, BTreeMap<Vec<u32>, u64>> = BTreeMap::new();
    for _ in 0..n_draws {
        let mut state = init_state(params, rng);
        for _ in 0..m {
            step(&mut state, params, rng);
        }
        *buckets
            .entry(state.half_edges())
            .or_default()
            .entry(state.graph.canonical_key())
            .or_insert(0) += 1;
    }
    let theta = num_rational::BigRational::from_float(params.theta)
        .expect("theta is finite");
    let mut reports = Vec::new();
    for (l, counts) in buckets {
        let mut exact_law = ExactLaw::new();
        for g in enumerate_graphs_by_edges(params.n, l / 2)? {
            exact_law.add_mass(g.canonical_key(), crate::generators::growth_graph_prob(&g, &theta));
        }
        let draws: u64 = counts.values().sum();
        reports.push(LBucketReport { half_edges: l, draws, tv: exact_law.tv_vs_counts(&counts, draws) });
    }
    Ok(reports)
}
