//! The experiment implementations behind the subcommands: verification
//! checks, static-model and chain experiments, fast path sampling, and the
//! pairwise distance printer.

use crate::config::{DynamicsConfig, PathsConfig, StaticLimitConfig, VerifyConfig};
use crate::output::{emit_verify_report, fmt_f64, write_csv, CheckResult};
use mglimit::dynamics::{run_and_observe, sample_l_path_fast, step_index_for_time, ReconnectParams};
use mglimit::exact;
use mglimit::generators::{
    cm_prob, grow, growth_degree_prob, growth_graph_prob, nb_conditional_degree_law, sample_cm,
    DegreeSequence, GrowthParams,
};
use mglimit::limit::{expected_ind_density_at_time, poisson_pmf, static_limit_kernel, LimitParams};
use mglimit::multigraph::{loop_multiplicity, ms_distance_graphs, pair_multiplicity};
use mglimit::multigraphon::{loop_multiplicity_mc, pair_multiplicity_mc, Estimate, RunningMean};
use mglimit::oracle::{
    enumerate_graphs_by_degrees, enumerate_graphs_by_edges, exact_reconnect_law, key_half_edges,
    ExactLaw, ReconnectOracleParams,
};
use mglimit::stats::folded_normal_mean;
use mglimit::{Multigraph, Pattern};
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Context shared by all subcommands, from the global flags.
pub struct Common {
    pub seed: u64,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub budget: u64,
}

/// Configuration or usage problem; mapped to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err<T>(message: impl Into<String>) -> anyhow::Result<T> {
    Err(ConfigError(message.into()).into())
}

// Stream layout: phase | sub-experiment | replicate. Every random quantity
// is a pure function of (seed, phase, sub, replicate), so results do not
// depend on worker scheduling.
const PHASE_VERIFY: u64 = 0;
const PHASE_STATIC_GRAPHS: u64 = 1;
const PHASE_DYNAMICS: u64 = 2;
const PHASE_PATHS: u64 = 3;
const PHASE_STATIC_LIMIT: u64 = 4;
const PHASE_DYNAMICS_LIMIT: u64 = 5;

fn stream_rng(seed: u64, phase: u64, sub: u64, replicate: u64) -> ChaCha8Rng {
    debug_assert!(sub < 1 << 16 && replicate < 1 << 32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(phase << 48 | sub << 32 | replicate);
    rng
}

fn thread_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool")
}

fn require_sorted(times: &[f64]) -> anyhow::Result<()> {
    if times.windows(2).any(|w| w[0] > w[1]) {
        return config_err("observation times must be sorted ascending");
    }
    Ok(())
}

/// A named two-vertex or one-vertex probe with its marginal statistics on
/// both the graph and the kernel side.
#[derive(Clone, Copy)]
enum PatternSpec {
    /// Two vertices joined by exactly `r` edges.
    Pair(u32),
    /// One vertex carrying exactly `r` loops.
    Loops(u32),
}

impl PatternSpec {
    fn parse(name: &str) -> anyhow::Result<PatternSpec> {
        if let Some(r) = name.strip_prefix("K2_") {
            if let Ok(r) = r.parse() {
                return Ok(PatternSpec::Pair(r));
            }
        } else if let Some(r) = name.strip_prefix('L') {
            if let Ok(r) = r.parse() {
                return Ok(PatternSpec::Loops(r));
            }
        }
        config_err(format!("unknown pattern {name:?}; use K2_<r> or L<r>"))
    }

    fn k(self) -> usize {
        match self {
            PatternSpec::Pair(_) => 2,
            PatternSpec::Loops(_) => 1,
        }
    }

    fn to_pattern(self) -> Pattern {
        match self {
            PatternSpec::Pair(r) => Pattern::pair(r),
            PatternSpec::Loops(r) => Pattern::loops(r),
        }
    }

    /// Exact share of cells (pairs) or vertices (loops) at multiplicity
    /// exactly r; the graph-side estimand of the static experiment.
    fn graph_marginal(self, g: &Multigraph) -> f64 {
        match self {
            PatternSpec::Pair(r) => exact::to_f64(&pair_multiplicity(g, r)),
            PatternSpec::Loops(r) => exact::to_f64(&loop_multiplicity(g, r)),
        }
    }

    /// Closed-form limit under the constant kernel at density c.
    fn degenerate_limit(self, c: f64) -> f64 {
        match self {
            PatternSpec::Pair(r) => poisson_pmf(r, c),
            PatternSpec::Loops(r) => poisson_pmf(r, c / 2.0),
        }
    }

    fn kernel_marginal_mc(
        self,
        kernel: &impl mglimit::multigraphon::Multigraphon,
        n_samples: u64,
        rng: &mut ChaCha8Rng,
    ) -> Estimate {
        match self {
            PatternSpec::Pair(r) => pair_multiplicity_mc(kernel, r, n_samples, rng),
            PatternSpec::Loops(r) => loop_multiplicity_mc(kernel, r, n_samples, rng),
        }
    }
}

fn parse_patterns(names: &[String]) -> anyhow::Result<Vec<PatternSpec>> {
    names.iter().map(|s| PatternSpec::parse(s)).collect()
}

// ---------------------------------------------------------------------------
// verify

const ALL_CHECKS: [&str; 6] = [
    "cm-closed-forms",
    "growth-factorization",
    "nb-conditional",
    "reconnect-dp",
    "cm-sampler-tv",
    "growth-sampler-tv",
];

pub fn run_verify(cfg: &VerifyConfig, common: &Common, corrupt: bool) -> anyhow::Result<bool> {
    let names: Vec<String> =
        cfg.checks.clone().unwrap_or_else(|| ALL_CHECKS.iter().map(|s| s.to_string()).collect());
    for name in &names {
        if !ALL_CHECKS.contains(&name.as_str()) {
            return config_err(format!("unknown verify check {name:?}"));
        }
    }
    let results: Vec<CheckResult> = thread_pool(common.workers).install(|| {
        names
            .par_iter()
            .map(|name| {
                // The sub-stream is the canonical index, so a subset config
                // reproduces the full run's numbers check for check.
                let idx = ALL_CHECKS.iter().position(|c| c == name).unwrap() as u64;
                let (tolerance, mut observed) = run_check(name, common.seed, idx);
                if corrupt && idx == 0 {
                    // Test hook: simulate a regression in a closed form.
                    observed += 1e-3;
                }
                CheckResult {
                    check: name.clone(),
                    tolerance,
                    observed,
                    pass: observed <= tolerance,
                }
            })
            .collect()
    });
    emit_verify_report(&common.out_dir, &results)
}

fn run_check(name: &str, seed: u64, idx: u64) -> (f64, f64) {
    match name {
        "cm-closed-forms" => (0.0, check_cm_closed_forms()),
        "growth-factorization" => (0.0, check_growth_factorization()),
        "nb-conditional" => (0.0, check_nb_conditional()),
        "reconnect-dp" => (0.0, check_reconnect_dp()),
        "cm-sampler-tv" => (0.01, check_cm_sampler_tv(stream_rng(seed, PHASE_VERIFY, idx, 0))),
        "growth-sampler-tv" => {
            (0.01, check_growth_sampler_tv(stream_rng(seed, PHASE_VERIFY, idx, 0)))
        }
        _ => unreachable!("check names are validated before dispatch"),
    }
}

fn rational_dev(p: &BigRational, num: i64, den: i64) -> f64 {
    exact::to_f64(&(p - exact::ratio(num, den)).abs())
}

/// Hand-checked pairing probabilities plus total mass over every enumerable
/// small degree sequence. Exact arithmetic: any nonzero deviation fails.
fn check_cm_closed_forms() -> f64 {
    let mut worst = 0.0f64;
    let d = DegreeSequence::new(vec![1, 1]);
    let single = Multigraph::from_edge_list(2, &[(0, 1)]);
    worst = worst.max(rational_dev(&cm_prob(&single, &d).unwrap(), 1, 1));
    let d = DegreeSequence::new(vec![2, 2]);
    let double = Multigraph::from_edge_list(2, &[(0, 1), (0, 1)]);
    let loops = Multigraph::from_edge_list(2, &[(0, 0), (1, 1)]);
    worst = worst.max(rational_dev(&cm_prob(&double, &d).unwrap(), 2, 3));
    worst = worst.max(rational_dev(&cm_prob(&loops, &d).unwrap(), 1, 3));
    for degrees in
        [vec![2], vec![4], vec![1, 1], vec![2, 2], vec![3, 1], vec![3, 1, 2], vec![2, 2, 2]]
    {
        let d = DegreeSequence::new(degrees);
        let mut mass = BigRational::new(0.into(), 1.into());
        for g in enumerate_graphs_by_degrees(d.degrees()).unwrap() {
            mass += cm_prob(&g, &d).unwrap();
        }
        worst = worst.max(exact::to_f64(&(mass - BigRational::one()).abs()));
    }
    worst
}

/// Growth probability = degree probability x pairing probability, plus
/// total mass one, on every enumerable instance.
fn check_growth_factorization() -> f64 {
    let mut worst = 0.0f64;
    for n in 1..=3usize {
        for m in 0..=2u64 {
            for (num, den) in [(1i64, 2i64), (1, 1), (2, 1)] {
                let theta = exact::ratio(num, den);
                let mut mass = BigRational::new(0.into(), 1.into());
                for g in enumerate_graphs_by_edges(n, m).unwrap() {
                    let p = growth_graph_prob(&g, &theta);
                    let d = DegreeSequence::new(g.degrees().to_vec());
                    let product =
                        growth_degree_prob(&d, &theta).unwrap() * cm_prob(&g, &d).unwrap();
                    worst = worst.max(exact::to_f64(&(&p - product).abs()));
                    mass += p;
                }
                worst = worst.max(exact::to_f64(&(mass - BigRational::one()).abs()));
            }
        }
    }
    worst
}

/// The conditioned independent-marks law coincides with the closed-form
/// degree law.
fn check_nb_conditional() -> f64 {
    let mut worst = 0.0f64;
    for n in 2..=3usize {
        for m in 1..=2u64 {
            for (num, den) in [(1i64, 2i64), (1, 1)] {
                let theta = exact::ratio(num, den);
                let law = nb_conditional_degree_law(n, m, &theta, 1_000_000).unwrap();
                let mut mass = BigRational::new(0.into(), 1.into());
                for (degrees, p) in law {
                    let d = DegreeSequence::new(degrees);
                    let q = growth_degree_prob(&d, &theta).unwrap();
                    worst = worst.max(exact::to_f64(&(&p - q).abs()));
                    mass += p;
                }
                worst = worst.max(exact::to_f64(&(mass - BigRational::one()).abs()));
            }
        }
    }
    worst
}

/// Every conditional-on-count slice of the exact chain law equals the
/// growth law with that many edges, with zero escaped mass at this cap.
fn check_reconnect_dp() -> f64 {
    let params = ReconnectOracleParams {
        n: 2,
        theta: exact::ratio(1, 1),
        p1: exact::ratio(1, 2),
        p2: exact::ratio(1, 2),
        a: exact::ratio(1, 2),
        rho0: exact::ratio(1, 1),
    };
    let m = 4;
    let chain = exact_reconnect_law(&params, m, 4 + 2 * m).unwrap();
    let mut worst = exact::to_f64(&chain.escaped);
    let counts: std::collections::BTreeSet<u64> =
        chain.law.atoms().map(|(key, _)| key_half_edges(2, key)).collect();
    for l in counts {
        let slice = chain.law.conditioned(|key| key_half_edges(2, key) == l);
        let mut growth_law = ExactLaw::new();
        for g in enumerate_graphs_by_edges(2, l / 2).unwrap() {
            growth_law.add_mass(g.canonical_key(), growth_graph_prob(&g, &params.theta));
        }
        worst = worst.max(exact::to_f64(&slice.tv(&growth_law)));
    }
    worst
}

fn check_cm_sampler_tv(mut rng: ChaCha8Rng) -> f64 {
    let d = DegreeSequence::new(vec![2, 2]);
    let mut law = ExactLaw::new();
    for g in enumerate_graphs_by_degrees(d.degrees()).unwrap() {
        law.add_mass(g.canonical_key(), cm_prob(&g, &d).unwrap());
    }
    let draws = 100_000u64;
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for _ in 0..draws {
        let g = sample_cm(&d, &mut rng).unwrap();
        *counts.entry(g.canonical_key()).or_insert(0) += 1;
    }
    law.tv_vs_counts(&counts, draws)
}

fn check_growth_sampler_tv(mut rng: ChaCha8Rng) -> f64 {
    let theta = exact::ratio(1, 1);
    let mut law = ExactLaw::new();
    for g in enumerate_graphs_by_edges(2, 2).unwrap() {
        law.add_mass(g.canonical_key(), growth_graph_prob(&g, &theta));
    }
    let params = GrowthParams::new(2, 1.0, 2);
    let draws = 100_000u64;
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for _ in 0..draws {
        let g = grow(&params, None, &mut rng);
        *counts.entry(g.canonical_key()).or_insert(0) += 1;
    }
    law.tv_vs_counts(&counts, draws)
}

// ---------------------------------------------------------------------------
// static-limit

enum StaticModel {
    Regular { c: f64 },
    Growth { theta: f64, coeff: f64 },
}

pub fn run_static_limit(cfg: &StaticLimitConfig, common: &Common) -> anyhow::Result<bool> {
    let specs = parse_patterns(&cfg.patterns)?;
    let model = match cfg.model.as_str() {
        "regular" => {
            if !(cfg.c > 0.0 && cfg.c.is_finite()) {
                return config_err("regular model needs c > 0");
            }
            StaticModel::Regular { c: cfg.c }
        }
        "growth" => {
            if !(cfg.theta > 0.0 && cfg.coeff > 0.0) {
                return config_err("growth model needs theta > 0 and coeff > 0");
            }
            StaticModel::Growth { theta: cfg.theta, coeff: cfg.coeff }
        }
        other => return config_err(format!("unknown model {other:?}; use regular or growth")),
    };
    if cfg.replicates == 0 {
        return config_err("need at least one replicate");
    }
    let pool = thread_pool(common.workers);
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (n_idx, &n) in cfg.ns.iter().enumerate() {
        if n == 0 {
            return config_err("vertex counts must be positive");
        }
        let stats: Vec<Vec<f64>> = pool.install(|| {
            (0..cfg.replicates)
                .into_par_iter()
                .map(|rep| {
                    let mut rng =
                        stream_rng(common.seed, PHASE_STATIC_GRAPHS, n_idx as u64, rep as u64);
                    let g = match model {
                        StaticModel::Regular { c } => {
                            let mut d = vec![(c * n as f64).floor() as u64; n];
                            if d.iter().sum::<u64>() % 2 == 1 {
                                d[n - 1] += 1;
                            }
                            sample_cm(&DegreeSequence::new(d), &mut rng).expect("even total")
                        }
                        StaticModel::Growth { theta, coeff } => {
                            let m = (coeff * (n * n) as f64).floor() as u64;
                            grow(&GrowthParams::new(n, theta, m), None, &mut rng)
                        }
                    };
                    specs.iter().map(|s| s.graph_marginal(&g)).collect()
                })
                .collect()
        });
        for (p_idx, spec) in specs.iter().enumerate() {
            // Patterns needing more vertices than the graph has are 0 by
            // the injective convention.
            let (empirical, stderr) = if spec.k() > n {
                (0.0, 0.0)
            } else {
                let mut acc = RunningMean::new();
                for rep in &stats {
                    acc.push(rep[p_idx]);
                }
                let est = acc.estimate();
                (est.value, est.stderr)
            };
            let (limit, limit_stderr) = match model {
                StaticModel::Regular { c } => (spec.degenerate_limit(c), 0.0),
                StaticModel::Growth { theta, coeff } => {
                    let m = (coeff * (n * n) as f64).floor() as u64;
                    let y = 2.0 * m as f64 / (n * n) as f64;
                    let kernel = static_limit_kernel(y, theta);
                    let mut rng =
                        stream_rng(common.seed, PHASE_STATIC_LIMIT, n_idx as u64, p_idx as u64);
                    let est = spec.kernel_marginal_mc(&kernel, cfg.kernel_samples, &mut rng);
                    (est.value, est.stderr)
                }
            };
            rows.push(vec![
                cfg.model.clone(),
                n.to_string(),
                cfg.patterns[p_idx].clone(),
                common.seed.to_string(),
                cfg.replicates.to_string(),
                fmt_f64(empirical),
                fmt_f64(stderr),
                fmt_f64(limit),
                fmt_f64(limit_stderr),
                fmt_f64((empirical - limit).abs()),
            ]);
        }
    }
    let path = write_csv(
        &common.out_dir,
        "static_limit.csv",
        &[
            "model",
            "n",
            "pattern",
            "seed",
            "replicates",
            "empirical",
            "stderr",
            "limit",
            "limit_stderr",
            "gap",
        ],
        &rows,
    )?;
    println!("static-limit: {} rows -> {}", rows.len(), path.display());
    Ok(true)
}

// ---------------------------------------------------------------------------
// dynamics

pub fn run_dynamics(
    cfg: &DynamicsConfig,
    common: &Common,
    unsafe_regime: bool,
) -> anyhow::Result<bool> {
    if !unsafe_regime && !(cfg.p1 == cfg.p2 && cfg.p1 > 0.0) {
        return config_err(
            "dynamics is calibrated for p1 = p2 > 0; pass --unsafe-regime to smoke-test \
             other regimes",
        );
    }
    require_sorted(&cfg.times)?;
    let specs = parse_patterns(&cfg.patterns)?;
    let patterns: Vec<Pattern> = specs.iter().map(|s| s.to_pattern()).collect();
    if cfg.n_inj == 0 {
        return config_err("n_inj must be positive");
    }
    let params = ReconnectParams {
        n: cfg.n,
        theta: cfg.theta,
        p1: cfg.p1,
        p2: cfg.p2,
        a: cfg.a,
        rho0: cfg.rho0,
        seed: common.seed,
    };
    if let Err(e) = params.validate() {
        return config_err(e.to_string());
    }
    let pool = thread_pool(common.workers);
    let trajectories = pool
        .install(|| {
            (0..cfg.replicates)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = stream_rng(common.seed, PHASE_DYNAMICS, 0, rep as u64);
                    run_and_observe(&params, &cfg.times, &patterns, cfg.n_inj, &mut rng)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(|e| ConfigError(e.to_string()))?;

    // One row per (replicate, time, pattern), in that order.
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (rep, traj) in trajectories.iter().enumerate() {
        for obs in &traj.observations {
            for (p_idx, po) in obs.per_pattern.iter().enumerate() {
                let (erased, erased_stderr) = match &po.erased_inj {
                    Some(e) => (fmt_f64(e.value), fmt_f64(e.stderr)),
                    None => (String::new(), String::new()),
                };
                rows.push(vec![
                    common.seed.to_string(),
                    rep.to_string(),
                    fmt_f64(obs.time),
                    obs.step_index.to_string(),
                    fmt_f64(obs.y),
                    cfg.patterns[p_idx].clone(),
                    fmt_f64(po.ind.value),
                    fmt_f64(po.ind.stderr),
                    fmt_f64(po.inj.value),
                    fmt_f64(po.inj.stderr),
                    erased,
                    erased_stderr,
                ]);
            }
        }
    }
    let traj_path = write_csv(
        &common.out_dir,
        "trajectories.csv",
        &[
            "seed",
            "replicate",
            "time",
            "step_index",
            "y",
            "pattern",
            "ind",
            "ind_stderr",
            "inj",
            "inj_stderr",
            "erased_inj",
            "erased_inj_stderr",
        ],
        &rows,
    )?;

    let limit_params = LimitParams::new(cfg.theta, cfg.a, cfg.rho0)
        .with_diffusion_scale(cfg.diffusion_scale);
    let mut summary: Vec<Vec<String>> = Vec::new();
    for (t_idx, &s) in cfg.times.iter().enumerate() {
        for (p_idx, f) in patterns.iter().enumerate() {
            let mut ind = RunningMean::new();
            let mut y = RunningMean::new();
            for traj in &trajectories {
                let obs = &traj.observations[t_idx];
                ind.push(obs.per_pattern[p_idx].ind.value);
                y.push(obs.y);
            }
            let est = ind.estimate();
            let limit = expected_ind_density_at_time(
                f,
                s,
                &limit_params,
                cfg.n_outer,
                cfg.n_inner,
                &mut stream_rng(common.seed, PHASE_DYNAMICS_LIMIT, t_idx as u64, p_idx as u64),
            );
            let sigma = cfg.diffusion_scale * s.sqrt();
            let y_ref = if sigma > 0.0 {
                folded_normal_mean(cfg.rho0 - cfg.a, sigma, cfg.a)
            } else {
                cfg.rho0
            };
            summary.push(vec![
                common.seed.to_string(),
                cfg.replicates.to_string(),
                fmt_f64(s),
                cfg.patterns[p_idx].clone(),
                fmt_f64(est.value),
                fmt_f64(est.stderr),
                fmt_f64(limit.value),
                fmt_f64(limit.stderr),
                fmt_f64((est.value - limit.value).abs()),
                fmt_f64(y.estimate().value),
                fmt_f64(y.estimate().stderr),
                fmt_f64(y_ref),
            ]);
        }
    }
    let summary_path = write_csv(
        &common.out_dir,
        "summary.csv",
        &[
            "seed",
            "replicates",
            "time",
            "pattern",
            "empirical",
            "stderr",
            "limit",
            "limit_stderr",
            "gap",
            "y_mean",
            "y_stderr",
            "y_ref",
        ],
        &summary,
    )?;
    println!(
        "dynamics: {} trajectory rows -> {}; {} summary rows -> {}",
        rows.len(),
        traj_path.display(),
        summary.len(),
        summary_path.display()
    );
    Ok(true)
}

// ---------------------------------------------------------------------------
// paths

pub fn run_paths(cfg: &PathsConfig, common: &Common) -> anyhow::Result<bool> {
    if cfg.p1 != cfg.p2 {
        return config_err("fast path mode is only valid for p1 = p2");
    }
    require_sorted(&cfg.times)?;
    // The count walk never looks at theta; any valid value works.
    let params = ReconnectParams {
        n: cfg.n,
        theta: 1.0,
        p1: cfg.p1,
        p2: cfg.p2,
        a: cfg.a,
        rho0: cfg.rho0,
        seed: common.seed,
    };
    if let Err(e) = params.validate() {
        return config_err(e.to_string());
    }
    let mut steps = Vec::with_capacity(cfg.times.len());
    for &s in &cfg.times {
        match step_index_for_time(cfg.n, cfg.p1, s) {
            Ok(m) => steps.push(m),
            Err(e) => return config_err(e.to_string()),
        }
    }
    let pool = thread_pool(common.workers);
    let paths = pool
        .install(|| {
            (0..cfg.replicates)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = stream_rng(common.seed, PHASE_PATHS, 0, rep as u64);
                    sample_l_path_fast(&params, &steps, &mut rng)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(|e| ConfigError(e.to_string()))?;
    let n_sq = (cfg.n * cfg.n) as f64;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (rep, path) in paths.iter().enumerate() {
        for (t_idx, &l) in path.iter().enumerate() {
            rows.push(vec![
                common.seed.to_string(),
                rep.to_string(),
                fmt_f64(cfg.times[t_idx]),
                fmt_f64(l as f64 / n_sq),
            ]);
        }
    }
    let path = write_csv(&common.out_dir, "paths.csv", &["seed", "replicate", "time", "y"], &rows)?;
    println!("paths: {} rows -> {}", rows.len(), path.display());
    Ok(true)
}

// ---------------------------------------------------------------------------
// dist

pub fn run_dist(
    file_a: &Path,
    file_b: &Path,
    i_max: u32,
    r_max: Option<u32>,
    common: &Common,
) -> anyhow::Result<bool> {
    let read = |p: &Path| -> anyhow::Result<Multigraph> {
        let text = std::fs::read_to_string(p)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", p.display())))?;
        Multigraph::parse_text(&text)
            .map_err(|e| ConfigError(format!("{}: {e}", p.display())).into())
    };
    let g1 = read(file_a)?;
    let g2 = read(file_b)?;
    let d = ms_distance_graphs(&g1, &g2, i_max, r_max, common.budget)
        .map_err(|e| ConfigError(e.to_string()))?;
    println!(
        "{}",
        serde_json::json!({
            "value": d.value,
            "truncation_bound": d.truncation_bound,
        })
    );
    Ok(true)
}
