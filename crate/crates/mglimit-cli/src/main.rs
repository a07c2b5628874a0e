//! Command line harness around the mglimit library: verification checks,
//! static and dynamic limit experiments, fast path sampling, and pairwise
//! graph distances. All randomness is derived from `--seed` through fixed
//! per-task stream ids, so output is identical for any `--workers` value.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod config;
mod experiments;
mod output;

use experiments::Common;

#[derive(Parser)]
#[command(name = "mglimit", version, about = "Multigraph limit experiments")]
struct Cli {
    /// Base seed; every derived random stream is a pure function of it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (0 = number of cores). Does not affect output.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Directory for CSV and JSON reports.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// Operation budget for exact density and distance computations.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,

    /// TOML experiment configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check exact closed forms and sampler laws; write verify_report.json.
    Verify {
        /// Test hook: perturb the first check to exercise the failure path.
        #[arg(long, hide = true)]
        corrupt_formula: bool,
    },
    /// Compare static-model marginals against their kernel limits.
    StaticLimit,
    /// Run chain replicates and compare densities against the path limit.
    Dynamics {
        /// Allow p1 != p2 runs; the tabulated limit is not calibrated there.
        #[arg(long)]
        unsafe_regime: bool,
    },
    /// Sample the scaled half-edge count path in closed form (p1 = p2 only).
    Paths,
    /// Print the truncated distance between two graphs in text format.
    Dist {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Depth cutoff for the truncated sum.
        #[arg(long, default_value_t = 16)]
        i_max: u32,
        /// Multiplicity cutoff; derived from the graphs when omitted.
        #[arg(long)]
        r_max: Option<u32>,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = config::Config::load(cli.config.as_deref())
        .map_err(experiments::ConfigError)?;
    let common = Common {
        seed: cli.seed,
        workers: cli.workers,
        out_dir: cli.out_dir,
        budget: cli.budget,
    };
    match cli.command {
        Command::Verify { corrupt_formula } => {
            experiments::run_verify(&cfg.verify, &common, corrupt_formula)
        }
        Command::StaticLimit => experiments::run_static_limit(&cfg.static_limit, &common),
        Command::Dynamics { unsafe_regime } => {
            experiments::run_dynamics(&cfg.dynamics, &common, unsafe_regime)
        }
        Command::Paths => experiments::run_paths(&cfg.paths, &common),
        Command::Dist { file_a, file_b, i_max, r_max } => {
            experiments::run_dist(&file_a, &file_b, i_max, r_max, &common)
        }
    }
}

fn main() -> ExitCode {
    // clap itself exits with code 2 on usage errors.
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
