//! Experiment configuration: one optional TOML file with a table per
//! subcommand. Missing tables and fields fall back to the shipped desk-scale
//! defaults, so every command runs without a config file.

use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub static_limit: StaticLimitConfig,
    #[serde(default)]
    pub dynamics: DynamicsConfig,
    #[serde(default)]
    pub paths: PathsConfig,
}

impl Config {
    /// Load from the given file, or all defaults when no file is named.
    pub fn load(path: Option<&Path>) -> Result<Config, String> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Check names to run; unknown names are a configuration error.
    pub checks: Option<Vec<String>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { checks: None }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaticLimitConfig {
    /// "regular" (degrees floor(c n)) or "growth" (floor(coeff n^2) edges).
    pub model: String,
    pub c: f64,
    pub theta: f64,
    pub coeff: f64,
    pub ns: Vec<usize>,
    pub patterns: Vec<String>,
    pub replicates: u32,
    /// Monte Carlo sample count for kernel-side reference values.
    pub kernel_samples: u64,
}

impl Default for StaticLimitConfig {
    fn default() -> Self {
        StaticLimitConfig {
            model: "regular".into(),
            c: 0.5,
            theta: 1.0,
            coeff: 0.4,
            ns: vec![100, 200, 400],
            patterns: vec!["K2_0".into(), "K2_1".into(), "K2_2".into(), "L1".into()],
            replicates: 400,
            kernel_samples: 2_000_000,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsConfig {
    pub n: usize,
    pub theta: f64,
    pub p1: f64,
    pub p2: f64,
    pub a: f64,
    pub rho0: f64,
    pub times: Vec<f64>,
    pub patterns: Vec<String>,
    pub replicates: u32,
    /// Injection samples per density estimate.
    pub n_inj: u64,
    /// Outer (path) and inner (mark) samples for the limit reference.
    pub n_outer: u64,
    pub n_inner: u64,
    /// Diffusion coefficient of the reference path; the default 2*sqrt(2)
    /// matches the chain's per-step variance at the n^4/p1 time scale.
    pub diffusion_scale: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            n: 40,
            theta: 1.0,
            p1: 0.3,
            p2: 0.3,
            a: 0.2,
            rho0: 0.5,
            times: vec![0.25, 1.0],
            patterns: vec!["K2_0".into(), "K2_1".into()],
            replicates: 200,
            n_inj: 50_000,
            n_outer: 2000,
            n_inner: 1000,
            diffusion_scale: 2.0 * std::f64::consts::SQRT_2,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsConfig {
    pub n: usize,
    pub p1: f64,
    pub p2: f64,
    pub a: f64,
    pub rho0: f64,
    pub times: Vec<f64>,
    pub replicates: u32,
}

impl Default for PathsConfig {
    fn default() -> Self {
        PathsConfig {
            n: 20,
            p1: 0.3,
            p2: 0.3,
            a: 0.2,
            rho0: 0.5,
            times: vec![1.0],
            replicates: 2000,
        }
    }
}
