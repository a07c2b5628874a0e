//! Deterministic result files: CSV tables with fixed-width float formatting
//! and a JSON verification report. Identical inputs produce identical bytes
//! regardless of worker count.

use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// 17 significant digits, enough to round-trip any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write one CSV file under `out_dir`, creating the directory if needed.
pub fn write_csv(
    out_dir: &Path,
    name: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(header)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(path)
}

/// One verification check: its tolerance, what was observed, and the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub tolerance: f64,
    pub observed: f64,
    pub pass: bool,
}

/// Write the JSON report and echo one line per check to stdout. Returns
/// whether every check passed.
pub fn emit_verify_report(out_dir: &Path, results: &[CheckResult]) -> anyhow::Result<bool> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join("verify_report.json");
    fs::write(&path, serde_json::to_string_pretty(results)?)?;
    for r in results {
        println!(
            "check {}: observed {} tolerance {} {}",
            r.check,
            fmt_f64(r.observed),
            fmt_f64(r.tolerance),
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let all = results.iter().all(|r| r.pass);
    println!(
        "verify: {}/{} checks passed -> {}",
        results.iter().filter(|r| r.pass).count(),
        results.len(),
        path.display()
    );
    Ok(all)
}
