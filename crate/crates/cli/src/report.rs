//! Comparison reports and the frozen output formats.
//!
//! Every file starts with a comment header embedding the resolved
//! configuration and the master seed; floats are written with 17 significant
//! digits; all writes happen from the orchestrating thread after reduction,
//! so identical inputs produce byte-identical outputs.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use crate::config::ExperimentConfig;

/// Statistical gates used by every comparison in a report.
pub const Z_THRESHOLD: f64 = 4.0;
pub const PASS_FRACTION: f64 = 0.95;
pub const GATES_VERSION: &str = "z<=4 per point, >=95% of points per curve";

/// One compared grid point.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub t: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub prediction: f64,
    pub abs_z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSummary {
    pub max_abs_z: f64,
    pub fraction_within_threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance_scaling_slope: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub gates: String,
    pub master_seed: u64,
    pub rows: Vec<ComparisonRow>,
    pub summary: ComparisonSummary,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ComparisonReport {
    pub fn from_rows(rows: Vec<ComparisonRow>, master_seed: u64) -> Self {
        let n = rows.len().max(1) as f64;
        let max_abs_z = rows.iter().map(|r| r.abs_z).fold(0.0, f64::max);
        let within = rows.iter().filter(|r| r.abs_z <= Z_THRESHOLD).count() as f64;
        let fraction = if rows.is_empty() { 1.0 } else { within / n };
        ComparisonReport {
            gates: GATES_VERSION.into(),
            master_seed,
            rows,
            summary: ComparisonSummary {
                max_abs_z,
                fraction_within_threshold: fraction,
                variance_scaling_slope: None,
            },
            checks: Vec::new(),
            pass: fraction >= PASS_FRACTION,
        }
    }

    pub fn push_check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail,
        });
        self.pass = self.pass && pass;
    }
}

/// 17 significant digits, stable across runs.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comment header carrying the resolved config and seed.
pub fn write_header<W: Write>(mut w: W, tool: &str, config: &ExperimentConfig) -> Result<()> {
    writeln!(w, "# rmt {tool}")?;
    writeln!(w, "# gates: {GATES_VERSION}")?;
    writeln!(w, "# master_seed: {}", config.ensemble.master_seed)?;
    writeln!(w, "# config_begin")?;
    let toml = toml::to_string_pretty(config)?;
    for line in toml.lines() {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "# config_end")?;
    Ok(())
}

pub fn write_report_text<W: Write>(
    mut w: W,
    config: &ExperimentConfig,
    report: &ComparisonReport,
) -> Result<()> {
    write_header(&mut w, "report", config)?;
    writeln!(w, "t,mc_mean,mc_stderr,prediction,abs_z")?;
    for row in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(row.t),
            fmt_f64(row.mc_mean),
            fmt_f64(row.mc_stderr),
            fmt_f64(row.prediction),
            fmt_f64(row.abs_z)
        )?;
    }
    writeln!(
        w,
        "# summary max_abs_z = {}",
        fmt_f64(report.summary.max_abs_z)
    )?;
    writeln!(
        w,
        "# summary fraction_within_threshold = {}",
        fmt_f64(report.summary.fraction_within_threshold)
    )?;
    if let Some(slope) = report.summary.variance_scaling_slope {
        writeln!(w, "# summary variance_scaling_slope = {}", fmt_f64(slope))?;
    }
    for check in &report.checks {
        writeln!(
            w,
            "# check {}: {} :: {}",
            check.name,
            if check.pass { "pass" } else { "FAIL" },
            check.detail
        )?;
    }
    writeln!(
        w,
        "# verdict: {}",
        if report.pass { "pass" } else { "FAIL" }
    )?;
    Ok(())
}

pub fn write_report_json<W: Write>(
    mut w: W,
    config: &ExperimentConfig,
    report: &ComparisonReport,
) -> Result<()> {
    #[derive(Serialize)]
    struct Envelope<'a> {
        config: &'a ExperimentConfig,
        report: &'a ComparisonReport,
    }
    let text = serde_json::to_string_pretty(&Envelope { config, report })?;
    w.write_all(text.as_bytes())?;
    writeln!(w)?;
    Ok(())
}
