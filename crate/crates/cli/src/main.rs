//! `rmt`: configuration-driven driver for the random-matrix thermalization
//! model. Subcommands cover eigenvalue histograms, single-realization
//! trajectories, ensemble sweeps with analytic comparisons, the moment suite
//! and analytic oracle curves.

mod config;
mod report;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "rmt",
    about = "Random-matrix thermalization: sample GOE/GUE ensembles, evolve Tr(A rho(t)) exactly, compare against the analytic predictions",
    version
)]
struct Cli {
    /// Path to the TOML experiment configuration.
    #[arg(long, global = true, default_value = "experiment.toml")]
    config: PathBuf,

    /// Override the configured master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (defaults to the configured one).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for the realization loop (default: all cores).
    /// Results are byte-identical for any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Report format override: csv (text report) or json.
    #[arg(long, global = true)]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue histogram of the configured ensemble vs the semicircle.
    Sample {
        /// Histogram bins over [-2.1 lambda, 2.1 lambda].
        #[arg(long, default_value_t = 60)]
        bins: usize,
    },
    /// Single-realization trajectory of Tr(A rho(t)).
    Trajectory {
        /// Realization index within the seeded sweep.
        #[arg(long, default_value_t = 0)]
        realization: u64,
    },
    /// Ensemble statistics plus the enabled comparisons.
    Sweep,
    /// Low moments of U(t) with their analytic gates.
    Moments,
    /// Tabulate the analytic curves (g, g^2, correlated term, prediction).
    Oracle,
    /// Contrast the random-matrix autocorrelation with the band-profile one.
    CompareEth,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("rmt: one or more enabled comparisons failed their gate");
            ExitCode::FAILURE
        }
        Err(err) => {
            eprintln!("rmt: error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring worker threads")?;
    }
    rmt_core::init_linalg();

    let mut config = ExperimentConfig::from_path(&cli.config)?;
    if let Some(seed) = cli.seed {
        config.ensemble.master_seed = seed;
    }
    if let Some(format) = &cli.format {
        match format.as_str() {
            "csv" | "json" => config.output.format = format.clone(),
            other => anyhow::bail!("--format: expected \"csv\" or \"json\", got \"{other}\""),
        }
    }
    let out_dir = cli
        .out
        .unwrap_or_else(|| PathBuf::from(&config.output.directory));
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let outcome = match cli.command {
        Command::Sample { bins } => runner::run_sample(&config, &out_dir, bins)?,
        Command::Trajectory { realization } => {
            runner::run_trajectory(&config, &out_dir, realization)?
        }
        Command::Sweep => runner::run_sweep(&config, &out_dir)?,
        Command::Moments => runner::run_moment_suite(&config, &out_dir)?,
        Command::Oracle => runner::run_oracle(&config, &out_dir)?,
        Command::CompareEth => runner::run_compare_eth(&config, &out_dir)?,
    };

    for line in &outcome.lines {
        println!("{line}");
    }
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    Ok(outcome.pass)
}
