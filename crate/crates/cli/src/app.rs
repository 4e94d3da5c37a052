//! Command-line surface of the `relaysim` binary.

use std::io::{self, Write};
use std::path::PathBuf;

use clap::Parser;
use relaysim::{run_cdf, run_sweep_with, StrategyKind, Workers};
use thiserror::Error;

use crate::output::{emit_csv, write_results, Results};
use crate::settings::{
    parse_config, parse_strategies, ConfigError, Experiment, Overrides, RunMode,
};

#[derive(Debug, Parser)]
#[command(
    name = "relaysim",
    version,
    allow_negative_numbers = true,
    about = "Monte Carlo spectral-efficiency sweeps and CDFs for relaying strategies"
)]
pub struct Args {
    /// Experiment type
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<RunMode>,

    /// End-to-end distance in metres (cdf mode)
    #[arg(long)]
    pub distance: Option<f64>,

    /// First sweep distance in metres
    #[arg(long)]
    pub lmin: Option<f64>,

    /// Last sweep distance in metres
    #[arg(long)]
    pub lmax: Option<f64>,

    /// Sweep step in metres
    #[arg(long)]
    pub lstep: Option<f64>,

    /// Trials per distance
    #[arg(long)]
    pub trials: Option<usize>,

    /// Master seed for the per-trial streams
    #[arg(long)]
    pub seed: Option<u64>,

    /// Block the source-destination link
    #[arg(long)]
    pub blocked_direct: bool,

    /// Comma-separated strategy names
    #[arg(long, value_parser = parse_strategy_list)]
    pub strategies: Option<StrategyList>,

    /// `key = value` config file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Print the resolved configuration and exit
    #[arg(long)]
    pub dump_config: bool,

    /// Worker threads (default: one per core); does not change results
    #[arg(long)]
    pub workers: Option<usize>,
}

fn parse_mode(s: &str) -> Result<RunMode, String> {
    s.parse()
}

/// Comma-separated strategies given as one flag value.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyList(pub Vec<StrategyKind>);

fn parse_strategy_list(s: &str) -> Result<StrategyList, String> {
    parse_strategies(s).map(StrategyList)
}

impl Args {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            mode: self.mode,
            distance_m: self.distance,
            lmin: self.lmin,
            lmax: self.lmax,
            lstep: self.lstep,
            trials: self.trials,
            seed: self.seed,
            blocked_direct: self.blocked_direct,
            strategies: self.strategies.as_ref().map(|list| list.0.clone()),
        }
    }

    pub fn workers(&self) -> Workers {
        self.workers.map_or(Workers::Auto, Workers::Fixed)
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation failed: {0}")]
    Simulation(#[from] relaysim::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Simulation(_) => 3,
            RunError::Output { .. } => 4,
        }
    }
}

/// Runs the experiment described by `experiment`.
pub fn execute(experiment: &Experiment, workers: Workers) -> Result<Results, relaysim::Error> {
    let spec = &experiment.spec;
    match experiment.mode {
        RunMode::Sweep => Ok(Results::Sweep(run_sweep_with(spec, workers)?)),
        RunMode::Cdf => {
            let config = spec.base_config.at_distance(spec.distances_m[0]);
            let cdfs = run_cdf(&config, &spec.strategies, spec.trials_per_point, workers)?;
            Ok(Results::Cdf(cdfs))
        }
    }
}

pub fn run(args: &Args) -> Result<(), RunError> {
    let (settings, experiment) = parse_config(args.config.as_deref(), &args.overrides())?;
    if args.dump_config {
        print!("{}", settings.to_config_text());
        return Ok(());
    }
    let results = execute(&experiment, args.workers())?;
    match &args.out {
        Some(path) => emit_csv(&results, path).map_err(|source| RunError::Output {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let stdout = io::stdout();
            let mut lock = io::BufWriter::new(stdout.lock());
            write_results(&results, &mut lock)
                .and_then(|_| lock.flush())
                .map_err(|source| RunError::Output {
                    path: "stdout".into(),
                    source,
                })?;
        }
    }
    Ok(())
}
