//! Monte Carlo link-level simulation of relaying strategies in a
//! smart-grid neighborhood-area network.
//!
//! A trial draws random relay and interferer positions, a ZigBee carrier and
//! Rayleigh fading for every link ([`scenario`]), turns them into per-link
//! SINRs ([`propagation`]) and maps those to the spectral efficiency of each
//! transmission strategy ([`strategies`]). [`montecarlo`] repeats trials
//! under per-trial seeds and summarizes them as distance sweeps or empirical
//! CDFs.
//!
//! ```
//! use relaysim::{run_trial, ScenarioConfig, StrategyKind};
//!
//! let config = ScenarioConfig::default();
//! let out = run_trial(&config, 0, &[StrategyKind::Direct, StrategyKind::DfSingle]).unwrap();
//! assert!(out[&StrategyKind::DfSingle] >= 0.0);
//! ```

pub mod error;
pub mod montecarlo;
pub mod propagation;
pub mod scenario;
pub mod strategies;

pub use error::{Error, Result};
pub use montecarlo::{
    empirical_cdf, percentile, run_cdf, run_point, run_sweep, run_sweep_with, run_trial,
    EmpiricalCdf, SummaryStats, SweepRow, SweepSpec, SweepTable, TrialOutcome, Workers,
    DEFAULT_TRIALS,
};
pub use propagation::{Link, LinkBudget, LinkPower, LinkSet};
pub use scenario::{
    channel_frequency, sample_positions, sample_trial, trial_rng, trial_seed, FadingModel,
    Interferer, Node, Position, ScenarioConfig, ScenarioSample,
};
pub use strategies::{RateResult, StrategyKind, TwoWayLinks};
