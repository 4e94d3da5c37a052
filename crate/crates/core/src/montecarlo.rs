//! Trial execution, distance sweeps and empirical statistics.
//!
//! Trials are independent: trial `i` draws from the stream seeded by
//! `trial_seed(master_seed, i)` and every requested strategy is evaluated on
//! that same draw. Results are collected by trial index, so the worker
//! count never changes the output.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::propagation::LinkSet;
use crate::scenario::{sample_trial, ScenarioConfig};
use crate::strategies::{evaluate, StrategyKind};

pub const DEFAULT_TRIALS: usize = 10_000;

/// Spectral efficiency of each strategy in one trial.
pub type TrialOutcome = BTreeMap<StrategyKind, f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base_config: ScenarioConfig,
    pub distances_m: Vec<f64>,
    pub strategies: Vec<StrategyKind>,
    pub trials_per_point: usize,
}

impl SweepSpec {
    pub fn new(
        base_config: ScenarioConfig,
        distances_m: Vec<f64>,
        strategies: impl IntoIterator<Item = StrategyKind>,
        trials_per_point: usize,
    ) -> Result<Self> {
        let mut strategies: Vec<StrategyKind> = strategies.into_iter().collect();
        strategies.sort();
        strategies.dedup();
        let spec = Self {
            base_config,
            distances_m,
            strategies,
            trials_per_point,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.base_config.validate()?;
        if self.distances_m.is_empty() {
            return Err(Error::Config("sweep needs at least one distance".into()));
        }
        for &d in &self.distances_m {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::Domain {
                    name: "distance_m",
                    expected: "finite and > 0",
                    value: d,
                });
            }
        }
        if self.distances_m.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "sweep distances must be strictly increasing".into(),
            ));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("no strategies selected".into()));
        }
        if self.trials_per_point == 0 {
            return Err(Error::Config("trials_per_point must be at least 1".into()));
        }
        Ok(())
    }
}

/// Evaluates every strategy in `strategies` on trial `trial_index`.
pub fn run_trial(
    config: &ScenarioConfig,
    trial_index: u64,
    strategies: &[StrategyKind],
) -> Result<TrialOutcome> {
    let sample = sample_trial(config, trial_index);
    let links = LinkSet::compute(&sample, config);
    strategies
        .iter()
        .map(|&kind| Ok((kind, evaluate(kind, &links)?.spectral_efficiency)))
        .collect()
}

/// Number of worker threads used by the engine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Workers {
    /// Rayon's global pool.
    #[default]
    Auto,
    Fixed(usize),
}

fn with_workers<T: Send>(workers: Workers, job: impl FnOnce() -> T + Send) -> T {
    match workers {
        Workers::Auto => job(),
        Workers::Fixed(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("failed to build worker pool")
            .install(job),
    }
}

/// Runs `trials` trials at one configuration and returns each strategy's
/// samples ordered by trial index.
pub fn run_point(
    config: &ScenarioConfig,
    strategies: &[StrategyKind],
    trials: usize,
) -> Result<BTreeMap<StrategyKind, Vec<f64>>> {
    config.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(config, i, strategies))
        .collect::<Result<_>>()?;
    let mut samples: BTreeMap<StrategyKind, Vec<f64>> = strategies
        .iter()
        .map(|&kind| (kind, Vec::with_capacity(trials)))
        .collect();
    for outcome in outcomes {
        for (kind, rate) in outcome {
            samples
                .get_mut(&kind)
                .expect("requested strategy")
                .push(rate);
        }
    }
    Ok(samples)
}

/// Empirical CDFs of each strategy at a single configuration.
pub fn run_cdf(
    config: &ScenarioConfig,
    strategies: &[StrategyKind],
    trials: usize,
    workers: Workers,
) -> Result<BTreeMap<StrategyKind, EmpiricalCdf>> {
    with_workers(workers, || {
        run_point(config, strategies, trials)?
            .into_iter()
            .map(|(kind, samples)| Ok((kind, EmpiricalCdf::new(samples)?)))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub strategy: StrategyKind,
    pub distance_m: f64,
    pub stats: SummaryStats,
}

/// Summary statistics per (strategy, distance), sorted by strategy then
/// distance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn get(&self, strategy: StrategyKind, distance_m: f64) -> Option<&SummaryStats> {
        self.rows
            .iter()
            .find(|row| row.strategy == strategy && row.distance_m == distance_m)
            .map(|row| &row.stats)
    }

    /// `(distance, stats)` of one strategy in increasing distance.
    pub fn series(&self, strategy: StrategyKind) -> Vec<(f64, &SummaryStats)> {
        self.rows
            .iter()
            .filter(|row| row.strategy == strategy)
            .map(|row| (row.distance_m, &row.stats))
            .collect()
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    run_sweep_with(spec, Workers::Auto)
}

pub fn run_sweep_with(spec: &SweepSpec, workers: Workers) -> Result<SweepTable> {
    spec.validate()?;
    with_workers(workers, || {
        let mut rows = Vec::new();
        for &distance in &spec.distances_m {
            let config = spec.base_config.at_distance(distance);
            let samples = run_point(&config, &spec.strategies, spec.trials_per_point)?;
            for (strategy, values) in samples {
                rows.push(SweepRow {
                    strategy,
                    distance_m: distance,
                    stats: SummaryStats::from_samples(&values)?,
                });
            }
        }
        rows.sort_by(|a, b| {
            a.strategy
                .cmp(&b.strategy)
                .then(a.distance_m.total_cmp(&b.distance_m))
        });
        Ok(SweepTable { rows })
    })
}

/// Sorted-sample empirical CDF, `F(x) = #{samples <= x} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        if let Some(&bad) = samples.iter().find(|v| v.is_nan()) {
            return Err(Error::Domain {
                name: "sample",
                expected: "not NaN",
                value: bad,
            });
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= x);
        count as f64 / self.n() as f64
    }

    /// Nearest-rank percentile: the sample at 1-based rank `ceil(p n / 100)`,
    /// clamped to `[1, n]`.
    pub fn percentile(&self, p: f64) -> Result<f64> {
        if !(0.0..=100.0).contains(&p) {
            return Err(Error::Domain {
                name: "percentile",
                expected: "within [0, 100]",
                value: p,
            });
        }
        let n = self.n();
        let rank = ((p * n as f64 / 100.0).ceil() as usize).clamp(1, n);
        Ok(self.sorted[rank - 1])
    }

    /// `(sample, F(sample))` for each sorted sample.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.sorted.iter().map(move |&x| (x, self.eval(x)))
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.n() as f64
    }
}

pub fn empirical_cdf(samples: &[f64]) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(samples.to_vec())
}

pub fn percentile(cdf: &EmpiricalCdf, p: f64) -> Result<f64> {
    cdf.percentile(p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub p10: f64,
    pub p50: f64,
    pub p90: f64,
    pub spread: f64,
}

impl SummaryStats {
    /// Samples must be in trial order for the mean to be reproducible bit
    /// for bit.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let cdf = empirical_cdf(samples)?;
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let p10 = cdf.percentile(10.0)?;
        let p50 = cdf.percentile(50.0)?;
        let p90 = cdf.percentile(90.0)?;
        Ok(Self {
            mean,
            p10,
            p50,
            p90,
            spread: p90 - p10,
        })
    }

    /// `(p90 - p10) / p50`, the spread relative to the median.
    pub fn normalized_spread(&self) -> f64 {
        self.spread / self.p50
    }
}
