//! Run settings: `key = value` config files, flag overrides and defaults.
//!
//! Resolution order is defaults, then the config file, then flags. Blank
//! lines and everything after a `#` are ignored. Unknown keys are rejected
//! with their line number.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use relaysim::{FadingModel, ScenarioConfig, StrategyKind, SweepSpec, DEFAULT_TRIALS};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMode {
    #[default]
    Sweep,
    Cdf,
}

impl RunMode {
    pub fn name(self) -> &'static str {
        match self {
            RunMode::Sweep => "sweep",
            RunMode::Cdf => "cdf",
        }
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RunMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sweep" => Ok(RunMode::Sweep),
            "cdf" => Ok(RunMode::Cdf),
            other => Err(format!("unknown mode `{other}` (expected sweep or cdf)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("invalid value for --{flag}: {reason}")]
    BadFlag { flag: &'static str, reason: String },
    #[error("{0}")]
    Invalid(#[from] relaysim::Error),
}

/// Everything that configures one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub scenario: ScenarioConfig,
    pub mode: RunMode,
    pub trials: usize,
    pub lmin: f64,
    pub lmax: f64,
    pub lstep: f64,
    pub strategies: Vec<StrategyKind>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            mode: RunMode::Sweep,
            trials: DEFAULT_TRIALS,
            lmin: 10.0,
            lmax: 100.0,
            lstep: 10.0,
            strategies: StrategyKind::ALL.to_vec(),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<RunMode>,
    pub distance_m: Option<f64>,
    pub lmin: Option<f64>,
    pub lmax: Option<f64>,
    pub lstep: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub blocked_direct: bool,
    pub strategies: Option<Vec<StrategyKind>>,
}

/// A validated experiment ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub mode: RunMode,
    pub spec: SweepSpec,
}

fn parse_num<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| e.to_string())
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("expected true or false, got `{other}`")),
    }
}

pub fn parse_strategies(value: &str) -> Result<Vec<StrategyKind>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<StrategyKind>().map_err(|e| e.to_string()))
        .collect()
}

fn parse_count_range(value: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = value
        .split_once(',')
        .ok_or_else(|| format!("expected `min,max`, got `{value}`"))?;
    Ok((parse_num(lo.trim())?, parse_num(hi.trim())?))
}

/// Splits config text into `(line number, key, value)` entries.
pub fn parse_lines(text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or(ConfigError::Syntax { line })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line });
        }
        entries.push((line, key.to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

impl Settings {
    /// Applies one `key = value` entry. Returns `Ok(false)` for unknown keys.
    fn apply(&mut self, key: &str, value: &str) -> Result<bool, String> {
        let s = &mut self.scenario;
        match key {
            "mode" => self.mode = value.parse()?,
            "tx_power_dbm" => s.tx_power_dbm = parse_num(value)?,
            "interferer_power_dbm" => s.interferer_power_dbm = parse_num(value)?,
            "antenna_gain_db" => s.antenna_gain_db = parse_num(value)?,
            "noise_power_dbm" => s.noise_power_dbm = parse_num(value)?,
            "bandwidth_hz" => s.bandwidth_hz = parse_num(value)?,
            "path_loss_coeff_db_per_decade" => s.path_loss_coeff_db_per_decade = parse_num(value)?,
            "distance_m" => s.distance_m = parse_num(value)?,
            "direct_blocked" => s.direct_blocked = parse_bool(value)?,
            "interferer_count_range" => s.interferer_count_range = parse_count_range(value)?,
            "fading" => s.fading = value.parse::<FadingModel>().map_err(|e| e.to_string())?,
            "master_seed" => s.master_seed = parse_num(value)?,
            "trials" => self.trials = parse_num(value)?,
            "lmin" => self.lmin = parse_num(value)?,
            "lmax" => self.lmax = parse_num(value)?,
            "lstep" => self.lstep = parse_num(value)?,
            "strategies" => self.strategies = parse_strategies(value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Defaults overlaid with the entries of `text`.
    pub fn from_config_text(text: &str) -> Result<Self, ConfigError> {
        let mut settings = Settings::default();
        for (line, key, value) in parse_lines(text)? {
            match settings.apply(&key, &value) {
                Ok(true) => {}
                Ok(false) => return Err(ConfigError::UnknownKey { line, key }),
                Err(reason) => return Err(ConfigError::BadValue { line, key, reason }),
            }
        }
        Ok(settings)
    }

    pub fn apply_overrides(&mut self, overrides: &Overrides) {
        if let Some(mode) = overrides.mode {
            self.mode = mode;
        }
        if let Some(d) = overrides.distance_m {
            self.scenario.distance_m = d;
        }
        if let Some(v) = overrides.lmin {
            self.lmin = v;
        }
        if let Some(v) = overrides.lmax {
            self.lmax = v;
        }
        if let Some(v) = overrides.lstep {
            self.lstep = v;
        }
        if let Some(v) = overrides.trials {
            self.trials = v;
        }
        if let Some(seed) = overrides.seed {
            self.scenario.master_seed = seed;
        }
        if overrides.blocked_direct {
            self.scenario.direct_blocked = true;
        }
        if let Some(strategies) = &overrides.strategies {
            self.strategies = strategies.clone();
        }
    }

    /// Sweep distances `lmin, lmin + lstep, ...` up to and including `lmax`.
    pub fn sweep_distances(&self) -> Result<Vec<f64>, ConfigError> {
        let bad = |flag, reason: &str| ConfigError::BadFlag {
            flag,
            reason: reason.to_string(),
        };
        if !(self.lmin.is_finite() && self.lmin > 0.0) {
            return Err(bad("lmin", "must be finite and > 0"));
        }
        if !(self.lmax.is_finite() && self.lmax >= self.lmin) {
            return Err(bad("lmax", "must be finite and >= lmin"));
        }
        if !(self.lstep.is_finite() && self.lstep > 0.0) {
            return Err(bad("lstep", "must be finite and > 0"));
        }
        // small slack so that e.g. 10..=100 step 10 includes 100
        let steps = ((self.lmax - self.lmin) / self.lstep + 1e-9).floor() as usize;
        Ok((0..=steps)
            .map(|i| self.lmin + i as f64 * self.lstep)
            .collect())
    }

    /// Validates everything and builds the experiment.
    pub fn resolve(&self) -> Result<Experiment, ConfigError> {
        self.scenario.validate()?;
        let distances = match self.mode {
            RunMode::Sweep => self.sweep_distances()?,
            RunMode::Cdf => vec![self.scenario.distance_m],
        };
        let spec = SweepSpec::new(
            self.scenario.clone(),
            distances,
            self.strategies.iter().copied(),
            self.trials,
        )?;
        Ok(Experiment {
            mode: self.mode,
            spec,
        })
    }

    /// Serializes the settings in config-file syntax.
    pub fn to_config_text(&self) -> String {
        let s = &self.scenario;
        let strategies: Vec<&str> = self.strategies.iter().map(|k| k.name()).collect();
        let lines = [
            ("mode", self.mode.to_string()),
            ("tx_power_dbm", s.tx_power_dbm.to_string()),
            ("interferer_power_dbm", s.interferer_power_dbm.to_string()),
            ("antenna_gain_db", s.antenna_gain_db.to_string()),
            ("noise_power_dbm", s.noise_power_dbm.to_string()),
            ("bandwidth_hz", s.bandwidth_hz.to_string()),
            (
                "path_loss_coeff_db_per_decade",
                s.path_loss_coeff_db_per_decade.to_string(),
            ),
            ("distance_m", s.distance_m.to_string()),
            ("direct_blocked", s.direct_blocked.to_string()),
            (
                "interferer_count_range",
                format!(
                    "{},{}",
                    s.interferer_count_range.0, s.interferer_count_range.1
                ),
            ),
            ("fading", s.fading.to_string()),
            ("master_seed", s.master_seed.to_string()),
            ("trials", self.trials.to_string()),
            ("lmin", self.lmin.to_string()),
            ("lmax", self.lmax.to_string()),
            ("lstep", self.lstep.to_string()),
            ("strategies", strategies.join(",")),
        ];
        let mut out = String::new();
        for (key, value) in lines {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        }
        out
    }
}

/// Loads `path` (if any), applies `overrides` and validates the result.
pub fn parse_config(
    path: Option<&Path>,
    overrides: &Overrides,
) -> Result<(Settings, Experiment), ConfigError> {
    let mut settings = match path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            Settings::from_config_text(&text)?
        }
        None => Settings::default(),
    };
    settings.apply_overrides(overrides);
    let experiment = settings.resolve()?;
    Ok((settings, experiment))
}
