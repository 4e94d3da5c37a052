//! Command-line driver for `relaysim`: config parsing and CSV output.

pub mod app;
pub mod output;
pub mod settings;

pub use app::{execute, run, Args, RunError};
pub use output::{emit_csv, to_csv_string, Results, CDF_HEADER, SWEEP_HEADER};
pub use settings::{parse_config, ConfigError, Experiment, Overrides, RunMode, Settings};
