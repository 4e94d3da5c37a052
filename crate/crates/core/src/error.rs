use thiserror::Error;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("channel index {0} outside the valid range 11..=26")]
    ChannelIndex(i64),

    #[error("{name} must be {expected}, got {value}")]
    Domain {
        name: &'static str,
        expected: &'static str,
        value: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("strategy {0} is not an exchange baseline")]
    NotExchangeBaseline(&'static str),

    #[error("empirical CDF needs at least one sample")]
    EmptySamples,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Fails unless `value` is a finite, non-negative SNR.
pub(crate) fn check_snr(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && !value.is_nan() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            expected: "a non-negative SNR",
            value,
        })
    }
}
