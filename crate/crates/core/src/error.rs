use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("truncation tail {tail:.3e} exceeds tolerance {tolerance:.3e}; need dimension >= {required_dim}")]
    Truncation {
        tail: f64,
        tolerance: f64,
        required_dim: usize,
    },

    #[error("regime violated: {name} = {value:.3e} is not below {limit}")]
    Regime {
        name: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("integration failed at t = {t:.6e}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("frequency estimation failed: {0}")]
    Estimation(String),

    #[error("conditioning failed: {0}")]
    Conditioning(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
