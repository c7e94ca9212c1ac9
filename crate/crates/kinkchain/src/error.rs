use thiserror::Error;

/// Errors shared across all engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("unsupported regime: {0}")]
    Regime(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("resource budget exhausted: {0}")]
    Resource(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
