use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Axis names or shapes do not line up between two objects.
    #[error("structural mismatch: {0}")]
    Structure(String),

    #[error("unknown axis `{0}`")]
    UnknownAxis(String),

    #[error("invalid distribution: {0}")]
    InvalidPmf(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    /// A quantity that must be nonnegative came out clearly negative.
    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Codebook allocation would exceed the configured symbol budget.
    #[error("memory cap exceeded: {0}")]
    MemoryCap(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
