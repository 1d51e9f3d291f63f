use thiserror::Error;

/// Errors surfaced by the bound computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight: {0}")]
    Weight(String),

    #[error("invalid space parameters: {0}")]
    Params(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("exponent regime not supported here: {0}")]
    Regime(String),

    #[error("operator is not compact: {0}")]
    NotCompact(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
