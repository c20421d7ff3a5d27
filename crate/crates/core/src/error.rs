use thiserror::Error;

/// Errors raised by the solvers, the instance reader and the reduction builder.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A configured size gate (enumeration cap, memory budget, `max_k`,
    /// oracle length cap) would be exceeded.
    #[error("refused: {0}")]
    Sizing(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
