use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate active set: {0}")]
    DegenerateActiveSet(String),

    #[error("point is not in the feasible region")]
    Infeasible,

    #[error("sink {to} is unreachable from source {from}")]
    Unreachable { from: usize, to: usize },

    #[error("graph contains a cycle")]
    Cyclic,

    #[error("line search found no decrease within {budget} trials")]
    LineSearchExhausted { budget: usize },

    #[error("power iteration did not converge within {budget} iterations")]
    NoConvergence { budget: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
