use thiserror::Error;

/// Errors shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("invalid scale: l = {l}, eta = {eta} (both must be at least 1)")]
    InvalidScale { l: usize, eta: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("{what} has size {size}, exceeding the exact-solver limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("cycle detected in {0}")]
    Cycle(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
