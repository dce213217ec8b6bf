use thiserror::Error;

/// Crate-wide error type.
///
/// `CostGuard` is split out from the input-validation variants because the
/// CLI maps it to a distinct exit code (3 instead of 2).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid degree law: {0}")]
    InvalidLaw(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cost guard: {0}")]
    CostGuard(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for cost-guard rejections (size caps), as opposed to bad input.
    pub fn is_cost_guard(&self) -> bool {
        matches!(self, Error::CostGuard(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
