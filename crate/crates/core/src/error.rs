use thiserror::Error;

/// Errors raised by the quantum, ontology and analysis layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("probability {0} lies outside [0, 1] beyond tolerance")]
    ProbabilityOutOfRange(f64),

    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),

    #[error("ontic space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("outcome index {index} out of range for {count} outcomes")]
    OutcomeOutOfRange { index: usize, count: usize },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("unsupported setting: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate rays {first} and {second}")]
    DuplicateRay { first: usize, second: usize },

    #[error("io error: {0}")]
    Io(String),

    #[error("sampler could not produce a point in the support after {0} attempts")]
    SupportSampling(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
