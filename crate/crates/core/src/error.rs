use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point set is empty")]
    EmptySet,

    #[error("non-finite coordinate at position {0}")]
    NonFinite(usize),

    #[error("invalid dimension {0}: must be at least 1")]
    ZeroDimension(usize),

    #[error("ragged input: row {row} has {found} columns, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },

    #[error("estimator error: {0}")]
    Estimator(String),

    #[error("all points coincide; the cone of differences is degenerate")]
    DegenerateCone,

    #[error("sets are not separated (minimal cross distance is {0})")]
    NotSeparated(f64),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("value out of floating-point range (exponent {0:.3e})")]
    Overflow(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("no neuron separates the negative set from positive point {0}")]
    NoSeparatingNeuron(usize),

    #[error("image has no zero coordinate; indicator direction is empty")]
    EmptyIndicator,

    #[error("component {index} of the {class} covering has no members")]
    EmptyComponent { class: &'static str, index: usize },

    #[error("infeasible scenario: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
