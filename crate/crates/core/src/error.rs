use thiserror::Error;

use crate::index_set::IndexSet;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GlassError {
    #[error("exhaustive enumeration over {n} units exceeds the cap of {cap}")]
    EnumerationTooLarge { n: usize, cap: usize },

    #[error("dimension {n} exceeds the supported maximum of {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("output constraint violated: W·p vanishes for {}", format_sets(.0))]
    ConstraintViolation(Vec<IndexSet>),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("malformed family: {0}")]
    FamilyShape(String),

    #[error("{0} is not a stable set")]
    NotStable(IndexSet),

    #[error("epsilon shrank to {0:e} without making Y positive")]
    EpsilonUnderflow(f64),

    #[error("singular matrix")]
    Singular,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure (implementation bug): {0}")]
    InternalConsistency(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_sets(sets: &[IndexSet]) -> String {
    sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

pub type Result<T> = std::result::Result<T, GlassError>;
