use lresc_core::CodeError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("syndrome has length {got}, expected {expected}")]
    SyndromeLength { expected: usize, got: usize },
    #[error("syndrome is outside the column space of the check matrix")]
    InconsistentSyndrome,
    #[error("decoder output violates the syndrome on {0} checks")]
    SyndromeMismatch(usize),
    #[error("matching needs columns of weight at most two; column {column} has weight {weight}")]
    NotGraphlike { column: usize, weight: usize },
    #[error("defect on check {0} cannot reach any partner or the boundary")]
    Unmatchable(usize),
    #[error("residual has nonzero syndrome on {0} checks")]
    NonzeroResidual(usize),
    #[error("prior {value} at position {index} is outside (0, 0.5]")]
    InvalidPrior { index: usize, value: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}
