use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix has {rows} rows but rank {rank}")]
    RankDeficient { rows: usize, rank: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("enumeration budget exceeded: {needed} candidates > limit {limit}")]
    BudgetExceeded { needed: u128, limit: u128 },
    #[error("dimension k = {0} is too large for exhaustive distance enumeration")]
    DimensionTooLarge(usize),
    #[error("degree sequence infeasible after {0} sampling attempts")]
    InfeasibleDegrees(usize),
    #[error("missing provenance: {0}")]
    MissingProvenance(String),
    #[error("missing coordinates")]
    MissingCoordinates,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}
