//! Recipes, content-hashed code bundles, verification transcripts and
//! simulation plumbing behind the `lresc` binary.

pub mod bundle;
pub mod recipe;
pub mod simulate;
pub mod verify;

use lresc_core::CodeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// 0 ok, 1 verification failure, 2 usage error, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) | CliError::Runtime(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::BudgetExceeded { .. } | CodeError::DimensionTooLarge(_) => CliError::Budget(e.to_string()),
            CodeError::Verification(_) => CliError::Verification(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<lresc_sim::SimError> for CliError {
    fn from(e: lresc_sim::SimError) -> Self {
        match e {
            lresc_sim::SimError::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<lresc_decode::DecodeError> for CliError {
    fn from(e: lresc_decode::DecodeError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Hex SHA-256 of the canonical (key-sorted) JSON form of a value.
pub fn canonical_hash<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    use sha2::{Digest, Sha256};
    let v = serde_json::to_value(value)?;
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(&v)?)))
}
