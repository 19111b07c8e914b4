use std::path::Path;

use lresc_core::classical::ClassicalCode;
use lresc_core::css::CssCode;
use serde::{Deserialize, Serialize};

use crate::{canonical_hash, CliError};

pub const BUNDLE_FORMAT: &str = "lresc-bundle/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "code", rename_all = "snake_case")]
pub enum BundlePayload {
    Css(CssCode),
    Classical(ClassicalCode),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeBundle {
    pub format: String,
    pub payload: BundlePayload,
    /// SHA-256 of the canonical JSON of `payload`.
    pub sha256: String,
}

impl CodeBundle {
    pub fn new(payload: BundlePayload) -> Result<Self, CliError> {
        Ok(Self {
            format: BUNDLE_FORMAT.into(),
            sha256: canonical_hash(&payload)?,
            payload,
        })
    }

    /// Whether the stored hash matches the payload.
    pub fn intact(&self) -> Result<bool, CliError> {
        Ok(canonical_hash(&self.payload)? == self.sha256)
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    /// Parses a bundle without checking its hash.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read bundle {}: {e}", path.display())))?;
        let b: Self = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid bundle: {e}")))?;
        if b.format != BUNDLE_FORMAT {
            return Err(CliError::Usage(format!("unknown bundle format {}", b.format)));
        }
        Ok(b)
    }

    pub fn css(&self) -> Option<&CssCode> {
        match &self.payload {
            BundlePayload::Css(c) => Some(c),
            BundlePayload::Classical(_) => None,
        }
    }
}
