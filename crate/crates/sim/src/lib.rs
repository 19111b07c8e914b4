//! Monte Carlo memory experiments: code-capacity and phenomenological
//! sweeps, statistics, break-even comparison and reproducible reports.

mod report;
mod run;

use lresc_core::CodeError;
use lresc_decode::{DecodeError, DecoderConfig, DegreeMode, NoiseKind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use report::{
    break_even, break_even_bracket, config_hash, write_csv, write_json, BreakEven, CodeSummary, PointResult,
    SimReport,
};
pub use run::{run, run_code_capacity, run_phenomenological, trial_seed};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid experiment: {0}")]
    Config(String),
    #[error("decoder fault in trial {trial} at p = {p}: {source}")]
    Decode {
        trial: u64,
        p: f64,
        #[source]
        source: DecodeError,
    },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Setup(#[from] DecodeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Desk-scale defaults.
pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_CYCLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub noise: NoiseKind,
    #[serde(default)]
    pub degree_mode: DegreeMode,
    #[serde(default)]
    pub decoder: DecoderConfig,
    pub p_grid: Vec<f64>,
    pub trials: u64,
    /// Noisy rounds per trial; ignored for code capacity.
    #[serde(default = "default_cycles")]
    pub cycles: usize,
    pub seed: u64,
}

fn default_cycles() -> usize {
    DEFAULT_CYCLES
}

impl Experiment {
    pub fn code_capacity(decoder: DecoderConfig, p_grid: Vec<f64>, trials: u64, seed: u64) -> Self {
        Self {
            noise: NoiseKind::CodeCapacity,
            degree_mode: DegreeMode::Total,
            decoder,
            p_grid,
            trials,
            cycles: 1,
            seed,
        }
    }

    pub fn phenomenological(decoder: DecoderConfig, p_grid: Vec<f64>, trials: u64, cycles: usize, seed: u64) -> Self {
        Self {
            noise: NoiseKind::WeightedPhenomenological,
            degree_mode: DegreeMode::Total,
            decoder,
            p_grid,
            trials,
            cycles,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.trials == 0 {
            return Err(SimError::Config("trials must be at least 1".into()));
        }
        if self.cycles == 0 {
            return Err(SimError::Config("cycles must be at least 1".into()));
        }
        if self.p_grid.is_empty() {
            return Err(SimError::Config("p grid is empty".into()));
        }
        if self.p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimError::Config("p grid must be strictly increasing".into()));
        }
        if self.p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(SimError::Config("p grid values must lie in [0, 1]".into()));
        }
        self.decoder.validate()?;
        Ok(())
    }

    /// Rounds simulated per trial.
    pub fn rounds(&self) -> usize {
        match self.noise {
            NoiseKind::CodeCapacity => 1,
            NoiseKind::WeightedPhenomenological => self.cycles,
        }
    }
}
