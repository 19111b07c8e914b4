//! Sweep configuration assembled from an optional JSON file and flags.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use lresc_core::css::CssCode;
use lresc_decode::{DecoderConfig, DecoderVariant, DegreeMode, NoiseKind};
use lresc_sim::{run, write_csv, write_json, Experiment, SimReport, DEFAULT_CYCLES, DEFAULT_TRIALS};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Every field is optional; flags take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub model: Option<NoiseKind>,
    pub degree_mode: Option<DegreeMode>,
    pub decoder: Option<DecoderVariant>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub cycles: Option<usize>,
    pub windows: Option<Vec<usize>>,
    pub p_grid: Option<Vec<f64>>,
}

impl SimConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    /// Fields set in `other` replace ours.
    pub fn overlay(self, other: SimConfig) -> Self {
        Self {
            model: other.model.or(self.model),
            degree_mode: other.degree_mode.or(self.degree_mode),
            decoder: other.decoder.or(self.decoder),
            seed: other.seed.or(self.seed),
            trials: other.trials.or(self.trials),
            cycles: other.cycles.or(self.cycles),
            windows: other.windows.or(self.windows),
            p_grid: other.p_grid.or(self.p_grid),
        }
    }

    /// One experiment per window size.
    pub fn experiments(&self) -> Result<Vec<Experiment>, CliError> {
        let p_grid = self
            .p_grid
            .clone()
            .ok_or_else(|| CliError::Usage("a p grid is required".into()))?;
        let noise = self.model.unwrap_or(NoiseKind::CodeCapacity);
        let windows = self.windows.clone().unwrap_or_else(|| vec![1]);
        if windows.is_empty() {
            return Err(CliError::Usage("window list is empty".into()));
        }
        let degree_mode = self.degree_mode.unwrap_or_default();
        windows
            .into_iter()
            .map(|w| {
                let decoder = DecoderConfig {
                    variant: self.decoder.unwrap_or(DecoderVariant::BpOsd),
                    window: w,
                    prior_mode: degree_mode,
                    ..DecoderConfig::default()
                };
                let exp = Experiment {
                    noise,
                    degree_mode,
                    decoder,
                    p_grid: p_grid.clone(),
                    trials: self.trials.unwrap_or(DEFAULT_TRIALS),
                    cycles: match noise {
                        NoiseKind::CodeCapacity => 1,
                        NoiseKind::WeightedPhenomenological => self.cycles.unwrap_or(DEFAULT_CYCLES),
                    },
                    seed: self.seed.unwrap_or(0),
                };
                exp.validate()?;
                Ok(exp)
            })
            .collect()
    }
}

/// Runs every experiment on every code and writes `report.csv` and `report.json` into `out`.
pub fn simulate(
    codes: &[CssCode],
    experiments: &[Experiment],
    threads: Option<usize>,
    out: &Path,
) -> Result<(Vec<SimReport>, PathBuf, PathBuf), CliError> {
    let mut reports = Vec::new();
    for code in codes {
        for exp in experiments {
            reports.push(run(code, exp, threads)?);
        }
    }
    std::fs::create_dir_all(out)?;
    let csv_path = out.join("report.csv");
    let json_path = out.join("report.json");
    write_csv(&reports, BufWriter::new(File::create(&csv_path)?))?;
    write_json(&reports, BufWriter::new(File::create(&json_path)?))?;
    Ok((reports, csv_path, json_path))
}
