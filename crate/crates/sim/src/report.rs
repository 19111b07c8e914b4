use std::io::Write;

use lresc_core::css::CssCode;
use lresc_decode::{DecoderVariant, NoiseKind};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Experiment, SimError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub name: String,
    pub n: usize,
    pub k: usize,
}

impl CodeSummary {
    pub fn of(code: &CssCode) -> Self {
        Self {
            name: code.name.clone(),
            n: code.n(),
            k: code.k(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    /// Failures per trial.
    pub failure_rate: f64,
    /// `sqrt(f (1 - f) / trials)`.
    pub std_error: f64,
    /// `1 - (1 - f)^(1 / cycles)`.
    pub per_cycle_rate: f64,
    pub per_cycle_std_error: f64,
    pub cycles: usize,
    /// Cycles completed before the first flagged failure, summed over trials.
    pub surviving_cycles: u64,
    pub wall_time_s: f64,
}

impl PointResult {
    pub fn new(p: f64, trials: u64, failures: u64, cycles: usize, surviving_cycles: u64, wall_time_s: f64) -> Self {
        let f = failures as f64 / trials as f64;
        let std_error = (f * (1.0 - f) / trials as f64).sqrt();
        let inv = 1.0 / cycles as f64;
        let per_cycle_rate = 1.0 - (1.0 - f).powf(inv);
        let per_cycle_std_error = if f < 1.0 {
            inv * (1.0 - f).powf(inv - 1.0) * std_error
        } else {
            0.0
        };
        Self {
            p,
            trials,
            failures,
            failure_rate: f,
            std_error,
            per_cycle_rate,
            per_cycle_std_error,
            cycles,
            surviving_cycles,
            wall_time_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub code: CodeSummary,
    pub experiment: Experiment,
    pub config_hash: String,
    pub points: Vec<PointResult>,
}

/// SHA-256 over the canonical JSON of the code and the experiment.
pub fn config_hash(code: &CssCode, exp: &Experiment) -> Result<String, SimError> {
    let value = serde_json::json!({
        "code": serde_json::to_value(code)?,
        "experiment": serde_json::to_value(exp)?,
    });
    let bytes = serde_json::to_vec(&value)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakEven {
    pub p: f64,
    /// Per-cycle logical failure rate.
    pub p_l: f64,
    pub below: bool,
}

/// `(p, p_L, p_L < p)` for each grid point, using the per-cycle rate.
pub fn break_even(report: &SimReport) -> Vec<BreakEven> {
    report
        .points
        .iter()
        .map(|pt| BreakEven {
            p: pt.p,
            p_l: pt.per_cycle_rate,
            below: pt.per_cycle_rate < pt.p,
        })
        .collect()
}

/// First adjacent pair of grid points whose break-even status differs.
pub fn break_even_bracket(points: &[BreakEven]) -> Option<(f64, f64)> {
    points.windows(2).find(|w| w[0].below != w[1].below).map(|w| (w[0].p, w[1].p))
}

fn noise_name(kind: NoiseKind) -> &'static str {
    match kind {
        NoiseKind::CodeCapacity => "code_capacity",
        NoiseKind::WeightedPhenomenological => "weighted_phenomenological",
    }
}

fn decoder_name(v: DecoderVariant) -> &'static str {
    match v {
        DecoderVariant::BpOsd => "bp_osd",
        DecoderVariant::Mwpm => "mwpm",
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    code: &'a str,
    n: usize,
    k: usize,
    model: &'static str,
    decoder: &'static str,
    window: usize,
    p: f64,
    cycles: usize,
    trials: u64,
    failures: u64,
    failure_rate: f64,
    std_error: f64,
    per_cycle_rate: f64,
    per_cycle_std_error: f64,
    surviving_cycles: u64,
    seed: u64,
    config_hash: &'a str,
}

/// One row per (code, model, decoder, p, w). Wall time is left out so the
/// output is byte-identical across runs.
pub fn write_csv<W: Write>(reports: &[SimReport], out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        for pt in &r.points {
            w.serialize(CsvRow {
                code: &r.code.name,
                n: r.code.n,
                k: r.code.k,
                model: noise_name(r.experiment.noise),
                decoder: decoder_name(r.experiment.decoder.variant),
                window: r.experiment.decoder.window,
                p: pt.p,
                cycles: pt.cycles,
                trials: pt.trials,
                failures: pt.failures,
                failure_rate: pt.failure_rate,
                std_error: pt.std_error,
                per_cycle_rate: pt.per_cycle_rate,
                per_cycle_std_error: pt.per_cycle_std_error,
                surviving_cycles: pt.surviving_cycles,
                seed: r.experiment.seed,
                config_hash: &r.config_hash,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(reports: &[SimReport], out: W) -> Result<(), SimError> {
    serde_json::to_writer_pretty(out, reports)?;
    Ok(())
}
