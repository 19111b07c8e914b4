//! Noise models and decoders for CSS codes: min-sum BP with OSD
//! post-processing, exact matching, and sliding-window spacetime decoding.

pub mod blossom;
pub mod bp;
mod error;
pub mod failure;
pub mod matching;
pub mod noise;
pub mod osd;
pub mod window;

use lresc_core::{BitMatrix, BitVec};
use serde::{Deserialize, Serialize};

pub use bp::{bp_decode, BpDecoder, BpResult, DEFAULT_ALPHA, DEFAULT_MAX_ITERS};
pub use error::DecodeError;
pub use failure::{logical_failure, logical_failure_with, sector_failure, SectorFailure};
pub use matching::{mwpm_decode, MatchingDecoder, MatchingResult, Partner};
pub use noise::{sample_error, sample_with, DegreeMode, ErrorSample, NoiseKind, NoiseModel, NoiseRates};
pub use osd::{osd_postprocess, osd_solve, DEFAULT_OSD_ORDER};
pub use window::{sliding_window_decode, spacetime_matrix, SpacetimeInstance, WindowDecoder};

/// Smallest prior handed to a decoder; zero-rate locations are clamped here.
pub const PRIOR_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub correction: BitVec,
    pub converged: bool,
    pub iterations: usize,
    pub soft_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderVariant {
    BpOsd,
    Mwpm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecoderConfig {
    pub variant: DecoderVariant,
    pub alpha: f64,
    pub max_iters: usize,
    /// Combination-sweep depth `λ`.
    pub osd_order: usize,
    pub window: usize,
    pub prior_mode: DegreeMode,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            variant: DecoderVariant::BpOsd,
            alpha: DEFAULT_ALPHA,
            max_iters: DEFAULT_MAX_ITERS,
            osd_order: DEFAULT_OSD_ORDER,
            window: 1,
            prior_mode: DegreeMode::Total,
        }
    }
}

impl DecoderConfig {
    pub fn mwpm() -> Self {
        Self {
            variant: DecoderVariant::Mwpm,
            ..Self::default()
        }
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    pub fn validate(&self) -> Result<(), DecodeError> {
        if self.window == 0 {
            return Err(DecodeError::Config("window must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(DecodeError::Config(format!("alpha = {} outside (0, 1]", self.alpha)));
        }
        Ok(())
    }

    /// Decoder for `h` with per-column priors (clamped to `[PRIOR_FLOOR, 0.5]`).
    pub fn build(&self, h: &BitMatrix, priors: &[f64]) -> Result<Decoder, DecodeError> {
        self.validate()?;
        if priors.len() != h.ncols() {
            return Err(DecodeError::Config(format!("{} priors for {} columns", priors.len(), h.ncols())));
        }
        let clamped: Vec<f64> = priors.iter().map(|&p| p.clamp(PRIOR_FLOOR, 0.5)).collect();
        Ok(match self.variant {
            DecoderVariant::BpOsd => Decoder::BpOsd(BpOsdDecoder::new(h, &clamped, self)),
            DecoderVariant::Mwpm => {
                Decoder::Matching(MatchingDecoder::new(h, matching::weights_from_priors(&clamped))?)
            }
        })
    }
}

/// BP followed by OSD-CS whenever BP fails to converge. OSD orders columns by
/// the BP posterior and scores candidates by the prior LLRs.
#[derive(Debug, Clone)]
pub struct BpOsdDecoder {
    h: BitMatrix,
    bp: BpDecoder,
    prior_llr: Vec<f64>,
    order: usize,
}

impl BpOsdDecoder {
    pub fn new(h: &BitMatrix, priors: &[f64], config: &DecoderConfig) -> Self {
        Self {
            h: h.clone(),
            bp: BpDecoder::new(h, config.alpha, config.max_iters),
            prior_llr: priors.iter().map(|&p| bp::llr(p)).collect(),
            order: config.osd_order,
        }
    }

    pub fn decode(&mut self, syndrome: &BitVec) -> Result<DecodeOutcome, DecodeError> {
        if syndrome.len() != self.h.nrows() {
            return Err(DecodeError::SyndromeLength {
                expected: self.h.nrows(),
                got: syndrome.len(),
            });
        }
        let res = self.bp.run(syndrome, &self.prior_llr);
        if res.converged {
            let soft_weight = res.correction.iter_ones().map(|i| self.prior_llr[i]).sum();
            return Ok(DecodeOutcome {
                correction: res.correction,
                converged: true,
                iterations: res.iterations,
                soft_weight,
            });
        }
        let mut out = osd_solve(&self.h, syndrome, &res.posterior, &self.prior_llr, self.order)?;
        out.converged = false;
        out.iterations = res.iterations;
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub enum Decoder {
    BpOsd(BpOsdDecoder),
    Matching(MatchingDecoder),
}

impl Decoder {
    /// Decodes one syndrome; the correction always reproduces it.
    pub fn decode(&mut self, syndrome: &BitVec) -> Result<DecodeOutcome, DecodeError> {
        match self {
            Decoder::BpOsd(d) => d.decode(syndrome),
            Decoder::Matching(d) => d.decode(syndrome),
        }
    }

    pub fn check_matrix(&self) -> &BitMatrix {
        match self {
            Decoder::BpOsd(d) => &d.h,
            Decoder::Matching(d) => d.check_matrix(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_json_round_trip_and_defaults() {
        let cfg = DecoderConfig::default().with_window(3);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<DecoderConfig>(&json).unwrap(), cfg);
        let partial: DecoderConfig = serde_json::from_str(r#"{"variant":"mwpm"}"#).unwrap();
        assert_eq!(partial.osd_order, 30);
        assert_eq!(partial.alpha, 0.625);
        assert_eq!(partial.variant, DecoderVariant::Mwpm);
        assert!(DecoderConfig::default().with_window(0).validate().is_err());
    }
}
