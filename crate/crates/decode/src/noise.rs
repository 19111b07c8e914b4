//! Code-capacity and degree-weighted phenomenological Pauli noise.

use lresc_core::css::{CssCode, Sector};
use lresc_core::BitVec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::DecodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// Data errors only, perfect syndromes.
    CodeCapacity,
    /// Qubit rate `v·p`, check flip rate `w·p`.
    WeightedPhenomenological,
}

/// How the degree `v` of a qubit is counted in the weighted model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeMode {
    /// Edges in both `HX` and `HZ`.
    #[default]
    Total,
    /// The larger of the two single-sector degrees.
    PerSector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
    #[serde(default)]
    pub degree_mode: DegreeMode,
}

/// Per-location rates derived from a model for one code.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRates {
    /// Probability of a nonidentity Pauli on each qubit.
    pub qubit: Vec<f64>,
    pub x_checks: Vec<f64>,
    pub z_checks: Vec<f64>,
}

impl NoiseRates {
    /// Flip rates of the checks of type `sector`.
    pub fn checks(&self, sector: Sector) -> &[f64] {
        match sector {
            Sector::X => &self.x_checks,
            Sector::Z => &self.z_checks,
        }
    }

    /// Marginal probability that the `sector` part of each qubit error is set.
    pub fn marginal(&self) -> Vec<f64> {
        self.qubit.iter().map(|q| 2.0 * q / 3.0).collect()
    }
}

impl NoiseModel {
    pub fn code_capacity(p: f64) -> Self {
        Self {
            kind: NoiseKind::CodeCapacity,
            p,
            degree_mode: DegreeMode::Total,
        }
    }

    pub fn phenomenological(p: f64) -> Self {
        Self {
            kind: NoiseKind::WeightedPhenomenological,
            p,
            degree_mode: DegreeMode::Total,
        }
    }

    pub fn validate(&self) -> Result<(), DecodeError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(DecodeError::Config(format!("p = {} is not a probability", self.p)));
        }
        Ok(())
    }

    pub fn rates(&self, code: &CssCode) -> NoiseRates {
        let p = self.p;
        match self.kind {
            NoiseKind::CodeCapacity => NoiseRates {
                qubit: vec![p; code.n()],
                x_checks: vec![0.0; code.hx.nrows()],
                z_checks: vec![0.0; code.hz.nrows()],
            },
            NoiseKind::WeightedPhenomenological => {
                let dx = code.hx.col_weights();
                let dz = code.hz.col_weights();
                let qubit = dx
                    .iter()
                    .zip(&dz)
                    .map(|(&a, &b)| {
                        let v = match self.degree_mode {
                            DegreeMode::Total => a + b,
                            DegreeMode::PerSector => a.max(b),
                        };
                        (v as f64 * p).min(1.0)
                    })
                    .collect();
                let weighted = |h: &lresc_core::BitMatrix| -> Vec<f64> {
                    h.row_weights().iter().map(|&w| (w as f64 * p).min(1.0)).collect()
                };
                NoiseRates {
                    qubit,
                    x_checks: weighted(&code.hx),
                    z_checks: weighted(&code.hz),
                }
            }
        }
    }
}

/// One round of sampled noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorSample {
    pub x: BitVec,
    pub z: BitVec,
    /// Flipped outcomes of the X-type checks.
    pub x_check_flips: BitVec,
    pub z_check_flips: BitVec,
}

impl ErrorSample {
    /// Error component of the given type.
    pub fn part(&self, sector: Sector) -> &BitVec {
        match sector {
            Sector::X => &self.x,
            Sector::Z => &self.z,
        }
    }

    /// Measurement flips on the checks that detect `sector`-type errors.
    pub fn detector_flips(&self, sector: Sector) -> &BitVec {
        match sector {
            Sector::X => &self.z_check_flips,
            Sector::Z => &self.x_check_flips,
        }
    }
}

/// Draws one round: each qubit errs with its rate, uniformly as X, Y or Z;
/// each check outcome flips with its rate.
pub fn sample_with<R: Rng>(rates: &NoiseRates, rng: &mut R) -> ErrorSample {
    let n = rates.qubit.len();
    let mut x = BitVec::zeros(n);
    let mut z = BitVec::zeros(n);
    for (q, &rate) in rates.qubit.iter().enumerate() {
        if rate > 0.0 && rng.random::<f64>() < rate {
            match rng.random_range(0..3u8) {
                0 => x.set(q, true),
                1 => {
                    x.set(q, true);
                    z.set(q, true);
                }
                _ => z.set(q, true),
            }
        }
    }
    let flips = |r: &[f64], rng: &mut R| {
        let mut v = BitVec::zeros(r.len());
        for (i, &rate) in r.iter().enumerate() {
            if rate > 0.0 && rng.random::<f64>() < rate {
                v.set(i, true);
            }
        }
        v
    };
    let x_check_flips = flips(&rates.x_checks, rng);
    let z_check_flips = flips(&rates.z_checks, rng);
    ErrorSample {
        x,
        z,
        x_check_flips,
        z_check_flips,
    }
}

/// Deterministic single-round sample for a seed.
pub fn sample_error(code: &CssCode, model: &NoiseModel, seed: u64) -> ErrorSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(&model.rates(code), &mut rng)
}
