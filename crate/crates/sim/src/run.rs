use std::time::Instant;

use lresc_core::css::{CssCode, Sector};
use lresc_core::logical::LogicalBasis;
use lresc_core::BitVec;
use lresc_decode::{
    sample_with, sector_failure, DecodeError, Decoder, NoiseKind, NoiseModel, NoiseRates, WindowDecoder,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{config_hash, CodeSummary, PointResult, SimReport};
use crate::{Experiment, SimError};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index`, independent of scheduling and of the grid point.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

const SECTORS: [Sector; 2] = [Sector::X, Sector::Z];

/// Mutable per-worker decoders for one grid point.
#[derive(Clone)]
struct Workspace {
    /// Single-round decoder per sector (also the noiseless flag decoder).
    single: [Decoder; 2],
    window: Option<[WindowDecoder; 2]>,
}

struct PointSetup<'a> {
    code: &'a CssCode,
    basis: &'a LogicalBasis,
    rates: NoiseRates,
    rounds: usize,
}

fn workspace(code: &CssCode, exp: &Experiment, p: f64) -> Result<Workspace, SimError> {
    let prior_model = NoiseModel {
        kind: exp.noise,
        p,
        degree_mode: exp.decoder.prior_mode,
    };
    let prior_rates = prior_model.rates(code);
    let data = prior_rates.marginal();
    let build = |s: Sector| exp.decoder.build(code.detector(s), &data);
    let single = [build(Sector::X)?, build(Sector::Z)?];
    let window = match exp.noise {
        NoiseKind::CodeCapacity => None,
        NoiseKind::WeightedPhenomenological => {
            let make = |s: Sector| {
                WindowDecoder::new(code.detector(s), &data, prior_rates.checks(s.other()), &exp.decoder)
            };
            Some([make(Sector::X)?, make(Sector::Z)?])
        }
    };
    Ok(Workspace { single, window })
}

/// Cycles survived (`rounds` when the trial never fails).
fn run_trial(setup: &PointSetup, ws: &mut Workspace, seed: u64) -> Result<usize, DecodeError> {
    let code = setup.code;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<_> = (0..setup.rounds).map(|_| sample_with(&setup.rates, &mut rng)).collect();
    let mut survived = setup.rounds;
    for (si, &sector) in SECTORS.iter().enumerate() {
        let h = code.detector(sector);
        let Some(windows) = ws.window.as_mut() else {
            let e = samples[0].part(sector);
            let out = ws.single[si].decode(&h.mul_vec(e))?;
            if sector_failure(code, setup.basis, sector, &e.xor(&out.correction))? {
                survived = 0;
            }
            continue;
        };
        let mut cumulative = Vec::with_capacity(setup.rounds);
        let mut raw = Vec::with_capacity(setup.rounds);
        let mut total = BitVec::zeros(code.n());
        for s in &samples {
            total.xor_assign(s.part(sector));
            let mut syn = h.mul_vec(&total);
            syn.xor_assign(s.detector_flips(sector));
            raw.push(syn);
            cumulative.push(total.clone());
        }
        let flag = &mut ws.single[si];
        let mut committed = BitVec::zeros(code.n());
        let mut fault = None;
        let mut first_fail = None;
        windows[si].run(&raw, |t, x| {
            if t >= survived {
                return false;
            }
            committed.xor_assign(x);
            let residual = cumulative[t].xor(&committed);
            let check = flag.decode(&h.mul_vec(&residual)).and_then(|out| {
                sector_failure(code, setup.basis, sector, &residual.xor(&out.correction))
            });
            match check {
                Ok(false) => true,
                Ok(true) => {
                    first_fail = Some(t);
                    false
                }
                Err(e) => {
                    fault = Some(e);
                    false
                }
            }
        })?;
        if let Some(e) = fault {
            return Err(e);
        }
        if let Some(t) = first_fail {
            survived = survived.min(t);
        }
    }
    Ok(survived)
}

fn run_point(code: &CssCode, basis: &LogicalBasis, exp: &Experiment, p: f64) -> Result<PointResult, SimError> {
    let start = Instant::now();
    let model = NoiseModel {
        kind: exp.noise,
        p,
        degree_mode: exp.degree_mode,
    };
    model.validate()?;
    let setup = PointSetup {
        code,
        basis,
        rates: model.rates(code),
        rounds: exp.rounds(),
    };
    let proto = workspace(code, exp, p)?;
    let outcomes: Vec<usize> = (0..exp.trials)
        .into_par_iter()
        .map_init(
            || proto.clone(),
            |ws, trial| {
                run_trial(&setup, ws, trial_seed(exp.seed, trial)).map_err(|source| SimError::Decode {
                    trial,
                    p,
                    source,
                })
            },
        )
        .collect::<Result<_, _>>()?;
    let failures = outcomes.iter().filter(|&&s| s < setup.rounds).count() as u64;
    let surviving: u64 = outcomes.iter().map(|&s| s as u64).sum();
    Ok(PointResult::new(
        p,
        exp.trials,
        failures,
        setup.rounds,
        surviving,
        start.elapsed().as_secs_f64(),
    ))
}

fn run_all(code: &CssCode, exp: &Experiment, threads: Option<usize>) -> Result<SimReport, SimError> {
    exp.validate()?;
    let basis = code.logical_basis()?;
    let body = || -> Result<Vec<PointResult>, SimError> {
        exp.p_grid.iter().map(|&p| run_point(code, &basis, exp, p)).collect()
    };
    let points = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SimError::Pool(e.to_string()))?
            .install(body)?,
        None => body()?,
    };
    Ok(SimReport {
        code: CodeSummary::of(code),
        experiment: exp.clone(),
        config_hash: config_hash(code, exp)?,
        points,
    })
}

/// Clean-syndrome sweep: one sample and one decode per sector per trial.
pub fn run_code_capacity(code: &CssCode, exp: &Experiment, threads: Option<usize>) -> Result<SimReport, SimError> {
    if exp.noise != NoiseKind::CodeCapacity {
        return Err(SimError::Config("experiment is not code-capacity".into()));
    }
    run_all(code, exp, threads)
}

/// Noisy-syndrome sweep with sliding-window decoding and a noiseless flag
/// decode after every cycle; a trial fails at its first flagged cycle.
pub fn run_phenomenological(code: &CssCode, exp: &Experiment, threads: Option<usize>) -> Result<SimReport, SimError> {
    if exp.noise != NoiseKind::WeightedPhenomenological {
        return Err(SimError::Config("experiment is not phenomenological".into()));
    }
    run_all(code, exp, threads)
}

/// Dispatches on the experiment's noise kind.
pub fn run(code: &CssCode, exp: &Experiment, threads: Option<usize>) -> Result<SimReport, SimError> {
    run_all(code, exp, threads)
}
