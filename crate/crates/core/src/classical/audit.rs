use serde::{Deserialize, Serialize};

use super::ClassicalCode;
use crate::enumerate::{binomial, for_each_subset};
use crate::error::CodeError;
use crate::gf2::{BitMatrix, BitVec};

/// Maximum number of subsets an audit or probe will enumerate.
pub const SUBSET_BUDGET: u128 = 10_000_000;

/// Largest dimension accepted by [`min_distance`].
pub const MAX_DISTANCE_DIMENSION: usize = 24;

/// Exact minimum weight of a nonzero codeword, by Gray-code enumeration of the
/// `2^k - 1` nonzero combinations of generator rows. Returns `0` for `k = 0`.
pub fn min_distance(code: &ClassicalCode) -> Result<usize, CodeError> {
    let g = code.generator();
    let k = g.nrows();
    if k > MAX_DISTANCE_DIMENSION {
        return Err(CodeError::DimensionTooLarge(k));
    }
    if k == 0 {
        return Ok(0);
    }
    let mut word = BitVec::zeros(code.n());
    let mut best = usize::MAX;
    for i in 1u64..(1u64 << k) {
        word.xor_assign(g.row(i.trailing_zeros() as usize));
        best = best.min(word.weight());
    }
    Ok(best)
}

fn check_budget(n: usize, max_size: usize) -> Result<(), CodeError> {
    let needed: u128 = (1..=max_size).map(|t| binomial(n, t)).sum();
    if needed > SUBSET_BUDGET {
        return Err(CodeError::BudgetExceeded {
            needed,
            limit: SUBSET_BUDGET,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionLevel {
    pub size: usize,
    /// Smallest neighbourhood size `|∂S|` over subsets of this size.
    pub min_boundary: usize,
    /// `min_boundary / (Δ_B · size)`.
    pub min_ratio: f64,
    /// `1 - min_ratio`.
    pub delta: f64,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    /// Maximal bit degree `Δ_B`.
    pub bit_degree: usize,
    pub levels: Vec<ExpansionLevel>,
}

impl ExpansionReport {
    /// Worst `δ` over all audited sizes.
    pub fn delta(&self) -> f64 {
        self.levels.iter().map(|l| l.delta).fold(0.0, f64::max)
    }
}

/// Size of the check neighbourhood of a set of bits.
pub fn boundary_size(h: &BitMatrix, subset: &[usize]) -> usize {
    let ht = h.transpose();
    let mut nb = BitVec::zeros(h.nrows());
    for &b in subset {
        for w in 0..nb.words().len() {
            nb.words_mut()[w] |= ht.row(b).words()[w];
        }
    }
    nb.weight()
}

/// Exact left-expansion audit: for every `|S| <= max_subset`, the minimum of
/// `|∂S| / (Δ_B |S|)` over all bit subsets `S`.
pub fn expansion_audit(code: &ClassicalCode, max_subset: usize) -> Result<ExpansionReport, CodeError> {
    let n = code.n();
    check_budget(n, max_subset)?;
    let ht = code.h.transpose();
    let bit_degree = code.max_bit_degree();
    let zero = BitVec::zeros(code.m());
    let union = |acc: &mut BitVec, b: usize| {
        for (w, &x) in ht.row(b).words().iter().enumerate() {
            acc.words_mut()[w] |= x;
        }
    };
    let mut levels = Vec::new();
    for size in 1..=max_subset.min(n) {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for_each_subset(n, size, &zero, union, |s, nb| {
            let w = nb.weight();
            if best.as_ref().is_none_or(|(b, _)| w < *b) {
                best = Some((w, s.to_vec()));
            }
            true
        });
        let (min_boundary, witness) = best.expect("size <= n");
        let min_ratio = if bit_degree == 0 {
            0.0
        } else {
            min_boundary as f64 / (bit_degree * size) as f64
        };
        levels.push(ExpansionLevel {
            size,
            min_boundary,
            min_ratio,
            delta: 1.0 - min_ratio,
            witness,
        });
    }
    Ok(ExpansionReport { bit_degree, levels })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfinementReport {
    /// `min_syndrome[t - 1]` is the least syndrome weight over errors of weight `t`.
    pub min_syndrome: Vec<usize>,
    /// A minimizing error for each weight.
    pub witnesses: Vec<Vec<usize>>,
    /// Syndrome weight of the single-bit error on each bit.
    pub single_bit: Vec<usize>,
}

/// Exact syndrome-weight profile: the minimum `|H e|` over every error of
/// weight `t`, for `t = 1..=max_error_weight`.
pub fn confinement_probe(code: &ClassicalCode, max_error_weight: usize) -> Result<ConfinementReport, CodeError> {
    let n = code.n();
    check_budget(n, max_error_weight)?;
    let ht = code.h.transpose();
    let zero = BitVec::zeros(code.m());
    let xor = |acc: &mut BitVec, b: usize| acc.xor_assign(ht.row(b));
    let mut min_syndrome = Vec::new();
    let mut witnesses = Vec::new();
    for t in 1..=max_error_weight.min(n) {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for_each_subset(n, t, &zero, xor, |s, syn| {
            let w = syn.weight();
            if best.as_ref().is_none_or(|(b, _)| w < *b) {
                best = Some((w, s.to_vec()));
            }
            true
        });
        let (w, witness) = best.expect("t <= n");
        min_syndrome.push(w);
        witnesses.push(witness);
    }
    let single_bit = (0..n).map(|b| ht.row(b).weight()).collect();
    Ok(ConfinementReport {
        min_syndrome,
        witnesses,
        single_bit,
    })
}
