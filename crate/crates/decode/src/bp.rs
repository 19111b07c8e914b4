//! Normalized min-sum belief propagation.

use lresc_core::{BitMatrix, BitVec};

use crate::{DecodeError, DecodeOutcome};

pub const DEFAULT_ALPHA: f64 = 0.625;
pub const DEFAULT_MAX_ITERS: usize = 30;

/// Log-likelihood ratio `ln((1-p)/p)`.
pub fn llr(p: f64) -> f64 {
    ((1.0 - p) / p).ln()
}

pub(crate) fn check_priors(priors: &[f64], n: usize) -> Result<(), DecodeError> {
    if priors.len() != n {
        return Err(DecodeError::Config(format!("{} priors for {n} bits", priors.len())));
    }
    for (index, &value) in priors.iter().enumerate() {
        if !(value > 0.0 && value <= 0.5) {
            return Err(DecodeError::InvalidPrior { index, value });
        }
    }
    Ok(())
}

/// Output of a BP run. `posterior` holds the final LLRs (negative means flipped).
#[derive(Debug, Clone, PartialEq)]
pub struct BpResult {
    pub correction: BitVec,
    pub converged: bool,
    pub iterations: usize,
    pub posterior: Vec<f64>,
}

/// Min-sum decoder on a fixed Tanner graph; owns its message buffers.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n: usize,
    alpha: f64,
    max_iters: usize,
    /// Edge ranges per check; `edge_var[e]` is the bit of edge `e`.
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    /// Edges incident to each bit.
    var_edges: Vec<Vec<usize>>,
    to_check: Vec<f64>,
    to_var: Vec<f64>,
}

impl BpDecoder {
    pub fn new(h: &BitMatrix, alpha: f64, max_iters: usize) -> Self {
        let n = h.ncols();
        let mut check_start = vec![0];
        let mut edge_var = Vec::with_capacity(h.nnz());
        let mut var_edges = vec![Vec::new(); n];
        for r in 0..h.nrows() {
            for v in h.row(r).iter_ones() {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_start.push(edge_var.len());
        }
        let e = edge_var.len();
        Self {
            n,
            alpha,
            max_iters,
            check_start,
            edge_var,
            var_edges,
            to_check: vec![0.0; e],
            to_var: vec![0.0; e],
        }
    }

    fn satisfied(&self, hard: &[bool], syndrome: &BitVec) -> bool {
        (0..self.check_start.len() - 1).all(|c| {
            let parity = self.edge_var[self.check_start[c]..self.check_start[c + 1]]
                .iter()
                .fold(false, |acc, &v| acc ^ hard[v]);
            parity == syndrome.get(c)
        })
    }

    /// Runs min-sum from the prior LLRs. A syndrome already explained by the
    /// hard decision of the priors returns at iteration 0.
    pub fn run(&mut self, syndrome: &BitVec, prior_llr: &[f64]) -> BpResult {
        let mut posterior = prior_llr.to_vec();
        let mut hard: Vec<bool> = posterior.iter().map(|&l| l < 0.0).collect();
        let mut converged = self.satisfied(&hard, syndrome);
        let mut iterations = 0;
        if !converged {
            for (e, &v) in self.edge_var.iter().enumerate() {
                self.to_check[e] = prior_llr[v];
            }
            while iterations < self.max_iters {
                iterations += 1;
                for c in 0..self.check_start.len() - 1 {
                    let range = self.check_start[c]..self.check_start[c + 1];
                    let mut negative = syndrome.get(c);
                    let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                    for e in range.clone() {
                        let m = self.to_check[e];
                        negative ^= m < 0.0;
                        let a = m.abs();
                        if a < min1 {
                            min2 = min1;
                            min1 = a;
                            arg = e;
                        } else if a < min2 {
                            min2 = a;
                        }
                    }
                    for e in range {
                        let mag = if e == arg { min2 } else { min1 };
                        let sign_neg = negative ^ (self.to_check[e] < 0.0);
                        let r = self.alpha * mag;
                        self.to_var[e] = if sign_neg { -r } else { r };
                    }
                }
                for v in 0..self.n {
                    let total = prior_llr[v] + self.var_edges[v].iter().map(|&e| self.to_var[e]).sum::<f64>();
                    posterior[v] = total;
                    hard[v] = total < 0.0;
                    for &e in &self.var_edges[v] {
                        self.to_check[e] = total - self.to_var[e];
                    }
                }
                if self.satisfied(&hard, syndrome) {
                    converged = true;
                    break;
                }
            }
        }
        BpResult {
            correction: BitVec::from_bools(&hard),
            converged,
            iterations,
            posterior,
        }
    }
}

/// Single-shot min-sum decode with the default normalization.
pub fn bp_decode(
    h: &BitMatrix,
    syndrome: &BitVec,
    priors: &[f64],
    max_iters: usize,
) -> Result<DecodeOutcome, DecodeError> {
    check_priors(priors, h.ncols())?;
    if syndrome.len() != h.nrows() {
        return Err(DecodeError::SyndromeLength {
            expected: h.nrows(),
            got: syndrome.len(),
        });
    }
    let prior_llr: Vec<f64> = priors.iter().map(|&p| llr(p)).collect();
    let res = BpDecoder::new(h, DEFAULT_ALPHA, max_iters).run(syndrome, &prior_llr);
    let soft_weight = res.correction.iter_ones().map(|i| prior_llr[i]).sum();
    Ok(DecodeOutcome {
        correction: res.correction,
        converged: res.converged,
        iterations: res.iterations,
        soft_weight,
    })
}
