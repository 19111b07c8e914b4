//! Exact minimum-weight perfect matching on graph-like check matrices.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use lresc_core::{BitMatrix, BitVec};

use crate::blossom::max_weight_matching;
use crate::{DecodeError, DecodeOutcome};

const UNREACHABLE: i64 = i64::MAX / 4;
/// Resolution of the integer edge weights derived from priors.
const WEIGHT_SCALE: f64 = 1000.0;

/// Integer edge weights proportional to `ln((1-p)/p)`, the cheapest column
/// scaled to `WEIGHT_SCALE`. Uniform priors give uniform weights.
pub fn weights_from_priors(priors: &[f64]) -> Vec<i64> {
    let llrs: Vec<f64> = priors.iter().map(|&p| crate::bp::llr(p).max(0.0)).collect();
    let base = llrs.iter().copied().filter(|&l| l > 0.0).fold(f64::INFINITY, f64::min);
    llrs.iter()
        .map(|&l| {
            if base.is_finite() {
                ((l / base) * WEIGHT_SCALE).round().max(1.0) as i64
            } else {
                1
            }
        })
        .collect()
}

/// Pairing chosen for one defect: another defect or the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    Defect(usize),
    Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingResult {
    pub correction: BitVec,
    /// Total path weight of the matching.
    pub weight: i64,
    /// `(check, partner)` for every defect, each pair listed once.
    pub pairs: Vec<(usize, Partner)>,
}

/// Decoding graph: checks are nodes, weight-2 columns are edges, weight-1
/// columns are edges to a shared boundary node.
#[derive(Debug, Clone)]
pub struct MatchingDecoder {
    h: BitMatrix,
    weights: Vec<i64>,
    /// `dist[s][t]` over `m + 1` nodes; node `m` is the boundary.
    dist: Vec<Vec<i64>>,
    /// `(previous node, column)` on a shortest path from `s`.
    pred: Vec<Vec<(u32, u32)>>,
}

impl MatchingDecoder {
    pub fn new(h: &BitMatrix, weights: Vec<i64>) -> Result<Self, DecodeError> {
        let (m, n) = (h.nrows(), h.ncols());
        if weights.len() != n {
            return Err(DecodeError::Config(format!("{} weights for {n} columns", weights.len())));
        }
        let ht = h.transpose();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m + 1];
        for col in 0..n {
            let ends = ht.row(col).support();
            match ends.len() {
                0 => {}
                1 => {
                    adj[ends[0]].push((m, col));
                    adj[m].push((ends[0], col));
                }
                2 => {
                    adj[ends[0]].push((ends[1], col));
                    adj[ends[1]].push((ends[0], col));
                }
                weight => return Err(DecodeError::NotGraphlike { column: col, weight }),
            }
        }
        let mut dist = Vec::with_capacity(m + 1);
        let mut pred = Vec::with_capacity(m + 1);
        for s in 0..=m {
            let (d, p) = dijkstra(&adj, &weights, s);
            dist.push(d);
            pred.push(p);
        }
        Ok(Self {
            h: h.clone(),
            weights,
            dist,
            pred,
        })
    }

    /// Unit weights (path length).
    pub fn unweighted(h: &BitMatrix) -> Result<Self, DecodeError> {
        Self::new(h, vec![1; h.ncols()])
    }

    pub fn check_matrix(&self) -> &BitMatrix {
        &self.h
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Shortest-path weight between two checks, `None` if disconnected.
    pub fn distance(&self, a: usize, b: usize) -> Option<i64> {
        let d = self.dist[a][b];
        (d < UNREACHABLE).then_some(d)
    }

    pub fn boundary_distance(&self, a: usize) -> Option<i64> {
        self.distance(a, self.h.nrows())
    }

    fn trace(&self, from: usize, to: usize, out: &mut BitVec) {
        let mut v = to;
        while v != from {
            let (prev, col) = self.pred[from][v];
            out.flip(col as usize);
            v = prev as usize;
        }
    }

    pub fn decode_detailed(&self, syndrome: &BitVec) -> Result<MatchingResult, DecodeError> {
        let m = self.h.nrows();
        if syndrome.len() != m {
            return Err(DecodeError::SyndromeLength {
                expected: m,
                got: syndrome.len(),
            });
        }
        let defects = syndrome.support();
        let k = defects.len();
        let mut correction = BitVec::zeros(self.h.ncols());
        if k == 0 {
            return Ok(MatchingResult {
                correction,
                weight: 0,
                pairs: Vec::new(),
            });
        }
        // defects 0..k, private boundary copies k..2k joined by free edges
        let mut max_d = 0;
        let mut raw = Vec::new();
        for i in 0..k {
            let bd = self.dist[defects[i]][m];
            if bd < UNREACHABLE {
                raw.push((i, k + i, bd));
                max_d = max_d.max(bd);
            }
            for j in i + 1..k {
                let d = self.dist[defects[i]][defects[j]];
                if d < UNREACHABLE {
                    raw.push((i, j, d));
                    max_d = max_d.max(d);
                }
                raw.push((k + i, k + j, 0));
            }
        }
        let offset = max_d + 1;
        let edges: Vec<(usize, usize, i64)> = raw.iter().map(|&(a, b, d)| (a, b, offset - d)).collect();
        let mate = max_weight_matching(2 * k, &edges, true);
        let mut weight = 0;
        let mut pairs = Vec::new();
        for i in 0..k {
            let Some(j) = mate[i] else {
                return Err(DecodeError::Unmatchable(defects[i]));
            };
            if j >= k {
                weight += self.dist[defects[i]][m];
                self.trace(defects[i], m, &mut correction);
                pairs.push((defects[i], Partner::Boundary));
            } else if i < j {
                weight += self.dist[defects[i]][defects[j]];
                self.trace(defects[i], defects[j], &mut correction);
                pairs.push((defects[i], Partner::Defect(defects[j])));
            }
        }
        let bad = crate::osd::mismatch(&self.h, &correction, syndrome);
        if bad != 0 {
            return Err(DecodeError::SyndromeMismatch(bad));
        }
        Ok(MatchingResult {
            correction,
            weight,
            pairs,
        })
    }

    pub fn decode(&self, syndrome: &BitVec) -> Result<DecodeOutcome, DecodeError> {
        let res = self.decode_detailed(syndrome)?;
        Ok(DecodeOutcome {
            correction: res.correction,
            converged: true,
            iterations: 0,
            soft_weight: res.weight as f64,
        })
    }
}

fn dijkstra(adj: &[Vec<(usize, usize)>], weights: &[i64], s: usize) -> (Vec<i64>, Vec<(u32, u32)>) {
    let nodes = adj.len();
    let mut dist = vec![UNREACHABLE; nodes];
    let mut pred = vec![(u32::MAX, u32::MAX); nodes];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0i64, s)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(u, col) in &adj[v] {
            let nd = d + weights[col];
            if nd < dist[u] {
                dist[u] = nd;
                pred[u] = (v as u32, col as u32);
                heap.push(Reverse((nd, u)));
            }
        }
    }
    (dist, pred)
}

/// Matching decode with unit weights.
pub fn mwpm_decode(h: &BitMatrix, syndrome: &BitVec) -> Result<DecodeOutcome, DecodeError> {
    MatchingDecoder::unweighted(h)?.decode(syndrome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(n: usize) -> BitMatrix {
        let supports: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        BitMatrix::from_supports(n - 1, n, &supports).unwrap()
    }

    #[test]
    fn repetition_matching() {
        let h = rep(7);
        let dec = MatchingDecoder::unweighted(&h).unwrap();
        assert!(dec.decode(&BitVec::zeros(6)).unwrap().correction.is_zero());
        assert_eq!(dec.boundary_distance(0), Some(1));
        assert_eq!(dec.boundary_distance(2), Some(3));
        for e in [vec![3], vec![0, 1], vec![2, 4, 5]] {
            let err = BitVec::from_support(7, &e);
            let out = dec.decode(&h.mul_vec(&err)).unwrap();
            assert_eq!(out.correction, err);
        }
    }

    #[test]
    fn rejects_hyperedges() {
        let h: BitMatrix = "1;1;1".parse().unwrap();
        assert!(matches!(
            MatchingDecoder::unweighted(&h),
            Err(DecodeError::NotGraphlike { column: 0, weight: 3 })
        ));
    }

    #[test]
    fn prior_weights() {
        assert_eq!(weights_from_priors(&[0.1, 0.1]), vec![1000, 1000]);
        let w = weights_from_priors(&[0.1, 0.01]);
        assert_eq!(w[0], 1000);
        assert!(w[1] > 2000);
    }
}
