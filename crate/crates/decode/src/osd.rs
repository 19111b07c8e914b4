//! Ordered-statistics post-processing with the combination sweep.

use lresc_core::{BitMatrix, BitVec};

use crate::{DecodeError, DecodeOutcome};

pub const DEFAULT_OSD_ORDER: usize = 30;

/// Columns sorted so that the most likely flipped (lowest reliability) come first.
fn reliability_order(reliability: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..reliability.len()).collect();
    order.sort_by(|&a, &b| reliability[a].total_cmp(&reliability[b]).then(a.cmp(&b)));
    order
}

/// Number of violated checks of `correction` against `syndrome`.
pub(crate) fn mismatch(h: &BitMatrix, correction: &BitVec, syndrome: &BitVec) -> usize {
    let mut s = h.mul_vec(correction);
    s.xor_assign(syndrome);
    s.weight()
}

/// OSD with separate ordering and cost vectors.
///
/// Columns are ordered by `reliability`; the candidate minimizing the sum of
/// `cost` over its support wins. Flip sets: none, each of the first `order`
/// non-pivot columns, and each pair among them.
pub fn osd_solve(
    h: &BitMatrix,
    syndrome: &BitVec,
    reliability: &[f64],
    cost: &[f64],
    order: usize,
) -> Result<DecodeOutcome, DecodeError> {
    let (m, n) = (h.nrows(), h.ncols());
    if syndrome.len() != m {
        return Err(DecodeError::SyndromeLength {
            expected: m,
            got: syndrome.len(),
        });
    }
    let perm = reliability_order(reliability);
    let words = (n + 1).div_ceil(64);
    let get = |row: &[u64], j: usize| row[j / 64] >> (j % 64) & 1 == 1;
    // augmented rows over permuted columns; bit n carries the syndrome
    let mut rows = vec![vec![0u64; words]; m];
    let ht = h.transpose();
    for (j, &col) in perm.iter().enumerate() {
        for r in ht.row(col).iter_ones() {
            rows[r][j / 64] |= 1 << (j % 64);
        }
    }
    for r in syndrome.iter_ones() {
        rows[r][n / 64] |= 1 << (n % 64);
    }
    let mut pivots = Vec::new();
    let mut is_pivot = vec![false; n];
    for j in 0..n {
        let rank = pivots.len();
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&r| get(&rows[r], j)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let from = pivot_row.iter().position(|&x| x != 0).unwrap_or(0);
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && get(row, j) {
                for (a, b) in row[from..].iter_mut().zip(&pivot_row[from..]) {
                    *a ^= b;
                }
            }
        }
        pivots.push(j);
        is_pivot[j] = true;
    }
    let rank = pivots.len();
    if rows[rank..].iter().any(|row| get(row, n)) {
        return Err(DecodeError::InconsistentSyndrome);
    }
    let base = BitVec::from_bools(&(0..rank).map(|i| get(&rows[i], n)).collect::<Vec<_>>());
    let candidates: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).take(order).collect();
    let columns: Vec<BitVec> = candidates
        .iter()
        .map(|&j| BitVec::from_bools(&(0..rank).map(|i| get(&rows[i], j)).collect::<Vec<_>>()))
        .collect();
    let pivot_cost: Vec<f64> = pivots.iter().map(|&j| cost[perm[j]]).collect();
    let flip_cost: Vec<f64> = candidates.iter().map(|&j| cost[perm[j]]).collect();
    let weigh = |v: &BitVec| v.iter_ones().map(|i| pivot_cost[i]).sum::<f64>();

    let mut best_cost = weigh(&base);
    let mut best: (BitVec, Vec<usize>) = (base.clone(), Vec::new());
    let mut scratch = BitVec::zeros(rank);
    for a in 0..candidates.len() {
        scratch.clone_from(&base);
        scratch.xor_assign(&columns[a]);
        let c = weigh(&scratch) + flip_cost[a];
        if c < best_cost {
            best_cost = c;
            best = (scratch.clone(), vec![a]);
        }
        for b in a + 1..candidates.len() {
            let mut pair = scratch.clone();
            pair.xor_assign(&columns[b]);
            let c = weigh(&pair) + flip_cost[a] + flip_cost[b];
            if c < best_cost {
                best_cost = c;
                best = (pair, vec![a, b]);
            }
        }
    }
    let mut correction = BitVec::zeros(n);
    for i in best.0.iter_ones() {
        correction.set(perm[pivots[i]], true);
    }
    for a in best.1 {
        correction.set(perm[candidates[a]], true);
    }
    let bad = mismatch(h, &correction, syndrome);
    if bad != 0 {
        return Err(DecodeError::SyndromeMismatch(bad));
    }
    Ok(DecodeOutcome {
        correction,
        converged: true,
        iterations: 0,
        soft_weight: best_cost,
    })
}

/// OSD-CS where the soft reliabilities serve both as ordering and as cost.
pub fn osd_postprocess(
    h: &BitMatrix,
    syndrome: &BitVec,
    reliabilities: &[f64],
    order: usize,
) -> Result<DecodeOutcome, DecodeError> {
    if reliabilities.len() != h.ncols() {
        return Err(DecodeError::Config(format!(
            "{} reliabilities for {} columns",
            reliabilities.len(),
            h.ncols()
        )));
    }
    osd_solve(h, syndrome, reliabilities, reliabilities, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefers_the_cheap_solution() {
        // two columns explain the syndrome alone, one is much cheaper
        let h: BitMatrix = "110;011".parse().unwrap();
        let s = BitVec::from_support(2, &[0, 1]);
        let out = osd_postprocess(&h, &s, &[5.0, 1.0, 5.0], 0).unwrap();
        assert_eq!(out.correction.support(), vec![1]);
        let out = osd_postprocess(&h, &s, &[1.0, 5.0, 1.0], 2).unwrap();
        assert_eq!(out.correction.support(), vec![0, 2]);
    }

    #[test]
    fn sweep_finds_what_order_zero_misses() {
        // pivots land on columns 0 and 1; only a non-pivot flip reaches the optimum
        let h: BitMatrix = "1101;0111".parse().unwrap();
        let s = BitVec::from_support(2, &[0, 1]);
        let rel = [0.0, 0.1, 3.0, 2.5];
        let zero = osd_solve(&h, &s, &rel, &[4.0, 4.0, 1.0, 1.0], 0).unwrap();
        let swept = osd_solve(&h, &s, &rel, &[4.0, 4.0, 1.0, 1.0], 2).unwrap();
        assert!(swept.soft_weight <= zero.soft_weight);
        assert_eq!(swept.correction.support(), vec![3]);
    }

    #[test]
    fn inconsistent_syndrome_is_reported() {
        let h: BitMatrix = "11;11".parse().unwrap();
        let s = BitVec::from_support(2, &[0]);
        assert_eq!(
            osd_postprocess(&h, &s, &[1.0, 1.0], 4),
            Err(DecodeError::InconsistentSyndrome)
        );
    }
}
