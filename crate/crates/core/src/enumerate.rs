//! Enumeration of fixed-size subsets with an incrementally folded accumulator.

use crate::gf2::BitVec;

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Calls `visit(subset, acc)` for every `t`-subset of `0..n` in lexicographic
/// order, where `acc` is `zero` folded with `step` over the subset's items.
/// Stops early when `visit` returns `false`; returns whether it ran to the end.
pub(crate) fn for_each_subset<S, V>(n: usize, t: usize, zero: &BitVec, step: S, mut visit: V) -> bool
where
    S: Fn(&mut BitVec, usize),
    V: FnMut(&[usize], &BitVec) -> bool,
{
    if t == 0 || t > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    // acc[i] holds the fold over idx[..i]
    let mut acc = vec![zero.clone(); t + 1];
    let refill = |acc: &mut [BitVec], idx: &[usize], from: usize| {
        for j in from..idx.len() {
            let (done, rest) = acc.split_at_mut(j + 1);
            rest[0].words_mut().copy_from_slice(done[j].words());
            step(&mut rest[0], idx[j]);
        }
    };
    refill(&mut acc, &idx, 0);
    loop {
        if !visit(&idx, &acc[t]) {
            return false;
        }
        let Some(i) = (0..t).rev().find(|&i| idx[i] < n - t + i) else {
            return true;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
        refill(&mut acc, &idx, i);
    }
}
