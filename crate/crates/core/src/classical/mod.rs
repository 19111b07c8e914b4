//! Classical parent codes: constructors, concatenation with repetition codes,
//! weight balancing and finite expansion/confinement audits.

mod audit;
mod balance;
mod concat;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CodeError;
use crate::gf2::{BitMatrix, BitVec};

pub use audit::{
    boundary_size, confinement_probe, expansion_audit, min_distance, ConfinementReport, ExpansionLevel,
    ExpansionReport, MAX_DISTANCE_DIMENSION, SUBSET_BUDGET,
};
pub use balance::decompose_checks;
pub use concat::{concatenate, rebalance_attachments, ConcatInfo, ConcatSpec};

/// Tanner edges whose endpoints sit further apart than this (in layout slots)
/// are tagged long-range.
pub const LOCALITY_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTag {
    Local,
    LongRange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TannerEdge {
    pub check: usize,
    pub bit: usize,
    pub tag: EdgeTag,
}

/// 1D positions of every bit and check, in layout slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout1d {
    pub bits: Vec<f64>,
    pub checks: Vec<f64>,
}

impl Layout1d {
    /// Bits on even slots and checks on odd slots, in index order.
    pub fn interleaved(n: usize, m: usize) -> Self {
        Self {
            bits: (0..n).map(|i| (2 * i) as f64).collect(),
            checks: (0..m).map(|j| (2 * j + 1) as f64).collect(),
        }
    }
}

/// A binary linear code given by its parity-check matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCode {
    pub name: String,
    pub h: BitMatrix,
    /// Generator matrix in standard form, when known.
    pub g: Option<BitMatrix>,
    pub layout: Layout1d,
    pub edges: Vec<TannerEdge>,
    /// Present when the code is an outer code concatenated with repetition codes.
    pub concat: Option<ConcatInfo>,
}

impl ClassicalCode {
    /// Wraps `h` with a derived standard-form generator and the default layout.
    pub fn from_parity_check(name: impl Into<String>, h: BitMatrix) -> Self {
        let layout = Layout1d::interleaved(h.ncols(), h.nrows());
        Self::with_layout(name, h, layout)
    }

    pub fn with_layout(name: impl Into<String>, h: BitMatrix, layout: Layout1d) -> Self {
        let g = generator_from_parity_check(&h);
        let mut code = Self {
            name: name.into(),
            h,
            g: Some(g),
            layout,
            edges: Vec::new(),
            concat: None,
        };
        code.retag_edges();
        code
    }

    /// Recomputes edge tags from the layout.
    pub fn retag_edges(&mut self) {
        self.edges = self
            .h
            .entries()
            .into_iter()
            .map(|(check, bit)| {
                let span = (self.layout.checks[check] - self.layout.bits[bit]).abs();
                TannerEdge {
                    check,
                    bit,
                    tag: if span > LOCALITY_THRESHOLD {
                        EdgeTag::LongRange
                    } else {
                        EdgeTag::Local
                    },
                }
            })
            .collect();
    }

    pub fn n(&self) -> usize {
        self.h.ncols()
    }

    /// Number of parity checks (rows of `h`, possibly redundant).
    pub fn m(&self) -> usize {
        self.h.nrows()
    }

    pub fn k(&self) -> usize {
        self.n() - self.h.rank()
    }

    /// Dimension of the transpose code, `m - rank(H)`.
    pub fn k_transpose(&self) -> usize {
        self.m() - self.h.rank()
    }

    pub fn generator(&self) -> BitMatrix {
        self.g
            .clone()
            .unwrap_or_else(|| generator_from_parity_check(&self.h))
    }

    pub fn long_range_edges(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.tag == EdgeTag::LongRange)
            .count()
    }

    pub fn max_bit_degree(&self) -> usize {
        self.h.col_weights().into_iter().max().unwrap_or(0)
    }

    pub fn is_codeword(&self, x: &BitVec) -> bool {
        self.h.mul_vec(x).is_zero()
    }

    /// Checks the structural invariants: generator orthogonality and rank, and
    /// that the tagged edge list matches the support of `h`.
    pub fn validate(&self) -> Result<(), CodeError> {
        if self.layout.bits.len() != self.n() || self.layout.checks.len() != self.m() {
            return Err(CodeError::Dimension("layout size differs from H".into()));
        }
        if let Some(g) = &self.g {
            if g.ncols() != self.n() {
                return Err(CodeError::Dimension("G width differs from H".into()));
            }
            if !self.h.mul(&g.transpose()).is_zero() {
                return Err(CodeError::Verification("H·Gᵀ ≠ 0".into()));
            }
            if g.rank() != self.k() || g.nrows() != self.k() {
                return Err(CodeError::Verification(format!(
                    "G has {} rows of rank {} but k = {}",
                    g.nrows(),
                    g.rank(),
                    self.k()
                )));
            }
        }
        let entries = self.h.entries();
        if entries.len() != self.edges.len()
            || entries
                .iter()
                .zip(&self.edges)
                .any(|(&(c, b), e)| e.check != c || e.bit != b)
        {
            return Err(CodeError::Verification(
                "edge list does not match the support of H".into(),
            ));
        }
        Ok(())
    }
}

/// Standard-form generator of `ker(H)`.
pub fn generator_from_parity_check(h: &BitMatrix) -> BitMatrix {
    let basis = h.nullspace();
    if basis.nrows() == 0 {
        return basis;
    }
    basis
        .standard_form()
        .map(|(g, _)| g)
        .expect("nullspace basis is independent")
}

/// Length-`c` repetition code with checks on adjacent bits.
pub fn repetition(c: usize) -> Result<ClassicalCode, CodeError> {
    if c == 0 {
        return Err(CodeError::InvalidParameter(
            "repetition length must be at least 1".into(),
        ));
    }
    let mut h = BitMatrix::zeros(c - 1, c);
    for i in 0..c - 1 {
        h.set(i, i, true);
        h.set(i, i + 1, true);
    }
    Ok(ClassicalCode::from_parity_check(format!("rep({c})"), h))
}

/// Shortened Hadamard (simplex, dual Hamming) code `[2^k - 1, k, 2^(k-1)]`.
///
/// `G = (I_k | P)` where the columns of `P` are the nonzero `k`-bit vectors of
/// weight at least two, in increasing numeric order; `H = (Pᵀ | I)`.
pub fn hadamard_family(k: usize) -> Result<ClassicalCode, CodeError> {
    if !(2..=5).contains(&k) {
        return Err(CodeError::InvalidParameter(format!(
            "hadamard family supports 2 <= k <= 5, got {k}"
        )));
    }
    let n = (1usize << k) - 1;
    let extra: Vec<usize> = (1..=n).filter(|v| v.count_ones() >= 2).collect();
    // column j of P is the binary expansion of extra[j], bit i ↦ row i
    let mut h = BitMatrix::zeros(n - k, n);
    for (j, &v) in extra.iter().enumerate() {
        for i in 0..k {
            if (v >> i) & 1 == 1 {
                h.set(j, i, true);
            }
        }
        h.set(j, k + j, true);
    }
    let mut g = BitMatrix::zeros(k, n);
    for i in 0..k {
        g.set(i, i, true);
        for (j, &v) in extra.iter().enumerate() {
            if (v >> i) & 1 == 1 {
                g.set(i, k + j, true);
            }
        }
    }
    let mut code = ClassicalCode::from_parity_check(format!("hadamard({k})"), h);
    code.g = Some(g);
    Ok(code)
}

const LDPC_ATTEMPTS: usize = 10_000;

/// Random `(col_weight, col_weight·n/m)`-regular code from the configuration
/// model, restarting whenever a double edge appears. Deterministic per seed.
pub fn random_ldpc(n: usize, m: usize, col_weight: usize, seed: u64) -> Result<ClassicalCode, CodeError> {
    if col_weight < 3 {
        return Err(CodeError::InvalidParameter("column weight must be at least 3".into()));
    }
    if m == 0 || (col_weight * n) % m != 0 {
        return Err(CodeError::InvalidParameter(format!(
            "col_weight·n = {} is not divisible by m = {m}",
            col_weight * n
        )));
    }
    let row_weight = col_weight * n / m;
    if row_weight > n || col_weight > m {
        return Err(CodeError::InfeasibleDegrees(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bit_stubs: Vec<usize> = (0..n).flat_map(|b| std::iter::repeat_n(b, col_weight)).collect();
    let mut check_stubs: Vec<usize> = (0..m).flat_map(|c| std::iter::repeat_n(c, row_weight)).collect();
    'attempt: for _ in 0..LDPC_ATTEMPTS {
        check_stubs.shuffle(&mut rng);
        let mut h = BitMatrix::zeros(m, n);
        for (&b, &c) in bit_stubs.iter().zip(&check_stubs) {
            if h.get(c, b) {
                continue 'attempt;
            }
            h.set(c, b, true);
        }
        return Ok(ClassicalCode::from_parity_check(
            format!("ldpc({n},{m},{col_weight};{seed})"),
            h,
        ));
    }
    Err(CodeError::InfeasibleDegrees(LDPC_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_shapes() {
        let r2 = repetition(2).unwrap();
        assert_eq!(r2.h.to_string(), "11");
        assert_eq!(r2.k(), 1);
        assert_eq!(r2.generator().to_string(), "11");

        let r6 = repetition(6).unwrap();
        assert_eq!(r6.m(), 5);
        assert!(r6.h.row_weights().iter().all(|&w| w == 2));
        assert_eq!(r6.long_range_edges(), 0);
        r6.validate().unwrap();

        let r1 = repetition(1).unwrap();
        assert_eq!((r1.n(), r1.m(), r1.k()), (1, 0, 1));
        assert!(repetition(0).is_err());
    }

    #[test]
    fn hadamard_k2_is_the_parity_code() {
        let code = hadamard_family(2).unwrap();
        assert_eq!(code.h.to_string(), "111");
        let g = code.g.clone().unwrap();
        assert_eq!(g.to_string(), "101\n011");
        code.validate().unwrap();
        assert!(hadamard_family(1).is_err());
        assert!(hadamard_family(6).is_err());
    }

    #[test]
    fn hadamard_k3_has_weight_four_codewords() {
        let code = hadamard_family(3).unwrap();
        code.validate().unwrap();
        let g = code.generator();
        for mask in 1u32..8 {
            let y = BitVec::from_bools(&(0..3).map(|i| (mask >> i) & 1 == 1).collect::<Vec<_>>());
            assert_eq!(g.combine_rows(&y).weight(), 4);
        }
    }

    #[test]
    fn random_ldpc_is_regular_and_deterministic() {
        let a = random_ldpc(12, 9, 3, 1).unwrap();
        assert!(a.h.col_weights().iter().all(|&w| w == 3));
        assert!(a.h.row_weights().iter().all(|&w| w == 4));
        assert!(a.k() >= 3);
        a.validate().unwrap();
        let b = random_ldpc(12, 9, 3, 1).unwrap();
        assert_eq!(a.h, b.h);
        assert!(random_ldpc(12, 9, 2, 1).is_err());
        assert!(random_ldpc(10, 7, 3, 1).is_err());
    }
}
