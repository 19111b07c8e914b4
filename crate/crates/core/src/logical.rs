//! Logical operators: canonical bases from parent codewords, tunneling
//! checks at long-range boundaries, string stabilizers and distance bounds.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alist::serde_alist;
use crate::classical::ClassicalCode;
use crate::css::{CssCode, ProductShape, Sector};
use crate::enumerate::{binomial, for_each_subset};
use crate::error::CodeError;
use crate::gf2::{BitMatrix, BitVec};

/// Candidate budget of [`distance_lower_bound_exhaustive`].
pub const ENUMERATION_BUDGET: u128 = 200_000_000;

/// Default number of restarts of [`logical_weight_search`].
pub const DEFAULT_RESTARTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliString {
    pub x: BitVec,
    pub z: BitVec,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn of_type(sector: Sector, part: BitVec) -> Self {
        let zero = BitVec::zeros(part.len());
        match sector {
            Sector::X => Self { x: part, z: zero },
            Sector::Z => Self { x: zero, z: part },
        }
    }

    pub fn part(&self, sector: Sector) -> &BitVec {
        match sector {
            Sector::X => &self.x,
            Sector::Z => &self.z,
        }
    }

    pub fn weight(&self) -> usize {
        let mut either = self.x.clone();
        for (w, &z) in either.words_mut().iter_mut().zip(self.z.words()) {
            *w |= z;
        }
        either.weight()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalBasis {
    #[serde(with = "serde_alist")]
    pub gx: BitMatrix,
    #[serde(with = "serde_alist")]
    pub gz: BitMatrix,
}

impl LogicalBasis {
    pub fn k(&self) -> usize {
        self.gx.nrows()
    }

    pub fn of(&self, sector: Sector) -> &BitMatrix {
        match sector {
            Sector::X => &self.gx,
            Sector::Z => &self.gz,
        }
    }

    /// `GX · GZᵀ`.
    pub fn pairing(&self) -> BitMatrix {
        self.gx.mul(&self.gz.transpose())
    }

    /// Indices of the opposite-type logicals that anticommute with `v`.
    pub fn pairing_of(&self, sector: Sector, v: &BitVec) -> Vec<usize> {
        let other = self.of(sector.other());
        (0..other.nrows()).filter(|&i| other.row(i).dot(v)).collect()
    }
}

/// Standard-form generator of a parent code with its pivot columns.
fn standard_generator(code: &ClassicalCode) -> (BitMatrix, Vec<usize>) {
    let g = code.generator();
    if g.nrows() == 0 {
        return (g, Vec::new());
    }
    g.standard_form().expect("generator has full rank")
}

fn parents(code: &CssCode) -> Result<(&ClassicalCode, &ClassicalCode, ProductShape), CodeError> {
    let prov = code
        .provenance
        .as_ref()
        .ok_or_else(|| CodeError::MissingProvenance("code has no product structure".into()))?;
    let (c1, c2) = prov.parents();
    Ok((c1, c2, code.product_shape().expect("provenance present")))
}

/// Logical basis built from the standard-form parent generators.
///
/// Logical `y·k2 + x` has `X̄ = e_{p1(y)} ⊗ g2_x` (a horizontal string) and
/// `Z̄ = g1_y ⊗ e_{p2(x)}` (a vertical string) on the primary sublattice, where
/// `p` are the pivot columns. The pairing matrix is the identity.
pub fn canonical_logicals(code: &CssCode) -> Result<LogicalBasis, CodeError> {
    let (c1, c2, shape) = parents(code)?;
    let (g1, p1) = standard_generator(c1);
    let (g2, p2) = standard_generator(c2);
    let (k1, k2) = (g1.nrows(), g2.nrows());
    let k = code.k();
    if k != k1 * k2 {
        return Err(CodeError::Verification(format!(
            "K = {k} differs from k1·k2 = {}; the transpose codes carry logicals",
            k1 * k2
        )));
    }
    let n = code.n();
    let mut gx = BitMatrix::zeros(k, n);
    let mut gz = BitMatrix::zeros(k, n);
    for y in 0..k1 {
        for x in 0..k2 {
            let label = y * k2 + x;
            for b2 in g2.row(x).iter_ones() {
                gx.set(label, shape.primary(p1[y], b2), true);
            }
            for b1 in g1.row(y).iter_ones() {
                gz.set(label, shape.primary(b1, p2[x]), true);
            }
        }
    }
    Ok(LogicalBasis { gx, gz })
}

/// Incrementally reduced row basis for independence tests.
struct ReducedBasis {
    rows: Vec<(usize, BitVec)>,
}

impl ReducedBasis {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Adds `v` when it is independent of the basis; returns whether it was.
    fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            Some(p) => {
                for (_, row) in &mut self.rows {
                    if row.get(p) {
                        row.xor_assign(&r);
                    }
                }
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

/// Logicals of `ker(H_other) / rowspace(H_same)` for one sector.
fn sector_logicals(same: &BitMatrix, other: &BitMatrix) -> Vec<BitVec> {
    let mut basis = ReducedBasis::new();
    for row in same.rows() {
        basis.insert(row);
    }
    other
        .nullspace()
        .into_rows()
        .into_iter()
        .filter(|v| basis.insert(v))
        .collect()
}

/// Basis for any CSS code via kernels and quotients, paired so that
/// `GX · GZᵀ = I`.
pub fn generic_logicals(code: &CssCode) -> Result<LogicalBasis, CodeError> {
    let n = code.n();
    let gx = BitMatrix::from_rows(n, sector_logicals(&code.hx, &code.hz));
    let gz = BitMatrix::from_rows(n, sector_logicals(&code.hz, &code.hx));
    let pairing = gx.mul(&gz.transpose());
    let inv = pairing
        .inverse()
        .ok_or_else(|| CodeError::Verification("logical pairing is singular".into()))?;
    Ok(LogicalBasis {
        gx,
        gz: inv.transpose().mul(&gz),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StringAxis {
    /// Along the second parent code (x direction).
    Horizontal,
    /// Along the first parent code (y direction).
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentCheck {
    pub segment: usize,
    /// Checks violated by the string covering the whole segment.
    pub violated: Vec<usize>,
    /// Long-range checks of that segment's boundary.
    pub expected: Vec<usize>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordCheck {
    pub generator_row: usize,
    pub segments: Vec<usize>,
    pub syndrome_weight: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelocationCheck {
    pub outer_row: usize,
    /// Lines the string occupies after multiplying by the long-range checks.
    pub new_lines: Vec<usize>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunnelingReport {
    pub sector: Sector,
    pub axis: StringAxis,
    /// Row (horizontal strings) or column (vertical strings) holding the strings.
    pub line: usize,
    pub segments: Vec<SegmentCheck>,
    pub codewords: Vec<CodewordCheck>,
    pub relocations: Vec<RelocationCheck>,
}

impl TunnelingReport {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty() && self.codewords.is_empty() && self.relocations.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.segments.iter().all(|s| s.ok)
            && self.codewords.iter().all(|c| c.ok)
            && self.relocations.iter().all(|r| r.ok)
    }
}

/// The bit of a segment that carries its outer-code edges.
fn attach_bit(code: &ClassicalCode, segment: usize) -> usize {
    let info = code.concat.as_ref().expect("concatenated");
    let m_out = info.outer_rows();
    info.segment_bits(segment)
        .find(|&b| (0..m_out).any(|r| code.h.get(r, b)))
        .unwrap_or(segment * info.c)
}

/// Verifies how string operators tunnel through long-range boundaries.
///
/// X strings run horizontally along the second parent on row `line` (the
/// outer-edge bit of segment `patch` of the first parent); Z strings run
/// vertically, with the roles of the parents exchanged. Three properties are
/// checked:
/// (a) a string covering one segment violates exactly the long-range checks of
///     that segment's outer bit;
/// (b) the string following each generator row has zero syndrome;
/// (c) multiplying a codeword string by the checks of an outer row of the
///     perpendicular parent moves it onto the other lines of that row.
///
/// Parents without concatenation structure yield an empty report.
pub fn tunneling_check(
    code: &CssCode,
    sector: Sector,
    axis: StringAxis,
    patch: usize,
) -> Result<TunnelingReport, CodeError> {
    let (c1, c2, shape) = parents(code)?;
    let (along, across) = match (sector, axis) {
        (Sector::X, StringAxis::Horizontal) => (c2, c1),
        (Sector::Z, StringAxis::Vertical) => (c1, c2),
        _ => {
            return Err(CodeError::InvalidParameter(
                "X strings run horizontally and Z strings vertically".into(),
            ))
        }
    };
    // (line, position along the string) -> qubit
    let qubit = |line: usize, pos: usize| match sector {
        Sector::X => shape.primary(line, pos),
        Sector::Z => shape.primary(pos, line),
    };
    let line = match &across.concat {
        Some(info) if patch < info.outer.n() => attach_bit(across, patch),
        Some(_) => {
            return Err(CodeError::InvalidParameter(format!("patch {patch} out of range")))
        }
        None if patch < across.n() => patch,
        None => return Err(CodeError::InvalidParameter(format!("line {patch} out of range"))),
    };
    let mut report = TunnelingReport {
        sector,
        axis,
        line,
        segments: Vec::new(),
        codewords: Vec::new(),
        relocations: Vec::new(),
    };
    let detector = code.detector(sector);
    let stabilizers = code.checks(sector);
    let n = code.n();
    let string = |positions: &[usize]| {
        BitVec::from_support(n, &positions.iter().map(|&p| qubit(line, p)).collect::<Vec<_>>())
    };
    // check (line, r) of the detecting type, for row r of the string's parent
    let detector_check = |r: usize| match sector {
        Sector::X => shape.z_check(line, r),
        Sector::Z => shape.x_check(r, line),
    };

    if let Some(info) = &along.concat {
        let outer = &info.outer;
        for segment in 0..outer.n() {
            let bits: Vec<usize> = info.segment_bits(segment).collect();
            let violated = detector.mul_vec(&string(&bits)).support();
            let mut expected: Vec<usize> = (0..outer.m())
                .filter(|&r| outer.h.get(r, segment))
                .map(detector_check)
                .collect();
            expected.sort_unstable();
            report.segments.push(SegmentCheck {
                segment,
                ok: violated == expected,
                violated,
                expected,
            });
        }
        let (g, _) = standard_generator(along);
        for row in 0..g.nrows() {
            let support = g.row(row).support();
            let syndrome_weight = detector.mul_vec(&string(&support)).weight();
            let mut segments: Vec<usize> = support.iter().map(|&b| info.segment_of(b)).collect();
            segments.dedup();
            report.codewords.push(CodewordCheck {
                generator_row: row,
                segments,
                syndrome_weight,
                ok: syndrome_weight == 0,
            });
        }
    }

    if let (Some(info), Some(g_row)) = (&across.concat, standard_generator(along).0.rows().first()) {
        let support = g_row.support();
        let base = string(&support);
        for r in 0..info.outer_rows() {
            if !across.h.get(r, line) {
                continue;
            }
            // product over the string of the stabilizers (r, p)
            let mut product = BitVec::zeros(n);
            for &p in &support {
                let check = match sector {
                    Sector::X => shape.x_check(r, p),
                    Sector::Z => shape.z_check(p, r),
                };
                product.xor_assign(stabilizers.row(check));
            }
            let moved = base.xor(&product);
            let new_lines: Vec<usize> = across.h.row(r).iter_ones().filter(|&b| b != line).collect();
            let mut expected = Vec::new();
            for &l in &new_lines {
                for &p in &support {
                    expected.push(match sector {
                        Sector::X => shape.primary(l, p),
                        Sector::Z => shape.primary(p, l),
                    });
                }
            }
            expected.sort_unstable();
            let ok = moved.support() == expected && detector.mul_vec(&moved).is_zero();
            report.relocations.push(RelocationCheck {
                outer_row: r,
                new_lines,
                ok,
            });
        }
    }
    Ok(report)
}

fn check_membership(stabilizers: &BitMatrix, op: &BitVec) -> Result<(), CodeError> {
    if stabilizers.in_rowspace(op) {
        Ok(())
    } else {
        Err(CodeError::Verification(
            "operator is not in the stabilizer row space".into(),
        ))
    }
}

/// Stabilizer built from a parity-check row and a codeword of the parents.
///
/// The Z type is the product of Z checks `(b1, h_row)` over `b1 ∈ g1[g_row]`, with
/// primary support `g1 ⊗ h2`. The X type is the product of X checks
/// `(h_row, b2)` over `b2 ∈ g2[g_row]`, with primary support `h1 ⊗ g2`.
pub fn string_stabilizer(
    code: &CssCode,
    h_row: usize,
    g_row: usize,
    sector: Sector,
) -> Result<PauliString, CodeError> {
    let (c1, c2, shape) = parents(code)?;
    let (h_code, g_code) = match sector {
        Sector::Z => (c2, c1),
        Sector::X => (c1, c2),
    };
    let (g, _) = standard_generator(g_code);
    if h_row >= h_code.m() || g_row >= g.nrows() {
        return Err(CodeError::InvalidParameter(format!(
            "row indices ({h_row}, {g_row}) out of range"
        )));
    }
    let checks = code.checks(sector);
    let mut op = BitVec::zeros(code.n());
    for b in g.row(g_row).iter_ones() {
        let idx = match sector {
            Sector::Z => shape.z_check(b, h_row),
            Sector::X => shape.x_check(h_row, b),
        };
        op.xor_assign(checks.row(idx));
    }
    if !code.detector(sector).mul_vec(&op).is_zero() {
        return Err(CodeError::Verification("string stabilizer has a syndrome".into()));
    }
    check_membership(checks, &op)?;
    Ok(PauliString::of_type(sector, op))
}

/// X-type loop: the product of X checks `(h_row, b2)` for `b2` in `columns`.
pub fn contractible_loop(code: &CssCode, h_row: usize, columns: Range<usize>) -> Result<PauliString, CodeError> {
    let (c1, c2, shape) = parents(code)?;
    if h_row >= c1.m() || columns.end > c2.n() {
        return Err(CodeError::InvalidParameter("loop outside the lattice".into()));
    }
    let mut op = BitVec::zeros(code.n());
    for b2 in columns {
        op.xor_assign(code.hx.row(shape.x_check(h_row, b2)));
    }
    check_membership(&code.hx, &op)?;
    Ok(PauliString::of_type(Sector::X, op))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalWitness {
    pub sector: Sector,
    pub weight: usize,
    pub support: Vec<usize>,
    /// Weight of the syndrome under the opposite checks (zero when verified).
    pub syndrome_weight: usize,
    /// Opposite-type logicals anticommuting with the witness.
    pub anticommutes_with: Vec<usize>,
    pub restarts: usize,
    pub seed: u64,
}

impl LogicalWitness {
    pub fn verified(&self) -> bool {
        self.syndrome_weight == 0 && !self.anticommutes_with.is_empty()
    }
}

fn greedy_reduce(mut v: BitVec, stabilizers: &[BitVec]) -> BitVec {
    let mut weight = v.weight();
    loop {
        let mut improved = false;
        for s in stabilizers {
            let w = v.xor(s).weight();
            if w < weight {
                v.xor_assign(s);
                weight = w;
                improved = true;
            }
        }
        if !improved {
            return v;
        }
    }
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Upper bound on the distance of one sector by greedy stabilizer-coset
/// reduction. The first `K` restarts start from the basis logicals, the rest
/// from random nontrivial cosets.
pub fn logical_weight_search(
    code: &CssCode,
    sector: Sector,
    restarts: usize,
    seed: u64,
) -> Result<LogicalWitness, CodeError> {
    let basis = code.logical_basis()?;
    let logicals = basis.of(sector);
    let k = logicals.nrows();
    if k == 0 {
        return Err(CodeError::InvalidParameter("code has no logical qubits".into()));
    }
    let mut stabilizers: Vec<BitVec> = code
        .checks(sector)
        .rows()
        .iter()
        .filter(|r| !r.is_zero())
        .cloned()
        .collect();
    stabilizers.sort_by_key(BitVec::weight);
    let best = (0..restarts.max(k))
        .into_par_iter()
        .map(|i| {
            let start = if i < k {
                logicals.row(i).clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, i as u64));
                let mut v = BitVec::zeros(code.n());
                let mut coeffs = BitVec::zeros(k);
                while coeffs.is_zero() {
                    for j in 0..k {
                        coeffs.set(j, rng.random_bool(0.5));
                    }
                }
                v.xor_assign(&logicals.combine_rows(&coeffs));
                for s in &stabilizers {
                    if rng.random_bool(0.5) {
                        v.xor_assign(s);
                    }
                }
                v
            };
            greedy_reduce(start, &stabilizers)
        })
        .min_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.support().cmp(&b.support())))
        .expect("at least one restart");
    Ok(LogicalWitness {
        sector,
        weight: best.weight(),
        syndrome_weight: code.detector(sector).mul_vec(&best).weight(),
        anticommutes_with: basis.pairing_of(sector, &best),
        support: best.support(),
        restarts: restarts.max(k),
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    pub sector: Sector,
    pub max_weight: usize,
    /// True when no logical of weight `<= max_weight` exists.
    pub certified: bool,
    pub counterexample: Option<Vec<usize>>,
    pub candidates: u128,
}

/// Exhaustively checks every error of weight `1..=max_weight`: a zero-syndrome
/// error is a nontrivial logical iff it anticommutes with an opposite logical.
pub fn distance_lower_bound_exhaustive(
    code: &CssCode,
    sector: Sector,
    max_weight: usize,
) -> Result<DistanceCertificate, CodeError> {
    let n = code.n();
    let candidates: u128 = (1..=max_weight).map(|t| binomial(n, t)).sum();
    if candidates > ENUMERATION_BUDGET {
        return Err(CodeError::BudgetExceeded {
            needed: candidates,
            limit: ENUMERATION_BUDGET,
        });
    }
    let mut cert = DistanceCertificate {
        sector,
        max_weight,
        certified: true,
        counterexample: None,
        candidates,
    };
    if max_weight == 0 {
        return Ok(cert);
    }
    let basis = code.logical_basis()?;
    let detector = code.detector(sector);
    let opposite = basis.of(sector.other());
    let m = detector.nrows();
    // per-qubit column of [detector; opposite logicals]
    let columns = detector.vstack(opposite).transpose();
    let zero = BitVec::zeros(m + opposite.nrows());
    let syndrome_words = m / 64;
    let syndrome_tail = m % 64;
    let is_logical = |acc: &BitVec| {
        let words = acc.words();
        if words[..syndrome_words].iter().any(|&w| w != 0) {
            return false;
        }
        let tail_mask = (1u64 << syndrome_tail) - 1;
        if syndrome_tail > 0 && words[syndrome_words] & tail_mask != 0 {
            return false;
        }
        !acc.slice(m, opposite.nrows()).is_zero()
    };
    for t in 1..=max_weight.min(n) {
        let mut found = None;
        for_each_subset(n, t, &zero, |acc, q| acc.xor_assign(columns.row(q)), |s, acc| {
            if is_logical(acc) {
                found = Some(s.to_vec());
                return false;
            }
            true
        });
        if let Some(s) = found {
            cert.certified = false;
            cert.counterexample = Some(s);
            return Ok(cert);
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{concatenate, hadamard_family, repetition, ConcatSpec};
    use crate::css::{hgp, quantum_tanner_transform};

    fn surface(d: usize) -> CssCode {
        let r = repetition(d).unwrap();
        hgp(&r, &r)
    }

    fn lresc(outer: ClassicalCode, c: usize) -> CssCode {
        let p = concatenate(&ConcatSpec::new(outer, c)).unwrap();
        hgp(&p, &p)
    }

    fn c523() -> ClassicalCode {
        ClassicalCode::from_parity_check("[5,2,3]", "11010;01001;00110".parse().unwrap())
    }

    fn assert_basis_ok(code: &CssCode, l: &LogicalBasis) {
        assert!(code.hz.mul(&l.gx.transpose()).is_zero());
        assert!(code.hx.mul(&l.gz.transpose()).is_zero());
        assert!(l.pairing().is_identity());
    }

    #[test]
    fn surface_logicals_cross_once() {
        let code = surface(5);
        let l = canonical_logicals(&code).unwrap();
        assert_eq!(l.k(), 1);
        assert_basis_ok(&code, &l);
        assert_eq!(l.gx.row(0).support(), vec![0, 1, 2, 3, 4]);
        assert_eq!(l.gz.row(0).support(), vec![0, 5, 10, 15, 20]);
        assert_eq!(l.gx.row(0).overlap(l.gz.row(0)), 1);
    }

    #[test]
    fn lresc_52_logicals() {
        let code = lresc(hadamard_family(2).unwrap(), 2);
        let l = canonical_logicals(&code).unwrap();
        assert_eq!(l.k(), 4);
        assert_basis_ok(&code, &l);
        assert!(l.gx.row_weights().iter().all(|&w| w == 4));
    }

    #[test]
    fn generic_basis_matches_k() {
        let code = lresc(hadamard_family(2).unwrap(), 2);
        let l = generic_logicals(&code).unwrap();
        assert_eq!(l.k(), 4);
        assert_basis_ok(&code, &l);
    }

    #[test]
    fn codeword_10110_logical() {
        let code = lresc(c523(), 2);
        let l = canonical_logicals(&code).unwrap();
        let shape = code.product_shape().unwrap();
        // X̄1 on row 0 follows the first generator row 10110 ⊗ 11
        let expected: Vec<usize> = [0, 1, 4, 5, 6, 7].iter().map(|&b| shape.primary(0, b)).collect();
        assert_eq!(l.gx.row(0).support(), expected);
    }

    #[test]
    fn tunneling_on_lresc_52() {
        let code = lresc(hadamard_family(2).unwrap(), 2);
        for (sector, axis) in [(Sector::X, StringAxis::Horizontal), (Sector::Z, StringAxis::Vertical)] {
            let report = tunneling_check(&code, sector, axis, 0).unwrap();
            assert!(report.passed(), "{report:?}");
            assert_eq!(report.segments.len(), 3);
            assert_eq!(report.codewords.len(), 2);
            assert_eq!(report.relocations.len(), 1);
            assert!(report.segments.iter().all(|s| s.violated.len() == 1));
        }
    }

    #[test]
    fn tunneling_on_c523_spawns_extra_patches() {
        let code = lresc(c523(), 2);
        let report = tunneling_check(&code, Sector::X, StringAxis::Horizontal, 0).unwrap();
        assert!(report.passed());
        assert!(report.codewords.iter().all(|c| c.segments.len() >= 3));
    }

    #[test]
    fn tunneling_on_surface_is_empty() {
        let report = tunneling_check(&surface(5), Sector::X, StringAxis::Horizontal, 0).unwrap();
        assert!(report.is_empty());
        assert!(tunneling_check(&surface(5), Sector::X, StringAxis::Vertical, 0).is_err());
    }

    #[test]
    fn string_stabilizers_on_c523() {
        let code = lresc(c523(), 2);
        let z = string_stabilizer(&code, 0, 0, Sector::Z).unwrap();
        assert!(z.x.is_zero());
        assert!(code.hz.in_rowspace(&z.z));
        let x = string_stabilizer(&code, 2, 0, Sector::X).unwrap();
        assert!(code.hx.in_rowspace(&x.x));
        let shape = code.product_shape().unwrap();
        // primary part is h1 ⊗ g2
        let (c1, _) = code.provenance.as_ref().unwrap().parents();
        for b1 in 0..shape.n1 {
            for b2 in 0..shape.n2 {
                let expected = c1.h.get(2, b1) && [0, 1, 4, 5, 6, 7].contains(&b2);
                assert_eq!(x.x.get(shape.primary(b1, b2)), expected);
            }
        }
        let lp = contractible_loop(&code, 1, 2..7).unwrap();
        assert!(code.hx.in_rowspace(&lp.x));
        assert!(string_stabilizer(&code, 99, 0, Sector::Z).is_err());
    }

    #[test]
    fn surface_distance() {
        let code = surface(5);
        for sector in [Sector::X, Sector::Z] {
            let w = logical_weight_search(&code, sector, 16, 3).unwrap();
            assert_eq!(w.weight, 5);
            assert!(w.verified());
            let cert = distance_lower_bound_exhaustive(&code, sector, 4).unwrap();
            assert!(cert.certified);
        }
        let cert = distance_lower_bound_exhaustive(&code, Sector::X, 5).unwrap();
        assert!(!cert.certified);
        assert_eq!(cert.counterexample.unwrap().len(), 5);
    }

    #[test]
    fn zero_weight_is_trivially_certified() {
        let cert = distance_lower_bound_exhaustive(&surface(3), Sector::Z, 0).unwrap();
        assert!(cert.certified);
    }

    #[test]
    fn tanner_transform_keeps_distance_four() {
        let code = lresc(hadamard_family(2).unwrap(), 2);
        let out = quantum_tanner_transform(&code).unwrap();
        let l = canonical_logicals(&out).unwrap();
        assert_basis_ok(&out, &l);
        for sector in [Sector::X, Sector::Z] {
            let w = logical_weight_search(&out, sector, 32, 5).unwrap();
            assert!(w.verified());
            assert!(w.weight <= 4);
        }
    }

    #[test]
    fn pauli_commutation() {
        let a = PauliString::of_type(Sector::X, "110".parse().unwrap());
        let b = PauliString::of_type(Sector::Z, "100".parse().unwrap());
        let c = PauliString::of_type(Sector::Z, "110".parse().unwrap());
        assert!(!a.commutes_with(&b));
        assert!(a.commutes_with(&c));
        assert_eq!(PauliString::identity(3).weight(), 0);
    }
}
