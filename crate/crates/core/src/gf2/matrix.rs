use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::vec::BitVec;
use crate::error::CodeError;

/// Dense GF(2) matrix stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

/// Reduced row echelon form together with its pivot columns.
///
/// `pivots[i]` is the pivot column of row `i`; rows `rank..` of `matrix` are zero.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row vectors, all of which must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        Self { cols, rows }
    }

    /// Builds a matrix from `(row, col)` positions; repeated positions cancel mod 2.
    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize)]) -> Result<Self, CodeError> {
        let mut m = Self::zeros(rows, cols);
        for &(r, c) in entries {
            if r >= rows || c >= cols {
                return Err(CodeError::Dimension(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            m.flip(r, c);
        }
        Ok(m)
    }

    /// Row supports, the sparse interchange form.
    pub fn from_supports(rows: usize, cols: usize, supports: &[Vec<usize>]) -> Result<Self, CodeError> {
        if supports.len() != rows {
            return Err(CodeError::Dimension(format!(
                "expected {rows} row supports, got {}",
                supports.len()
            )));
        }
        let mut m = Self::zeros(rows, cols);
        for (r, support) in supports.iter().enumerate() {
            for &c in support {
                if c >= cols {
                    return Err(CodeError::Dimension(format!("column {c} outside width {cols}")));
                }
                m.flip(r, c);
            }
        }
        Ok(m)
    }

    pub fn supports(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(BitVec::support).collect()
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r].flip(c);
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut BitVec {
        &mut self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    /// `rows[dst] ^= rows[src]`.
    #[inline]
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        if src < dst {
            let (lo, hi) = self.rows.split_at_mut(dst);
            hi[0].xor_assign(&lo[src]);
        } else {
            let (lo, hi) = self.rows.split_at_mut(src);
            lo[dst].xor_assign(&hi[0]);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BitVec::weight).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BitVec::weight).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for c in row.iter_ones() {
                w[c] += 1;
            }
        }
        w
    }

    /// Positions holding a one, row-major.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter_ones().map(move |c| (r, c)))
            .collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows(), "inner dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix {
            cols: other.cols,
            rows,
        }
    }

    /// `self · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        assert_eq!(self.cols, x.len(), "vector length differs from column count");
        let mut out = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        out
    }

    /// `yᵀ · self` for a row-combination vector `y`.
    pub fn combine_rows(&self, y: &BitVec) -> BitVec {
        assert_eq!(self.nrows(), y.len());
        let mut acc = BitVec::zeros(self.cols);
        for r in y.iter_ones() {
            acc.xor_assign(&self.rows[r]);
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let (ra, ca) = (self.nrows(), self.cols);
        let (rb, cb) = (other.nrows(), other.cols);
        let mut out = BitMatrix::zeros(ra * rb, ca * cb);
        for i in 0..ra {
            for a in self.rows[i].iter_ones() {
                for k in 0..rb {
                    for b in other.rows[k].iter_ones() {
                        out.set(i * rb + k, a * cb + b, true);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.nrows(), other.nrows(), "row counts differ");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.concat(b))
            .collect();
        BitMatrix {
            cols: self.cols + other.cols,
            rows,
        }
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }

    pub fn block_diag(&self, other: &BitMatrix) -> BitMatrix {
        let top = self.hstack(&BitMatrix::zeros(self.nrows(), other.cols));
        let bottom = BitMatrix::zeros(other.nrows(), self.cols).hstack(other);
        top.vstack(&bottom)
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: self.cols,
            rows: rows.iter().map(|&r| self.rows[r].clone()).collect(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: cols.len(),
            rows: self.rows.iter().map(|r| r.gather(cols)).collect(),
        }
    }

    /// Reduced row echelon form. Pivots are chosen at the lowest column index,
    /// and within a column at the lowest available row.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.rref_in_place(None);
        Echelon { matrix: m, pivots }
    }

    /// In-place elimination; when `rhs` is given the same row operations are
    /// applied to it. Returns the pivot columns in row order.
    fn rref_in_place(&mut self, mut rhs: Option<&mut BitVec>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.nrows() {
                break;
            }
            let Some(p) = (rank..self.nrows()).find(|&r| self.rows[r].get(c)) else {
                continue;
            };
            if p != rank {
                self.rows.swap(p, rank);
                if let Some(b) = rhs.as_deref_mut() {
                    let (x, y) = (b.get(p), b.get(rank));
                    b.set(p, y);
                    b.set(rank, x);
                }
            }
            for r in 0..self.nrows() {
                if r != rank && self.rows[r].get(c) {
                    self.add_row(rank, r);
                    if let Some(b) = rhs.as_deref_mut() {
                        if b.get(rank) {
                            b.flip(r);
                        }
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of `{x : self · x = 0}` as rows of the returned matrix.
    pub fn nullspace(&self) -> BitMatrix {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (i, &p) in ech.pivots.iter().enumerate() {
                if ech.matrix.get(i, free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        BitMatrix::from_rows(self.cols, basis)
    }

    /// Some `x` with `self · x = s`, or `None` when `s` is outside the column space.
    pub fn solve(&self, s: &BitVec) -> Option<BitVec> {
        assert_eq!(s.len(), self.nrows(), "right-hand side length differs from row count");
        let mut m = self.clone();
        let mut b = s.clone();
        let pivots = m.rref_in_place(Some(&mut b));
        if (pivots.len()..self.nrows()).any(|r| b.get(r)) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            if b.get(i) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    /// Coefficients `y` with `yᵀ · self = v`, i.e. `v` expressed in the row space.
    pub fn solve_rows(&self, v: &BitVec) -> Option<BitVec> {
        self.transpose().solve(v)
    }

    pub fn in_rowspace(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.cols);
        let ech = self.rref();
        let mut r = v.clone();
        for (i, &p) in ech.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(ech.matrix.row(i));
            }
        }
        r.is_zero()
    }

    /// True iff both matrices span the same row space.
    pub fn row_equivalent(&self, other: &BitMatrix) -> Result<bool, CodeError> {
        if self.cols != other.cols {
            return Err(CodeError::Dimension(format!(
                "column counts differ: {} vs {}",
                self.cols, other.cols
            )));
        }
        let a = self.rref();
        let b = other.rref();
        if a.pivots != b.pivots {
            return Ok(false);
        }
        Ok((0..a.rank()).all(|i| a.matrix.row(i) == b.matrix.row(i)))
    }

    /// Reduced row echelon form of a full-row-rank matrix, without column
    /// permutation. Returns the matrix and its pivot columns.
    pub fn standard_form(&self) -> Result<(BitMatrix, Vec<usize>), CodeError> {
        let ech = self.rref();
        if ech.rank() != self.nrows() {
            return Err(CodeError::RankDeficient {
                rows: self.nrows(),
                rank: ech.rank(),
            });
        }
        Ok((ech.matrix, ech.pivots))
    }

    /// Rows `0..rank` of the echelon form: an independent basis of the row space.
    pub fn row_basis(&self) -> BitMatrix {
        let ech = self.rref();
        let rank = ech.rank();
        BitMatrix {
            cols: self.cols,
            rows: ech.matrix.rows.into_iter().take(rank).collect(),
        }
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.nrows();
        if n != self.cols {
            return None;
        }
        if n == 0 {
            return Some(BitMatrix::zeros(0, 0));
        }
        let aug = self.hstack(&BitMatrix::identity(n));
        let ech = aug.rref();
        if ech.rank() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(ech.matrix.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.cols
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| r.weight() == 1 && r.get(i))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl FromStr for BitMatrix {
    type Err = CodeError;

    /// Rows separated by `;` or newlines, e.g. `"110;011"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows: Vec<BitVec> = s
            .split([';', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        let cols = rows.first().map_or(0, BitVec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(CodeError::Parse("ragged matrix rows".into()));
        }
        Ok(BitMatrix::from_rows(cols, rows))
    }
}

#[derive(Serialize, Deserialize)]
struct SparseMatrix {
    rows: usize,
    cols: usize,
    supports: Vec<Vec<usize>>,
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SparseMatrix {
            rows: self.nrows(),
            cols: self.cols,
            supports: self.supports(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let sparse = SparseMatrix::deserialize(deserializer)?;
        BitMatrix::from_supports(sparse.rows, sparse.cols, &sparse.supports)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, density: f64) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.random_bool(density) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    // The [5,2,3] code written out in the worked boundary-dynamics example.
    fn h523() -> BitMatrix {
        m("11010;01001;00110")
    }

    fn g523() -> BitMatrix {
        m("10110;01111")
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(m("111").rank(), 1);
        assert_eq!(h523().rank(), 3);
        assert_eq!(BitMatrix::zeros(0, 4).rank(), 0);
    }

    #[test]
    fn nullspace_examples() {
        let ns = m("111").nullspace();
        assert_eq!(ns.nrows(), 2);
        assert!(ns.row_equivalent(&m("101;011")).unwrap());
        assert_eq!(BitMatrix::identity(4).nullspace().nrows(), 0);
        let ns = h523().nullspace();
        assert_eq!(ns.nrows(), 2);
        assert!(ns.row_equivalent(&g523()).unwrap());
        assert!(h523().mul(&ns.transpose()).is_zero());
    }

    #[test]
    fn solve_examples() {
        let s: BitVec = "101".parse().unwrap();
        assert_eq!(BitMatrix::identity(3).solve(&s), Some(s.clone()));
        assert_eq!(m("1;1;1").solve(&s), None);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 10, 15, 0.3);
            let x0 = BitVec::from_bools(&(0..15).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>());
            let s = a.mul_vec(&x0);
            let x = a.solve(&s).expect("consistent system");
            assert_eq!(a.mul_vec(&x), s);
        }
    }

    #[test]
    fn row_equivalence_examples() {
        let a = m("1100;0110;1111");
        let permuted = m("1111;1100;0110");
        assert!(a.row_equivalent(&permuted).unwrap());
        assert!(!m("111").row_equivalent(&m("100")).unwrap());
        let swap23 = m("100;001;010");
        assert!(m("111").row_equivalent(&m("111").mul(&swap23)).unwrap());
        assert!(m("11").row_equivalent(&m("111")).is_err());
    }

    #[test]
    fn standard_form_examples() {
        let (g, pivots) = g523().standard_form().unwrap();
        assert_eq!(g, g523());
        assert_eq!(pivots, vec![0, 1]);
        let (g, _) = m("01111;10110").standard_form().unwrap();
        assert_eq!(g, g523());
        assert!(m("110;110").standard_form().is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 20 {
            let a = random_matrix(&mut rng, 3, 6, 0.5);
            if a.rank() < 3 {
                continue;
            }
            let (s, pivots) = a.standard_form().unwrap();
            assert!(s.row_equivalent(&a).unwrap());
            assert_eq!(s.select_columns(&pivots), BitMatrix::identity(3));
            assert!(pivots.windows(2).all(|w| w[0] < w[1]));
            for (i, &p) in pivots.iter().enumerate() {
                assert!((0..p).all(|c| !s.get(i, c)), "pivot must be leading one");
            }
            done += 1;
        }
    }

    #[test]
    fn kron_and_stacks() {
        let a = m("11");
        let b = m("10;01");
        assert_eq!(a.kron(&b), m("1010;0101"));
        assert_eq!(a.hstack(&m("0")), m("110"));
        assert_eq!(a.vstack(&m("01")), m("11;01"));
        assert_eq!(a.block_diag(&m("1")), m("110;001"));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m("110;011;001");
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m("11;11").inverse().is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 0usize..64, cols in 1usize..64, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, rows, cols, 0.3);
            let ns = a.nullspace();
            prop_assert_eq!(a.rank() + ns.nrows(), cols);
            prop_assert_eq!(a.rank(), a.transpose().rank());
            prop_assert!(a.mul(&ns.transpose()).is_zero());
            prop_assert_eq!(ns.rank(), ns.nrows());
        }

        #[test]
        fn solve_roundtrip(rows in 1usize..40, cols in 1usize..40, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, rows, cols, 0.4);
            let s = BitVec::from_bools(&(0..rows).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>());
            match a.solve(&s) {
                Some(x) => prop_assert_eq!(a.mul_vec(&x), s),
                None => {
                    let aug = a.hstack(&BitMatrix::from_rows(1, s.iter_ones().fold(
                        vec![BitVec::zeros(1); rows],
                        |mut acc, r| { acc[r].set(0, true); acc },
                    )));
                    prop_assert!(aug.rank() > a.rank());
                }
            }
        }

        #[test]
        fn row_equivalence_is_an_equivalence(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, 6, 10, 0.4);
            // b = T a for a random invertible T, c = T' b
            let mut b = a.clone();
            let mut c = a.clone();
            for _ in 0..20 {
                let (i, j) = (rng.random_range(0..6), rng.random_range(0..6));
                if i != j { b.add_row(i, j); }
                let (i, j) = (rng.random_range(0..6), rng.random_range(0..6));
                if i != j { c.add_row(i, j); }
            }
            prop_assert!(a.row_equivalent(&a).unwrap());
            prop_assert_eq!(a.row_equivalent(&b).unwrap(), b.row_equivalent(&a).unwrap());
            prop_assert!(a.row_equivalent(&b).unwrap() && b.row_equivalent(&c).unwrap());
            prop_assert!(a.row_equivalent(&c).unwrap());
        }
    }
}
