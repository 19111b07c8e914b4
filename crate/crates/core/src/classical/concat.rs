use serde::{Deserialize, Serialize};

use super::{ClassicalCode, Layout1d};
use crate::error::CodeError;
use crate::gf2::BitMatrix;

/// Recipe for concatenating an outer code with length-`c` repetition codes.
///
/// `attach[e]` is the position inside the repetition segment that outer Tanner
/// edge `e` (row-major order over the outer `H`) connects to.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcatSpec {
    pub outer: ClassicalCode,
    pub c: usize,
    pub attach: Vec<usize>,
}

impl ConcatSpec {
    /// Every outer edge attached at segment position 0, i.e. `H ⊗ v`.
    pub fn new(outer: ClassicalCode, c: usize) -> Self {
        let attach = vec![0; outer.h.nnz()];
        Self { outer, c, attach }
    }

    pub fn is_default_attach(&self) -> bool {
        self.attach.iter().all(|&a| a == 0)
    }

    fn check(&self) -> Result<(), CodeError> {
        if self.c == 0 {
            return Err(CodeError::InvalidParameter("c must be at least 1".into()));
        }
        if self.attach.len() != self.outer.h.nnz() {
            return Err(CodeError::InvalidParameter(format!(
                "{} attach indices for {} outer edges",
                self.attach.len(),
                self.outer.h.nnz()
            )));
        }
        if let Some(&bad) = self.attach.iter().find(|&&a| a >= self.c) {
            return Err(CodeError::InvalidParameter(format!(
                "attach index {bad} outside segment of length {}",
                self.c
            )));
        }
        Ok(())
    }
}

/// Concatenation record kept on the resulting code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcatInfo {
    pub outer: Box<ClassicalCode>,
    pub c: usize,
    pub attach: Vec<usize>,
}

impl ConcatInfo {
    pub fn outer_rows(&self) -> usize {
        self.outer.m()
    }

    /// Outer bit (segment) that physical bit `b` belongs to.
    pub fn segment_of(&self, b: usize) -> usize {
        b / self.c
    }

    pub fn segment_bits(&self, segment: usize) -> std::ops::Range<usize> {
        segment * self.c..(segment + 1) * self.c
    }

    pub fn is_default_attach(&self) -> bool {
        self.attach.iter().all(|&a| a == 0)
    }
}

/// Builds `H^(c)`: attached outer rows stacked over `I ⊗ H_rep`, with
/// generator `G ⊗ 1_c`. `c = 1` returns the outer code unchanged.
pub fn concatenate(spec: &ConcatSpec) -> Result<ClassicalCode, CodeError> {
    spec.check()?;
    let outer = &spec.outer;
    let c = spec.c;
    if c == 1 {
        return Ok(outer.clone());
    }
    let (m_out, n_out) = (outer.m(), outer.n());
    let n = n_out * c;
    let m = m_out + n_out * (c - 1);
    let mut h = BitMatrix::zeros(m, n);
    for (e, (r, j)) in outer.h.entries().into_iter().enumerate() {
        h.set(r, j * c + spec.attach[e], true);
    }
    for j in 0..n_out {
        for i in 0..c - 1 {
            let row = m_out + j * (c - 1) + i;
            h.set(row, j * c + i, true);
            h.set(row, j * c + i + 1, true);
        }
    }
    let g_outer = outer.generator();
    let g = g_outer.kron(&BitMatrix::from_rows(c, vec![crate::gf2::BitVec::ones(c)]));
    let layout = concat_layout(&outer.h, c);
    let mut code = ClassicalCode {
        name: format!("{}({c})", outer.name),
        h,
        g: Some(g),
        layout,
        edges: Vec::new(),
        concat: Some(ConcatInfo {
            outer: Box::new(outer.clone()),
            c,
            attach: spec.attach.clone(),
        }),
    };
    code.retag_edges();
    Ok(code)
}

/// Canonical 1D layout of a concatenated code.
///
/// Segments are laid out contiguously with inner checks between neighbouring
/// bits; segment 0 is mirrored so its position-0 bit faces the rest of the
/// chain. Each outer check occupies the slot right after the segment holding
/// its lowest-index outer bit.
fn concat_layout(outer_h: &BitMatrix, c: usize) -> Layout1d {
    let (m_out, n_out) = (outer_h.nrows(), outer_h.ncols());
    let mut anchored: Vec<Vec<usize>> = vec![Vec::new(); n_out];
    for r in 0..m_out {
        if let Some(j) = outer_h.row(r).first_one() {
            anchored[j].push(r);
        } else if n_out > 0 {
            anchored[n_out - 1].push(r);
        }
    }
    let mut bits = vec![0.0; n_out * c];
    let mut checks = vec![0.0; m_out + n_out * (c - 1)];
    let mut slot = 0usize;
    for j in 0..n_out {
        for step in 0..c {
            let i = if j == 0 { c - 1 - step } else { step };
            bits[j * c + i] = slot as f64;
            slot += 1;
            if step + 1 < c {
                // inner check between this bit and the next one in slot order
                let inner = if j == 0 { i - 1 } else { i };
                checks[m_out + j * (c - 1) + inner] = slot as f64;
                slot += 1;
            }
        }
        for &r in &anchored[j] {
            checks[r] = slot as f64;
            slot += 1;
        }
    }
    Layout1d { bits, checks }
}

/// Spreads the outer edges of each segment over distinct inner bits so that
/// every physical bit carries at most one outer (long-range) check.
pub fn rebalance_attachments(spec: &ConcatSpec) -> Result<ConcatSpec, CodeError> {
    spec.check()?;
    let max_degree = spec.outer.max_bit_degree();
    if spec.c < max_degree {
        return Err(CodeError::InvalidParameter(format!(
            "c = {} is smaller than the maximal outer bit degree {max_degree}",
            spec.c
        )));
    }
    let mut used = vec![0usize; spec.outer.n()];
    let attach = spec
        .outer
        .h
        .entries()
        .into_iter()
        .map(|(_, j)| {
            let a = used[j];
            used[j] += 1;
            a
        })
        .collect();
    Ok(ConcatSpec {
        outer: spec.outer.clone(),
        c: spec.c,
        attach,
    })
}
