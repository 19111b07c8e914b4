//! Codespace-preserving linear maps on classical parents and the transversal
//! SWAP/CNOT gadgets they induce on concatenated codes and hypergraph products.

use serde::{Deserialize, Serialize};

use crate::classical::ClassicalCode;
use crate::css::{CssCode, Sector};
use crate::error::CodeError;
use crate::gf2::BitMatrix;
use crate::logical::LogicalBasis;

/// Elementary column operation on row vectors `x ↦ x·E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementaryOp {
    Swap(usize, usize),
    /// `x[dst] ^= x[src]`.
    Add { src: usize, dst: usize },
}

impl ElementaryOp {
    fn apply_to_columns(self, m: &mut BitMatrix) {
        for r in 0..m.nrows() {
            let row = m.row_mut(r);
            match self {
                ElementaryOp::Swap(a, b) => {
                    let (va, vb) = (row.get(a), row.get(b));
                    row.set(a, vb);
                    row.set(b, va);
                }
                ElementaryOp::Add { src, dst } => {
                    if row.get(src) {
                        row.flip(dst);
                    }
                }
            }
        }
    }
}

/// Product `E1·E2·…` of an operation sequence on `n` coordinates.
pub fn compose(n: usize, ops: &[ElementaryOp]) -> BitMatrix {
    let mut m = BitMatrix::identity(n);
    for &op in ops {
        op.apply_to_columns(&mut m);
    }
    m
}

/// Factors an invertible `U` into swaps and additions with `compose(ops) = U`.
///
/// Column operations reduce `U` to the identity row by row; since every
/// elementary operation is an involution, the reversed sequence rebuilds `U`.
pub fn decompose_elementary(u: &BitMatrix) -> Result<Vec<ElementaryOp>, CodeError> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(CodeError::Dimension("U must be square".into()));
    }
    let mut m = u.clone();
    let mut ops = Vec::new();
    for i in 0..n {
        let Some(j) = (i..n).find(|&j| m.get(i, j)) else {
            return Err(CodeError::InvalidParameter("U is singular".into()));
        };
        if j != i {
            let op = ElementaryOp::Swap(i, j);
            op.apply_to_columns(&mut m);
            ops.push(op);
        }
        for j in 0..n {
            if j != i && m.get(i, j) {
                let op = ElementaryOp::Add { src: i, dst: j };
                op.apply_to_columns(&mut m);
                ops.push(op);
            }
        }
    }
    ops.reverse();
    Ok(ops)
}

/// Permutation matrix exchanging coordinates `i` and `j`.
pub fn swap_matrix(n: usize, i: usize, j: usize) -> BitMatrix {
    compose(n, &[ElementaryOp::Swap(i, j)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearGadget {
    pub u: BitMatrix,
    pub elementary_seq: Vec<ElementaryOp>,
    /// `G·U = V·G`.
    pub v: BitMatrix,
    /// `H·U = W·H`.
    pub w: BitMatrix,
}

/// Coefficients expressing each row of `image` in the rows of `basis`.
fn express_rows(basis: &BitMatrix, image: &BitMatrix) -> Option<BitMatrix> {
    let rows = image
        .rows()
        .iter()
        .map(|r| basis.solve_rows(r))
        .collect::<Option<Vec<_>>>()?;
    Some(BitMatrix::from_rows(basis.nrows(), rows))
}

fn check_orthogonal(u: &BitMatrix) -> Result<(), CodeError> {
    if u.nrows() != u.ncols() || !u.mul(&u.transpose()).is_identity() {
        return Err(CodeError::InvalidParameter("U is not orthogonal over GF(2)".into()));
    }
    Ok(())
}

/// Accepts `U` when it maps the codespace to itself, returning `V` and `W`.
pub fn verify_codespace_transform(code: &ClassicalCode, u: &BitMatrix) -> Result<LinearGadget, CodeError> {
    if u.nrows() != code.n() {
        return Err(CodeError::Dimension(format!(
            "U is {}×{} for a code of length {}",
            u.nrows(),
            u.ncols(),
            code.n()
        )));
    }
    check_orthogonal(u)?;
    let g = code.generator();
    let v = express_rows(&g, &g.mul(u))
        .ok_or_else(|| CodeError::Verification("G·U leaves the row space of G".into()))?;
    let w = express_rows(&code.h, &code.h.mul(u))
        .ok_or_else(|| CodeError::Verification("H·U leaves the row space of H".into()))?;
    Ok(LinearGadget {
        u: u.clone(),
        elementary_seq: decompose_elementary(u)?,
        v,
        w,
    })
}

impl LinearGadget {
    /// Rechecks `G·U = V·G` and `H·U = W·H` on `code`.
    pub fn holds_on(&self, code: &ClassicalCode) -> bool {
        let g = code.generator();
        g.mul(&self.u) == self.v.mul(&g) && code.h.mul(&self.u) == self.w.mul(&code.h)
    }
}

/// Repeats each operation on coordinate `i` for every `i·copies + t`.
fn kron_ops(ops: &[ElementaryOp], copies: usize) -> Vec<ElementaryOp> {
    ops.iter()
        .flat_map(|&op| {
            (0..copies).map(move |t| match op {
                ElementaryOp::Swap(a, b) => ElementaryOp::Swap(a * copies + t, b * copies + t),
                ElementaryOp::Add { src, dst } => ElementaryOp::Add {
                    src: src * copies + t,
                    dst: dst * copies + t,
                },
            })
        })
        .collect()
}

/// Segment-transversal version of a gadget verified on the outer code of
/// `concat`: `U^(c) = U ⊗ I_c`, `V^(c) = V`, `W^(c) = diag(W, U ⊗ I_{c-1})`.
pub fn lift_to_concat(gadget: &LinearGadget, concat: &ClassicalCode) -> Result<LinearGadget, CodeError> {
    let Some(info) = &concat.concat else {
        return Ok(gadget.clone());
    };
    if !info.is_default_attach() {
        return Err(CodeError::InvalidParameter(
            "segment-transversal lifting needs every outer edge on segment position 0".into(),
        ));
    }
    let c = info.c;
    let u = gadget.u.kron(&BitMatrix::identity(c));
    let w = gadget.w.block_diag(&gadget.u.kron(&BitMatrix::identity(c - 1)));
    let lifted = LinearGadget {
        elementary_seq: kron_ops(&gadget.elementary_seq, c),
        u,
        v: gadget.v.clone(),
        w,
    };
    if !lifted.holds_on(concat) {
        return Err(CodeError::Verification(
            "lifted gadget does not preserve the concatenated code".into(),
        ));
    }
    Ok(lifted)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Act with `U` on the first parent: permutes patch rows, `Z̄` inherits `V`.
    Rows,
    /// Act with `U` on the second parent: permutes patch columns, `X̄` inherits `V`.
    Columns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Swap(usize, usize),
    /// Control, target.
    Cnot(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CssGadget {
    pub axis: Axis,
    /// Action on X-type vectors, `x ↦ x·UX`.
    pub ux: BitMatrix,
    /// Action on Z-type vectors; equals `UX^{-T}`.
    pub uz: BitMatrix,
    pub physical_circuit: Vec<Gate>,
}

impl CssGadget {
    /// X action of the physical circuit, applied gate by gate.
    pub fn circuit_x_action(&self) -> BitMatrix {
        let ops: Vec<ElementaryOp> = self
            .physical_circuit
            .iter()
            .map(|&g| match g {
                Gate::Swap(a, b) => ElementaryOp::Swap(a, b),
                Gate::Cnot(c, t) => ElementaryOp::Add { src: c, dst: t },
            })
            .collect();
        compose(self.ux.nrows(), &ops)
    }

    /// Checks that both stabilizer groups are preserved and `UX·UZᵀ = I`.
    pub fn preserves(&self, code: &CssCode) -> Result<bool, CodeError> {
        Ok(code.hx.row_equivalent(&code.hx.mul(&self.ux))?
            && code.hz.row_equivalent(&code.hz.mul(&self.uz))?
            && self.ux.mul(&self.uz.transpose()).is_identity())
    }
}

fn lift_gates(ops: &[ElementaryOp], index: impl Fn(usize) -> Vec<usize>) -> Vec<Gate> {
    let mut out = Vec::new();
    for &op in ops {
        match op {
            ElementaryOp::Swap(a, b) => {
                out.extend(index(a).into_iter().zip(index(b)).map(|(p, q)| Gate::Swap(p, q)));
            }
            ElementaryOp::Add { src, dst } => {
                out.extend(index(src).into_iter().zip(index(dst)).map(|(p, q)| Gate::Cnot(p, q)));
            }
        }
    }
    out
}

/// Patch-transversal gadget on an HGP code from a gadget on one parent.
///
/// With `Axis::Rows`, `UX = diag(U ⊗ I_n2, W ⊗ I_m2)`; with `Axis::Columns`,
/// `UX = diag(I_n1 ⊗ U, I_m1 ⊗ W^{-T})`. In both cases `UZ = UX^{-T}`.
pub fn lift_to_hgp(gadget: &LinearGadget, code: &CssCode, axis: Axis) -> Result<CssGadget, CodeError> {
    let shape = code
        .product_shape()
        .ok_or_else(|| CodeError::MissingProvenance("gadget lifting needs an HGP code".into()))?;
    if code.n() != shape.n1 * shape.n2 + shape.m1 * shape.m2 {
        return Err(CodeError::InvalidParameter(
            "gadget lifting needs the secondary sublattice".into(),
        ));
    }
    let (n_axis, m_axis) = match axis {
        Axis::Rows => (shape.n1, shape.m1),
        Axis::Columns => (shape.n2, shape.m2),
    };
    if gadget.u.nrows() != n_axis || gadget.w.nrows() != m_axis {
        return Err(CodeError::Dimension(format!(
            "gadget acts on [{}; {}] but the parent has {n_axis} bits and {m_axis} checks",
            gadget.u.nrows(),
            gadget.w.nrows()
        )));
    }
    let w_inv_t = gadget
        .w
        .inverse()
        .ok_or_else(|| CodeError::Verification("W is singular".into()))?
        .transpose();
    let u = &gadget.u;
    let (ux, uz, w_x) = match axis {
        Axis::Rows => (
            u.kron(&BitMatrix::identity(shape.n2))
                .block_diag(&gadget.w.kron(&BitMatrix::identity(shape.m2))),
            u.kron(&BitMatrix::identity(shape.n2))
                .block_diag(&w_inv_t.kron(&BitMatrix::identity(shape.m2))),
            gadget.w.clone(),
        ),
        Axis::Columns => (
            BitMatrix::identity(shape.n1)
                .kron(u)
                .block_diag(&BitMatrix::identity(shape.m1).kron(&w_inv_t)),
            BitMatrix::identity(shape.n1)
                .kron(u)
                .block_diag(&BitMatrix::identity(shape.m1).kron(&gadget.w)),
            w_inv_t.clone(),
        ),
    };
    let primary_ops = decompose_elementary(u)?;
    let secondary_ops = decompose_elementary(&w_x)?;
    let mut circuit = match axis {
        Axis::Rows => lift_gates(&primary_ops, |b1| (0..shape.n2).map(|b2| shape.primary(b1, b2)).collect()),
        Axis::Columns => lift_gates(&primary_ops, |b2| (0..shape.n1).map(|b1| shape.primary(b1, b2)).collect()),
    };
    circuit.extend(match axis {
        Axis::Rows => lift_gates(&secondary_ops, |c1| (0..shape.m2).map(|c2| shape.secondary(c1, c2)).collect()),
        Axis::Columns => lift_gates(&secondary_ops, |c2| (0..shape.m1).map(|c1| shape.secondary(c1, c2)).collect()),
    });
    let gadget = CssGadget {
        axis,
        ux,
        uz,
        physical_circuit: circuit,
    };
    if !gadget.preserves(code)? {
        return Err(CodeError::Verification(
            "lifted gadget does not preserve the stabilizer groups".into(),
        ));
    }
    Ok(gadget)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalAction {
    /// Row `i` holds the image of `X̄_i` in the `X̄` basis.
    pub x: BitMatrix,
    /// Row `i` holds the image of `Z̄_i` in the `Z̄` basis.
    pub z: BitMatrix,
}

impl LogicalAction {
    /// Logical action of a CNOT circuit: `X̄_c ↦ X̄_c X̄_t`.
    pub fn from_cnots(k: usize, cnots: &[(usize, usize)]) -> Self {
        let ops: Vec<ElementaryOp> = cnots
            .iter()
            .map(|&(c, t)| ElementaryOp::Add { src: c, dst: t })
            .collect();
        let x = compose(k, &ops);
        let z = x.inverse().expect("invertible").transpose();
        Self { x, z }
    }
}

fn reduce_images(
    basis: &LogicalBasis,
    stabilizers: &BitMatrix,
    sector: Sector,
    transform: &BitMatrix,
) -> Result<BitMatrix, CodeError> {
    let logicals = basis.of(sector);
    let opposite = basis.of(sector.other());
    let k = logicals.nrows();
    // coefficients a of the image satisfy a·P = image·Oᵀ, P the pairing, O the opposite basis
    let pairing = logicals.mul(&opposite.transpose());
    let inv = pairing
        .inverse()
        .ok_or_else(|| CodeError::Verification("logical pairing is singular".into()))?;
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let image = transform.combine_rows(logicals.row(i));
        let overlaps = opposite.mul_vec(&image);
        let coeffs = inv.transpose().mul_vec(&overlaps);
        let mut residue = image;
        residue.xor_assign(&logicals.combine_rows(&coeffs));
        if !stabilizers.in_rowspace(&residue) {
            return Err(CodeError::Verification(format!(
                "image of logical {i} leaves the logical-plus-stabilizer span"
            )));
        }
        rows.push(coeffs);
    }
    Ok(BitMatrix::from_rows(k, rows))
}

/// Induced action on the logical basis, checked for symplectic consistency.
pub fn extract_logical_action(gadget: &CssGadget, code: &CssCode) -> Result<LogicalAction, CodeError> {
    let basis = code.logical_basis()?;
    let x = reduce_images(&basis, &code.hx, Sector::X, &gadget.ux)?;
    let z = reduce_images(&basis, &code.hz, Sector::Z, &gadget.uz)?;
    let consistent = x.inverse().is_some_and(|inv| inv.transpose() == z);
    if !consistent {
        return Err(CodeError::Verification(
            "X and Z logical actions are not inverse transposes".into(),
        ));
    }
    Ok(LogicalAction { x, z })
}
