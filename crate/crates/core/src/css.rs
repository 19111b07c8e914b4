//! CSS codes, the hypergraph product and the quantum Tanner transform.

use serde::{Deserialize, Serialize};

use crate::alist::serde_alist;
use crate::classical::{min_distance, ClassicalCode, EdgeTag};
use crate::error::CodeError;
use crate::gf2::{BitMatrix, BitVec};
use crate::logical::LogicalBasis;

/// Chebyshev range above which a check–qubit edge counts as long-range.
pub const DEFAULT_RANGE_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    X,
    Z,
}

impl Sector {
    pub fn other(self) -> Self {
        match self {
            Sector::X => Sector::Z,
            Sector::Z => Sector::X,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sublattice {
    /// (bit, bit) qubits.
    Primary,
    /// (check, check) qubits.
    Secondary,
}

/// `[x, y]` in lattice units.
pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub qubits: Vec<Point>,
    pub x_checks: Vec<Point>,
    pub z_checks: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Hgp {
        code1: ClassicalCode,
        code2: ClassicalCode,
    },
    /// Primary-sublattice code obtained from `hgp(code1, code2)`.
    TannerTransform {
        code1: ClassicalCode,
        code2: ClassicalCode,
    },
}

impl Provenance {
    pub fn parents(&self) -> (&ClassicalCode, &ClassicalCode) {
        match self {
            Provenance::Hgp { code1, code2 } | Provenance::TannerTransform { code1, code2 } => {
                (code1, code2)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CssCode {
    pub name: String,
    #[serde(with = "serde_alist")]
    pub hx: BitMatrix,
    #[serde(with = "serde_alist")]
    pub hz: BitMatrix,
    pub n_qubits: usize,
    pub sublattice: Vec<Sublattice>,
    pub embedding: Option<Embedding>,
    pub logicals: Option<LogicalBasis>,
    pub provenance: Option<Provenance>,
}

impl CssCode {
    /// Bare code with every qubit primary and no embedding.
    pub fn new(name: impl Into<String>, hx: BitMatrix, hz: BitMatrix) -> Result<Self, CodeError> {
        if hx.ncols() != hz.ncols() {
            return Err(CodeError::Dimension(format!(
                "HX has {} columns, HZ has {}",
                hx.ncols(),
                hz.ncols()
            )));
        }
        let n = hx.ncols();
        Ok(Self {
            name: name.into(),
            hx,
            hz,
            n_qubits: n,
            sublattice: vec![Sublattice::Primary; n],
            embedding: None,
            logicals: None,
            provenance: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n_qubits
    }

    /// `N - rank(HX) - rank(HZ)`.
    pub fn k(&self) -> usize {
        self.n_qubits - self.hx.rank() - self.hz.rank()
    }

    /// Check matrix of the given type.
    pub fn checks(&self, sector: Sector) -> &BitMatrix {
        match sector {
            Sector::X => &self.hx,
            Sector::Z => &self.hz,
        }
    }

    /// Matrix whose syndrome detects `sector`-type errors (X errors are seen by Z checks).
    pub fn detector(&self, sector: Sector) -> &BitMatrix {
        self.checks(sector.other())
    }

    /// Shape of the product when the code came from one.
    pub fn product_shape(&self) -> Option<ProductShape> {
        let (c1, c2) = self.provenance.as_ref()?.parents();
        Some(ProductShape {
            n1: c1.n(),
            n2: c2.n(),
            m1: c1.m(),
            m2: c2.m(),
        })
    }

    /// Stored logical basis, or the canonical one derived from the parents,
    /// or a generic basis as a last resort.
    pub fn logical_basis(&self) -> Result<LogicalBasis, CodeError> {
        if let Some(l) = &self.logicals {
            return Ok(l.clone());
        }
        crate::logical::canonical_logicals(self).or_else(|_| crate::logical::generic_logicals(self))
    }

    /// Every violated invariant; empty when the code is consistent.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n_qubits;
        if self.hx.ncols() != n || self.hz.ncols() != n || self.sublattice.len() != n {
            out.push(Violation::Shape(format!(
                "N = {n}, HX width {}, HZ width {}, sublattice {}",
                self.hx.ncols(),
                self.hz.ncols(),
                self.sublattice.len()
            )));
            return out;
        }
        if let Some(e) = &self.embedding {
            if e.qubits.len() != n || e.x_checks.len() != self.hx.nrows() || e.z_checks.len() != self.hz.nrows() {
                out.push(Violation::Shape("embedding size differs from the code".into()));
            }
        }
        for (z, x) in self.hz.mul(&self.hx.transpose()).entries() {
            out.push(Violation::Anticommuting { x_check: x, z_check: z });
        }
        if let Some(l) = &self.logicals {
            if l.gx.ncols() != n || l.gz.ncols() != n || l.gx.nrows() != l.gz.nrows() {
                out.push(Violation::Shape("logical basis size differs from the code".into()));
                return out;
            }
            for (check, logical) in self.hz.mul(&l.gx.transpose()).entries() {
                out.push(Violation::Logical {
                    sector: Sector::X,
                    logical,
                    check,
                });
            }
            for (check, logical) in self.hx.mul(&l.gz.transpose()).entries() {
                out.push(Violation::Logical {
                    sector: Sector::Z,
                    logical,
                    check,
                });
            }
            let rank = l.pairing().rank();
            if rank != l.gx.nrows() {
                out.push(Violation::Pairing {
                    rank,
                    k: l.gx.nrows(),
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductShape {
    pub n1: usize,
    pub n2: usize,
    pub m1: usize,
    pub m2: usize,
}

impl ProductShape {
    pub fn primary(&self, b1: usize, b2: usize) -> usize {
        b1 * self.n2 + b2
    }

    pub fn secondary(&self, c1: usize, c2: usize) -> usize {
        self.n1 * self.n2 + c1 * self.m2 + c2
    }

    pub fn x_check(&self, c1: usize, b2: usize) -> usize {
        c1 * self.n2 + b2
    }

    pub fn z_check(&self, b1: usize, c2: usize) -> usize {
        b1 * self.m2 + c2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    Shape(String),
    Anticommuting { x_check: usize, z_check: usize },
    /// A logical of type `sector` anticommutes with a check of the other type.
    Logical { sector: Sector, logical: usize, check: usize },
    Pairing { rank: usize, k: usize },
}

/// Hypergraph product with `HX = (H1⊗I | I⊗H2ᵀ)` and `HZ = (I⊗H2 | H1ᵀ⊗I)`.
///
/// Qubit `(b1, b2)` sits at `(x, y) = (pos2(b2), pos1(b1))`: the second parent
/// runs horizontally and the first vertically.
pub fn hgp(code1: &ClassicalCode, code2: &ClassicalCode) -> CssCode {
    let (h1, h2) = (&code1.h, &code2.h);
    let (n1, m1, n2, m2) = (code1.n(), code1.m(), code2.n(), code2.m());
    let hx = h1
        .kron(&BitMatrix::identity(n2))
        .hstack(&BitMatrix::identity(m1).kron(&h2.transpose()));
    let hz = BitMatrix::identity(n1)
        .kron(h2)
        .hstack(&h1.transpose().kron(&BitMatrix::identity(m2)));
    let (l1, l2) = (&code1.layout, &code2.layout);
    let grid = |ys: &[f64], xs: &[f64]| -> Vec<Point> {
        ys.iter()
            .flat_map(|&y| xs.iter().map(move |&x| [x, y]))
            .collect()
    };
    let mut qubits = grid(&l1.bits, &l2.bits);
    qubits.extend(grid(&l1.checks, &l2.checks));
    let embedding = Embedding {
        qubits,
        x_checks: grid(&l1.checks, &l2.bits),
        z_checks: grid(&l1.bits, &l2.checks),
    };
    let mut sublattice = vec![Sublattice::Primary; n1 * n2];
    sublattice.extend(std::iter::repeat_n(Sublattice::Secondary, m1 * m2));
    CssCode {
        name: format!("hgp({}, {})", code1.name, code2.name),
        hx,
        hz,
        n_qubits: n1 * n2 + m1 * m2,
        sublattice,
        embedding: Some(embedding),
        logicals: None,
        provenance: Some(Provenance::Hgp {
            code1: code1.clone(),
            code2: code2.clone(),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssParameters {
    pub n: usize,
    pub k: usize,
    /// `min(d1, d2, d1ᵀ, d2ᵀ)` from the parents; `None` when unavailable.
    pub d_formula: Option<usize>,
}

/// Distance of `ker(h)`, with `None` standing for infinity when the kernel is trivial.
fn kernel_distance(name: &str, h: BitMatrix) -> Result<Option<usize>, CodeError> {
    let code = ClassicalCode::from_parity_check(name, h);
    if code.k() == 0 {
        return Ok(None);
    }
    min_distance(&code).map(Some)
}

pub fn css_parameters(code: &CssCode) -> CssParameters {
    let d_formula = match &code.provenance {
        Some(Provenance::Hgp { code1, code2 }) => {
            let ds = [
                kernel_distance("d1", code1.h.clone()),
                kernel_distance("d2", code2.h.clone()),
                kernel_distance("d1t", code1.h.transpose()),
                kernel_distance("d2t", code2.h.transpose()),
            ];
            if ds.iter().any(Result::is_err) {
                None
            } else {
                ds.into_iter().filter_map(|d| d.ok().flatten()).min()
            }
        }
        _ => None,
    };
    CssParameters {
        n: code.n(),
        k: code.k(),
        d_formula,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusEdge {
    /// Type of the check.
    pub check_type: Sector,
    pub check: usize,
    pub qubit: usize,
    pub range: f64,
    pub tag: EdgeTag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCensus {
    pub threshold: f64,
    pub total_edges: usize,
    pub long_range_edges: usize,
    pub edges: Vec<CensusEdge>,
}

fn chebyshev(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
}

pub fn edge_census(code: &CssCode, range_threshold: f64) -> Result<EdgeCensus, CodeError> {
    let emb = code.embedding.as_ref().ok_or(CodeError::MissingCoordinates)?;
    let mut edges = Vec::with_capacity(code.hx.nnz() + code.hz.nnz());
    for (check_type, h, at) in [
        (Sector::X, &code.hx, &emb.x_checks),
        (Sector::Z, &code.hz, &emb.z_checks),
    ] {
        for (check, qubit) in h.entries() {
            let range = chebyshev(at[check], emb.qubits[qubit]);
            let tag = if range > range_threshold {
                EdgeTag::LongRange
            } else {
                EdgeTag::Local
            };
            edges.push(CensusEdge {
                check_type,
                check,
                qubit,
                range,
                tag,
            });
        }
    }
    let long_range_edges = edges.iter().filter(|e| e.tag == EdgeTag::LongRange).count();
    Ok(EdgeCensus {
        threshold: range_threshold,
        total_edges: edges.len(),
        long_range_edges,
        edges,
    })
}

fn lexicographic(a: Point, b: Point) -> std::cmp::Ordering {
    a[1].total_cmp(&b[1]).then(a[0].total_cmp(&b[0]))
}

/// Removes qubit `q` from the code by measuring it: checks of the measured
/// type drop `q`, and checks of the other type touching `q` are multiplied by
/// the lexicographically first of them, which is then discarded.
fn measure_out(
    eliminate: &mut Vec<BitVec>,
    eliminate_at: &mut Vec<Point>,
    restrict: &mut [BitVec],
    q: usize,
) {
    let touching: Vec<usize> = (0..eliminate.len()).filter(|&r| eliminate[r].get(q)).collect();
    if let Some(&pivot) = touching
        .iter()
        .min_by(|&&a, &&b| lexicographic(eliminate_at[a], eliminate_at[b]).then(a.cmp(&b)))
    {
        let p = eliminate[pivot].clone();
        for &r in &touching {
            if r != pivot {
                eliminate[r].xor_assign(&p);
            }
        }
        eliminate.remove(pivot);
        eliminate_at.remove(pivot);
    }
    for row in restrict.iter_mut() {
        row.set(q, false);
    }
}

/// Quantum Tanner transform of an HGP code: every secondary qubit is measured
/// out, in Z when `c1 + c2` is even and in X otherwise (switching basis when the
/// preferred one would consume a logical qubit). The result lives on the
/// primary sublattice only and keeps the canonical logical operators.
pub fn quantum_tanner_transform(code: &CssCode) -> Result<CssCode, CodeError> {
    let Some(Provenance::Hgp { code1, code2 }) = &code.provenance else {
        return Err(CodeError::MissingProvenance(
            "quantum Tanner transform needs an HGP code".into(),
        ));
    };
    let shape = code.product_shape().expect("HGP provenance");
    let emb = code.embedding.as_ref().ok_or(CodeError::MissingCoordinates)?;
    let mut hx = code.hx.clone().into_rows();
    let mut hz = code.hz.clone().into_rows();
    let mut x_at = emb.x_checks.clone();
    let mut z_at = emb.z_checks.clone();
    let mut order: Vec<(usize, usize)> = (0..shape.m1)
        .flat_map(|c1| (0..shape.m2).map(move |c2| (c1, c2)))
        .collect();
    order.sort_by(|&(a1, a2), &(b1, b2)| {
        lexicographic(
            emb.qubits[shape.secondary(a1, a2)],
            emb.qubits[shape.secondary(b1, b2)],
        )
    });
    for (c1, c2) in order {
        let q = shape.secondary(c1, c2);
        let in_x = hx.iter().any(|r| r.get(q));
        let in_z = hz.iter().any(|r| r.get(q));
        let prefer_z = (c1 + c2) % 2 == 0;
        // measuring Z needs an X check to absorb the anticommutation, and vice versa
        let measure_z = match (in_x, in_z) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => prefer_z,
            (false, false) => {
                return Err(CodeError::Verification(format!(
                    "secondary qubit ({c1}, {c2}) is not checked"
                )))
            }
        };
        if measure_z {
            measure_out(&mut hx, &mut x_at, &mut hz, q);
        } else {
            measure_out(&mut hz, &mut z_at, &mut hx, q);
        }
    }
    let n = shape.n1 * shape.n2;
    let keep: Vec<usize> = (0..n).collect();
    let finish = |rows: Vec<BitVec>, at: Vec<Point>| -> (BitMatrix, Vec<Point>) {
        let (rows, at): (Vec<BitVec>, Vec<Point>) = rows
            .into_iter()
            .map(|r| r.gather(&keep))
            .zip(at)
            .filter(|(r, _)| !r.is_zero())
            .unzip();
        (BitMatrix::from_rows(n, rows), at)
    };
    let (hx, x_checks) = finish(hx, x_at);
    let (hz, z_checks) = finish(hz, z_at);
    let logicals = code.logicals.as_ref().map(|l| LogicalBasis {
        gx: l.gx.select_columns(&keep),
        gz: l.gz.select_columns(&keep),
    });
    let out = CssCode {
        name: format!("tanner({})", code.name),
        hx,
        hz,
        n_qubits: n,
        sublattice: vec![Sublattice::Primary; n],
        embedding: Some(Embedding {
            qubits: emb.qubits[..n].to_vec(),
            x_checks,
            z_checks,
        }),
        logicals,
        provenance: Some(Provenance::TannerTransform {
            code1: code1.clone(),
            code2: code2.clone(),
        }),
    };
    let before = code.k();
    let after = out.k();
    if after != before {
        return Err(CodeError::Verification(format!(
            "transform changed K from {before} to {after}"
        )));
    }
    Ok(out)
}
