use lresc_core::classical::{
    concatenate, decompose_checks, hadamard_family, min_distance, random_ldpc, rebalance_attachments,
    repetition, ClassicalCode, ConcatSpec,
};
use lresc_core::css::{css_parameters, edge_census, hgp, quantum_tanner_transform, Sector};
use lresc_core::gates::{
    compose, extract_logical_action, lift_to_concat, lift_to_hgp, swap_matrix, verify_codespace_transform,
    Axis, Gate,
};
use lresc_core::logical::{
    canonical_logicals, distance_lower_bound_exhaustive, logical_weight_search, string_stabilizer,
    tunneling_check, StringAxis,
};
use lresc_core::{BitMatrix, BitVec};
use proptest::prelude::*;

fn parse(h: &str) -> BitMatrix {
    h.parse().unwrap()
}

fn outer_codes() -> Vec<ClassicalCode> {
    vec![
        hadamard_family(2).unwrap(),
        ClassicalCode::from_parity_check("[5,2,3]", parse("11010;01001;00110")),
        ClassicalCode::from_parity_check("[6,2,4]", parse("101010;101001;100110;011010")),
    ]
}

fn random_matrix(rows: usize, cols: usize, bits: &[bool]) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if bits[(r * cols + c) % bits.len()] {
                m.set(r, c, true);
            }
        }
    }
    m
}

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| random_matrix(r, c, &bits))
    })
}

/// Codewords of `h` by enumeration over all `2^n` words.
fn codeword_set(h: &BitMatrix) -> Vec<Vec<usize>> {
    let n = h.ncols();
    (0u32..1 << n)
        .map(|mask| BitVec::from_bools(&(0..n).map(|i| (mask >> i) & 1 == 1).collect::<Vec<_>>()))
        .filter(|x| h.mul_vec(x).is_zero())
        .map(|x| x.support())
        .collect()
}

/// Punctured codeword set of `h` restricted to its first `n` bits.
fn punctured_set(h: &BitMatrix, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = codeword_set(h)
        .into_iter()
        .map(|s| s.into_iter().filter(|&b| b < n).collect())
        .collect();
    out.sort();
    out.dedup();
    out
}

#[test]
fn concatenation_laws_on_named_outer_codes() {
    for outer in outer_codes() {
        let d = min_distance(&outer).unwrap();
        for c in 1..=4 {
            let code = concatenate(&ConcatSpec::new(outer.clone(), c)).unwrap();
            code.validate().unwrap();
            assert_eq!(code.n(), outer.n() * c);
            assert_eq!(code.k(), outer.k());
            assert_eq!(min_distance(&code).unwrap(), d * c);
            let inner = if c > 1 { outer.n() * (c - 1) * 2 } else { 0 };
            assert_eq!(code.h.nnz(), outer.h.nnz() + inner);
            assert!(code.k() + min_distance(&code).unwrap() <= code.n() + 1);
        }
    }
}

#[test]
fn six_two_four_outer_code() {
    let outer = &outer_codes()[2];
    assert_eq!((outer.n(), outer.k(), min_distance(outer).unwrap()), (6, 2, 4));
    assert_eq!(outer.h.nnz(), 12);
    assert!(outer.h.row_weights().iter().all(|&w| w == 3));
}

#[test]
fn hadamard_equidistance() {
    for k in 2..=5 {
        let code = hadamard_family(k).unwrap();
        code.validate().unwrap();
        let g = code.generator();
        let mut word = BitVec::zeros(code.n());
        for i in 1u64..(1 << k) {
            word.xor_assign(g.row(i.trailing_zeros() as usize));
            assert_eq!(word.weight(), 1 << (k - 1));
        }
    }
}

#[test]
fn repetition_five_has_distance_five() {
    assert_eq!(min_distance(&repetition(5).unwrap()).unwrap(), 5);
}

#[test]
fn hadamard_k4_is_15_4_8() {
    let code = hadamard_family(4).unwrap();
    assert_eq!((code.n(), code.k(), min_distance(&code).unwrap()), (15, 4, 8));
}

#[test]
fn random_ldpc_median_distance() {
    let mut ds: Vec<usize> = (0..100)
        .map(|seed| min_distance(&random_ldpc(16, 12, 3, seed).unwrap()).unwrap())
        .collect();
    ds.sort_unstable();
    assert!(ds[50] >= 4, "median distance {}", ds[50]);
}

#[test]
fn decompose_checks_preserves_punctured_codewords() {
    let c523 = &outer_codes()[1];
    let out = decompose_checks(c523, 3).unwrap();
    assert!(out.h.row_weights().iter().all(|&w| w <= 3));
    assert_eq!(out.k(), c523.k());
    assert_eq!(punctured_set(&out.h, 5), punctured_set(&c523.h, 5));

    // the weight-5 row pattern: three checks and two auxiliary bits
    let w5 = ClassicalCode::from_parity_check("w5", parse("11111"));
    let out = decompose_checks(&w5, 3).unwrap();
    assert_eq!((out.m(), out.n() - 5), (3, 2));
    assert_eq!(punctured_set(&out.h, 5), punctured_set(&w5.h, 5));
}

#[test]
fn rebalancing_c523() {
    let spec = ConcatSpec::new(outer_codes()[1].clone(), 2);
    let before = concatenate(&spec).unwrap();
    let after = concatenate(&rebalance_attachments(&spec).unwrap()).unwrap();
    let params = |c: &ClassicalCode| (c.n(), c.k(), min_distance(c).unwrap());
    assert_eq!(params(&before), (10, 2, 6));
    assert_eq!(params(&after), (10, 2, 6));
    let outer_rows = 3;
    for b in 0..after.n() {
        let long = (0..outer_rows).filter(|&r| after.h.get(r, b)).count();
        assert!(long <= 1, "bit {b} in {long} outer checks");
    }
}

#[test]
fn rebalancing_parity_c4_preserves_parameters() {
    let spec = ConcatSpec::new(hadamard_family(2).unwrap(), 4);
    let after = concatenate(&rebalance_attachments(&spec).unwrap()).unwrap();
    assert_eq!((after.k(), min_distance(&after).unwrap()), (2, 8));
}

#[test]
fn surface_family_parameters() {
    for a in 2..=8 {
        for b in 2..=8 {
            let code = hgp(&repetition(a).unwrap(), &repetition(b).unwrap());
            assert_eq!(code.n(), a * b + (a - 1) * (b - 1));
            assert_eq!(code.k(), 1);
        }
    }
}

#[test]
fn lresc_parameters_and_census() {
    for (outer, c, total) in [(0, 4, 924), (2, 2, 1056)] {
        let parent = concatenate(&ConcatSpec::new(outer_codes()[outer].clone(), c)).unwrap();
        let code = hgp(&parent, &parent);
        let p = css_parameters(&code);
        assert_eq!((p.n, p.k, p.d_formula), (244, 4, Some(8)));
        let census = edge_census(&code, 2.0).unwrap();
        assert_eq!(census.total_edges, total);
    }
}

#[test]
fn tunneling_property_b_for_all_outer_codes() {
    for outer in outer_codes() {
        for c in 1..=3 {
            let parent = concatenate(&ConcatSpec::new(outer.clone(), c)).unwrap();
            let code = hgp(&parent, &parent);
            for (sector, axis) in [(Sector::X, StringAxis::Horizontal), (Sector::Z, StringAxis::Vertical)] {
                for patch in 0..outer.n() {
                    let report = tunneling_check(&code, sector, axis, patch).unwrap();
                    assert!(report.passed(), "{} c={c} patch {patch}: {report:?}", outer.name);
                }
            }
        }
    }
}

#[test]
fn string_stabilizers_are_members() {
    for outer in outer_codes() {
        let parent = concatenate(&ConcatSpec::new(outer, 2)).unwrap();
        let code = hgp(&parent, &parent);
        for h_row in 0..parent.m() {
            for g_row in 0..parent.k() {
                for sector in [Sector::X, Sector::Z] {
                    let op = string_stabilizer(&code, h_row, g_row, sector).unwrap();
                    assert!(code.checks(sector).in_rowspace(op.part(sector)));
                }
            }
        }
    }
}

#[test]
fn search_never_undercuts_certificates() {
    let parent = concatenate(&ConcatSpec::new(hadamard_family(2).unwrap(), 2)).unwrap();
    let code = hgp(&parent, &parent);
    for sector in [Sector::X, Sector::Z] {
        let cert = distance_lower_bound_exhaustive(&code, sector, 3).unwrap();
        assert!(cert.certified);
        let w = logical_weight_search(&code, sector, 64, 11).unwrap();
        assert!(w.verified());
        assert!(w.weight > cert.max_weight);
        assert_eq!(w.weight, 4);
    }
}

#[test]
fn gadget_invariants_for_every_parity_swap() {
    let outer = hadamard_family(2).unwrap();
    for c in 1..=3 {
        let parent = concatenate(&ConcatSpec::new(outer.clone(), c)).unwrap();
        let code = hgp(&parent, &parent);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let base = verify_codespace_transform(&outer, &swap_matrix(3, i, j)).unwrap();
            let lifted = lift_to_concat(&base, &parent).unwrap();
            for axis in [Axis::Rows, Axis::Columns] {
                let gadget = lift_to_hgp(&lifted, &code, axis).unwrap();
                assert!(gadget.ux.mul(&gadget.uz.transpose()).is_identity());
                assert!(code.hx.row_equivalent(&code.hx.mul(&gadget.ux)).unwrap());
                assert!(code.hz.row_equivalent(&code.hz.mul(&gadget.uz)).unwrap());
                assert!(gadget.physical_circuit.iter().all(|g| matches!(g, Gate::Swap(..))));
                let once = gadget.circuit_x_action();
                assert!(once.mul(&once).is_identity());
                let action = extract_logical_action(&gadget, &code).unwrap();
                // the inheriting sector follows V on each patch line
                let per_patch = match axis {
                    Axis::Rows => action.z.clone(),
                    Axis::Columns => action.x.clone(),
                };
                let expected = match axis {
                    Axis::Rows => base.v.kron(&BitMatrix::identity(2)),
                    Axis::Columns => BitMatrix::identity(2).kron(&base.v),
                };
                assert_eq!(per_patch, expected, "c={c} swap({i},{j}) {axis:?}");
            }
        }
    }
}

#[test]
fn elementary_composition_matches_lifted_u() {
    let outer = hadamard_family(2).unwrap();
    let parent = concatenate(&ConcatSpec::new(outer.clone(), 3)).unwrap();
    let base = verify_codespace_transform(&outer, &swap_matrix(3, 0, 2)).unwrap();
    let lifted = lift_to_concat(&base, &parent).unwrap();
    assert_eq!(compose(9, &lifted.elementary_seq), lifted.u);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in matrix_strategy(64, 64)) {
        prop_assert_eq!(m.rank() + m.nullspace().nrows(), m.ncols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn hgp_orthogonality_and_k(h1 in matrix_strategy(5, 7), h2 in matrix_strategy(5, 7)) {
        let c1 = ClassicalCode::from_parity_check("a", h1);
        let c2 = ClassicalCode::from_parity_check("b", h2);
        let code = hgp(&c1, &c2);
        prop_assert!(code.validate().is_empty());
        prop_assert_eq!(code.k(), c1.k() * c2.k() + c1.k_transpose() * c2.k_transpose());
    }

    #[test]
    fn census_total_and_monotone(h1 in matrix_strategy(4, 6), h2 in matrix_strategy(4, 6)) {
        let code = hgp(
            &ClassicalCode::from_parity_check("a", h1),
            &ClassicalCode::from_parity_check("b", h2),
        );
        let mut previous = usize::MAX;
        for t in [0.0, 1.0, 2.0, 3.0, 5.0, 8.0, 100.0] {
            let census = edge_census(&code, t).unwrap();
            prop_assert_eq!(census.total_edges, code.hx.nnz() + code.hz.nnz());
            prop_assert!(census.long_range_edges <= previous);
            previous = census.long_range_edges;
        }
    }

    #[test]
    fn tanner_transform_preserves_k(h1 in matrix_strategy(4, 6), h2 in matrix_strategy(4, 6)) {
        let code = hgp(
            &ClassicalCode::from_parity_check("a", h1),
            &ClassicalCode::from_parity_check("b", h2),
        );
        if let Ok(out) = quantum_tanner_transform(&code) {
            prop_assert_eq!(out.k(), code.k());
            prop_assert!(out.validate().is_empty());
        }
    }

    #[test]
    fn canonical_basis_invariants(h1 in matrix_strategy(4, 7), h2 in matrix_strategy(4, 7)) {
        let c1 = ClassicalCode::from_parity_check("a", h1.row_basis());
        let c2 = ClassicalCode::from_parity_check("b", h2.row_basis());
        let code = hgp(&c1, &c2);
        let l = canonical_logicals(&code).unwrap();
        prop_assert!(code.hz.mul(&l.gx.transpose()).is_zero());
        prop_assert!(code.hx.mul(&l.gz.transpose()).is_zero());
        prop_assert!(l.pairing().is_identity());
    }

    #[test]
    fn decompose_preserves_k(h in matrix_strategy(3, 9)) {
        let code = ClassicalCode::from_parity_check("r", h);
        let out = decompose_checks(&code, 3).unwrap();
        prop_assert_eq!(out.k(), code.k());
        prop_assert!(out.h.row_weights().iter().all(|&w| w <= 3));
    }

    #[test]
    fn rebalance_keeps_parameters(h in matrix_strategy(3, 5), extra in 0usize..2) {
        let outer = ClassicalCode::from_parity_check("o", h);
        let c = outer.max_bit_degree().max(1) + extra;
        let spec = ConcatSpec::new(outer, c);
        let before = concatenate(&spec).unwrap();
        let after = concatenate(&rebalance_attachments(&spec).unwrap()).unwrap();
        prop_assert_eq!(before.n(), after.n());
        prop_assert_eq!(before.k(), after.k());
        prop_assert_eq!(min_distance(&before).unwrap(), min_distance(&after).unwrap());
    }
}
