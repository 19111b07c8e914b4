use super::{ClassicalCode, Layout1d};
use crate::error::CodeError;
use crate::gf2::BitMatrix;

/// Splits every check of weight `w > max_weight` into a chain of weight-3
/// checks over `w - 3` new auxiliary bits:
/// `x1+x2+a1, a1+x3+a2, ..., a(w-3)+x(w-1)+xw`.
///
/// Auxiliary bits are appended after the original bits, so puncturing the new
/// code to its first `n` bits recovers exactly the original codewords. The
/// concatenation record is dropped.
pub fn decompose_checks(code: &ClassicalCode, max_weight: usize) -> Result<ClassicalCode, CodeError> {
    if max_weight != 3 {
        return Err(CodeError::InvalidParameter(format!(
            "only max_weight = 3 is supported, got {max_weight}"
        )));
    }
    let n = code.n();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut row_coords = Vec::new();
    let mut aux_coords = Vec::new();
    for r in 0..code.m() {
        let support = code.h.row(r).support();
        let at = code.layout.checks[r];
        if support.len() <= 3 {
            rows.push(support);
            row_coords.push(at);
            continue;
        }
        let w = support.len();
        let first_aux = n + aux_coords.len();
        aux_coords.extend(std::iter::repeat_n(at, w - 3));
        rows.push(vec![support[0], support[1], first_aux]);
        row_coords.push(at);
        for i in 1..w - 3 {
            rows.push(vec![first_aux + i - 1, support[i + 1], first_aux + i]);
            row_coords.push(at);
        }
        rows.push(vec![first_aux + w - 4, support[w - 2], support[w - 1]]);
        row_coords.push(at);
    }
    let total = n + aux_coords.len();
    let h = BitMatrix::from_supports(rows.len(), total, &rows)?;
    let mut bits = code.layout.bits.clone();
    bits.extend(aux_coords);
    let layout = Layout1d {
        bits,
        checks: row_coords,
    };
    Ok(ClassicalCode::with_layout(
        format!("{}[w<=3]", code.name),
        h,
        layout,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::min_distance;
    use crate::gf2::BitVec;

    #[test]
    fn weight_five_check_becomes_three_checks() {
        let code = ClassicalCode::from_parity_check("w5", "11111".parse().unwrap());
        let out = decompose_checks(&code, 3).unwrap();
        assert_eq!(out.n(), 7);
        assert_eq!(out.m(), 3);
        assert!(out.h.row_weights().iter().all(|&w| w == 3));
        assert_eq!(out.h.to_string(), "1100010\n0010011\n0001101");
    }

    #[test]
    fn weight_three_check_is_untouched() {
        let code = ClassicalCode::from_parity_check("w3", "111".parse().unwrap());
        let out = decompose_checks(&code, 3).unwrap();
        assert_eq!(out.h, code.h);
    }

    #[test]
    fn weight_four_uses_one_aux() {
        let code = ClassicalCode::from_parity_check("w4", "1111".parse().unwrap());
        let out = decompose_checks(&code, 3).unwrap();
        assert_eq!(out.h.to_string(), "11001\n00111");
        assert_eq!(out.k(), code.k());
        assert_eq!(min_distance(&out).unwrap(), 2);
    }

    #[test]
    fn aux_bits_are_determined_by_original_bits() {
        let code = ClassicalCode::from_parity_check("w6", "111111".parse().unwrap());
        let out = decompose_checks(&code, 3).unwrap();
        for mask in 0u32..64 {
            let x = BitVec::from_bools(&(0..6).map(|i| (mask >> i) & 1 == 1).collect::<Vec<_>>());
            let completions = (0u32..8)
                .filter(|aux| {
                    let bits: Vec<bool> = (0..6)
                        .map(|i| x.get(i))
                        .chain((0..3).map(|i| (aux >> i) & 1 == 1))
                        .collect();
                    out.is_codeword(&BitVec::from_bools(&bits))
                })
                .count();
            let expected = usize::from(code.is_codeword(&x));
            assert_eq!(completions, expected, "mask {mask:06b}");
        }
    }

    #[test]
    fn only_three_is_supported() {
        let code = ClassicalCode::from_parity_check("w5", "11111".parse().unwrap());
        assert!(decompose_checks(&code, 4).is_err());
    }
}
