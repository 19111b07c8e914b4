use lresc_core::css::{CssCode, Sector};
use lresc_core::logical::LogicalBasis;
use lresc_core::BitVec;

use crate::DecodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SectorFailure {
    /// The X residual anticommutes with some `Z̄`.
    pub x: bool,
    pub z: bool,
}

impl SectorFailure {
    pub fn any(&self) -> bool {
        self.x || self.z
    }
}

/// Whether a syndrome-free `sector`-type residual acts nontrivially.
pub fn sector_failure(
    code: &CssCode,
    basis: &LogicalBasis,
    sector: Sector,
    residual: &BitVec,
) -> Result<bool, DecodeError> {
    let syndrome = code.detector(sector).mul_vec(residual);
    if !syndrome.is_zero() {
        return Err(DecodeError::NonzeroResidual(syndrome.weight()));
    }
    let opposite = basis.of(sector.other());
    Ok(opposite.rows().iter().any(|l| l.dot(residual)))
}

pub fn logical_failure_with(
    code: &CssCode,
    basis: &LogicalBasis,
    residual_x: &BitVec,
    residual_z: &BitVec,
) -> Result<SectorFailure, DecodeError> {
    Ok(SectorFailure {
        x: sector_failure(code, basis, Sector::X, residual_x)?,
        z: sector_failure(code, basis, Sector::Z, residual_z)?,
    })
}

pub fn logical_failure(code: &CssCode, residual_x: &BitVec, residual_z: &BitVec) -> Result<SectorFailure, DecodeError> {
    let basis = code.logical_basis()?;
    logical_failure_with(code, &basis, residual_x, residual_z)
}
