//! Construction and verification of long-range-enhanced surface codes: GF(2)
//! algebra, classical parent codes, hypergraph products, logical operators and
//! inherited gates.

pub mod alist;
pub mod classical;
pub mod css;
mod enumerate;
pub mod error;
pub mod gates;
pub mod gf2;
pub mod logical;

pub use error::CodeError;
pub use gf2::{BitMatrix, BitVec};
