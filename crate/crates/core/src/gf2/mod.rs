//! Exact linear algebra over GF(2).

mod matrix;
mod vec;

pub use matrix::{BitMatrix, Echelon};
pub use vec::{BitVec, Ones};
