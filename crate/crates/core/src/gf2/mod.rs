//! Bit-packed linear algebra over GF(2).

mod bitvec;
pub mod io;
mod matrix;

pub use bitvec::BitVec;
pub use matrix::{BinaryMatrix, Echelon};
