//! Dense linear algebra over GF(2).
//!
//! [`BinaryMatrix`] is row-major with each row packed into 64-bit words, which
//! keeps elimination on the few-hundred-column matrices used here cache friendly.

mod bitvec;
mod matrix;
mod span;

pub use bitvec::BitVec;
pub use matrix::{BinaryMatrix, Echelon};
pub use span::{independent_subset, LinearSolver, Span};
