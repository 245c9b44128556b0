//! Homological product codes and partial-decode logical gates.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf2`]: dense packed linear algebra over GF(2).
//! - [`complex`]: single-sector chain complexes `δ: C → C` with `δ² = 0`, the CSS
//!   codes they define, and the canonical form `δ = W δ₀ W⁻¹`.
//! - [`hprod`]: the homological product `∂ = δ₁ ⊗ 1 + 1 ⊗ δ₂`, its canonical
//!   boundary and the initial-state layout of its encoder.
//! - [`circuit`]: CNOT circuits as transvection products, phase-free Pauli
//!   propagation and a signed stabilizer tableau.
//! - [`codes`]: the code catalog (Steane, Reed-Muller 15, `[[4,2,2]]`), padding,
//!   doubling, logical operators, distance oracle and lookup decoders.
//! - [`ftgate`]: error bands, the band theorem checker, the
//!   unencode / transversal / re-encode schedule, syndrome mapping and fault
//!   injection.
//!
//! ```
//! use homolattice::codes::catalog;
//! use homolattice::hprod::homological_product;
//!
//! let product = homological_product(&catalog::steane(), &catalog::padded_reed_muller());
//! assert_eq!(product.n(), 147);
//! assert_eq!(product.k(), 1);
//! assert_eq!(product.boundary().sparsity(), 15);
//! ```

pub mod circuit;
pub mod codes;
pub mod complex;
mod error;
pub mod ftgate;
pub mod gf2;
pub mod hprod;

pub use error::{Error, Result};
