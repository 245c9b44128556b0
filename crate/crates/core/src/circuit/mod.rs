//! CNOT circuits, Pauli propagation and stabilizer tableaux.

mod cnot;
mod gate;
mod pauli;
mod tableau;

pub use cnot::{product_encoder, CnotCircuit};
pub use gate::{Circuit, Gate};
pub use pauli::{Pauli, PauliOperator};
pub use tableau::{signed_product, tableau_run, SignedPauli, StabilizerTableau};
