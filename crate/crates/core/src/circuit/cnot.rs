use super::{Circuit, Gate, PauliOperator};
use crate::gf2::BinaryMatrix;
use crate::{Error, Result};

/// A circuit made only of CNOT gates.
///
/// Gate `(i, j)` (control `i`, target `j`) has the binary representative
/// `W_{i,j} = 1 + e_i e_jᵀ`; the circuit `g_1, …, g_N` represents
/// `W = W_{g_N} ⋯ W_{g_1}`. Z supports transform as `z ↦ W z` and X supports as
/// `x ↦ x W⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnotCircuit {
    n: usize,
    gates: Vec<(usize, usize)>,
}

impl CnotCircuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut c = Self::new(n);
        for (control, target) in pairs {
            c.push(control, target)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, control: usize, target: usize) -> Result<()> {
        for q in [control, target] {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { index: q, n: self.n });
            }
        }
        if control == target {
            return Err(Error::InvalidArgument(format!(
                "CNOT control and target coincide at qubit {control}"
            )));
        }
        self.gates.push((control, target));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[(usize, usize)] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The reversed circuit; every CNOT is its own inverse.
    pub fn inverse(&self) -> CnotCircuit {
        CnotCircuit {
            n: self.n,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    pub fn to_circuit(&self) -> Circuit {
        Circuit::from_gates(self.n, self.gates.iter().map(|&(c, t)| Gate::cx(c, t)))
            .expect("gates were validated on insertion")
    }

    /// Ordered transvection product `W_{g_N} ⋯ W_{g_1}`.
    pub fn to_matrix(&self) -> BinaryMatrix {
        let mut w = BinaryMatrix::identity(self.n);
        for &(c, t) in &self.gates {
            // W_{c,t} · W adds row t into row c
            w.add_row(c, t);
        }
        w
    }

    /// Gauss-Jordan synthesis: one CNOT per elementary row operation, lowest-index
    /// pivots first. The returned circuit satisfies `to_matrix() == w`.
    pub fn synthesize(w: &BinaryMatrix) -> Result<CnotCircuit> {
        if !w.is_square() {
            return Err(Error::NotSquare {
                rows: w.rows(),
                cols: w.cols(),
            });
        }
        let n = w.rows();
        let mut m = w.clone();
        // row operations E_k = 1 + e_i e_jᵀ recorded as (i, j)
        let mut ops = Vec::new();
        for c in 0..n {
            if !m.get(c, c) {
                let r = (c + 1..n).find(|&r| m.get(r, c)).ok_or(Error::SingularMatrix)?;
                m.add_row(c, r);
                ops.push((c, r));
            }
            for r in 0..n {
                if r != c && m.get(r, c) {
                    m.add_row(r, c);
                    ops.push((r, c));
                }
            }
        }
        // E_m ⋯ E_1 W = 1, so W = E_1 ⋯ E_m and the first gate applied is E_m
        ops.reverse();
        Ok(CnotCircuit { n, gates: ops })
    }

    /// Phase-free conjugation `U P U†`, or `U† P U` when `inverse` is set.
    pub fn conjugate_pauli(&self, p: &PauliOperator, inverse: bool) -> PauliOperator {
        let mut out = p.clone();
        let apply = |out: &mut PauliOperator, &(c, t): &(usize, usize)| {
            Gate::cx(c, t).conjugate(out);
        };
        if inverse {
            self.gates.iter().rev().for_each(|g| apply(&mut out, g));
        } else {
            self.gates.iter().for_each(|g| apply(&mut out, g));
        }
        out
    }
}

/// Full encoder of a product code on the `n1 × n2` grid (flat index `i·n2 + j`).
///
/// Copies of `enc2` act on every band of fixed first index, then copies of `enc1`
/// on every band of fixed second index; gates are emitted gate-major so each
/// encoder gate becomes a run of parallel CNOTs. The binary representative is
/// `W₁ ⊗ W₂`.
pub fn product_encoder(enc1: &CnotCircuit, enc2: &CnotCircuit) -> CnotCircuit {
    let (n1, n2) = (enc1.n(), enc2.n());
    let mut out = CnotCircuit::new(n1 * n2);
    for &(c, t) in enc2.gates() {
        for i in 0..n1 {
            out.gates.push((i * n2 + c, i * n2 + t));
        }
    }
    for &(c, t) in enc1.gates() {
        for j in 0..n2 {
            out.gates.push((c * n2 + j, t * n2 + j));
        }
    }
    out
}
