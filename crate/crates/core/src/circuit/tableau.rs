//! Signed stabilizer groups under Clifford circuits.
//!
//! A row `(x, z, r)` stands for `(-1)^r ∏_q P_q` with `P_q ∈ {I, X, Y, Z}` read off
//! `(x_q, z_q)`; the update rules are the CHP ones. The tableau may hold fewer than
//! `n` generators, which is how codespaces (rather than states) are tracked.

use super::{Circuit, Gate, PauliOperator};
use crate::gf2::{BinaryMatrix, LinearSolver, Span};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPauli {
    pub pauli: PauliOperator,
    pub negative: bool,
}

impl SignedPauli {
    pub fn positive(pauli: PauliOperator) -> Self {
        Self {
            pauli,
            negative: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<SignedPauli>,
}

// exponent of i picked up by a single-qubit product P(x1,z1)·P(x2,z2)
fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// Product of two commuting signed Paulis with exact sign.
pub fn signed_product(a: &SignedPauli, b: &SignedPauli) -> SignedPauli {
    let n = a.pauli.n();
    let mut e = 2 * (a.negative as i32) + 2 * (b.negative as i32);
    for q in 0..n {
        e += phase_exponent(
            a.pauli.x_bits().get(q),
            a.pauli.z_bits().get(q),
            b.pauli.x_bits().get(q),
            b.pauli.z_bits().get(q),
        );
    }
    let e = e.rem_euclid(4);
    debug_assert!(e % 2 == 0, "product of anticommuting Paulis");
    SignedPauli {
        pauli: a.pauli.times(&b.pauli),
        negative: e == 2,
    }
}

impl StabilizerTableau {
    /// Validates that the generators commute pairwise and are independent.
    pub fn new(n: usize, rows: Vec<SignedPauli>) -> Result<Self> {
        let mut span = Span::new(2 * n);
        for (i, r) in rows.iter().enumerate() {
            if r.pauli.n() != n {
                return Err(Error::DimensionMismatch {
                    op: "tableau",
                    left: (1, n),
                    right: (1, r.pauli.n()),
                });
            }
            for (j, s) in rows.iter().enumerate().skip(i + 1) {
                if r.pauli.anticommutes_with(&s.pauli) {
                    return Err(Error::NonCommuting { x: i, z: j });
                }
            }
            if !span.insert(&r.pauli.symplectic()) {
                return Err(Error::InvalidArgument(format!(
                    "generator {i} is dependent on earlier generators"
                )));
            }
        }
        Ok(Self { n, rows })
    }

    /// Positive-sign group generated by the given Paulis; dependent ones are dropped.
    pub fn from_generators(n: usize, generators: impl IntoIterator<Item = PauliOperator>) -> Result<Self> {
        let mut span = Span::new(2 * n);
        let rows = generators
            .into_iter()
            .filter(|p| span.insert(&p.symplectic()))
            .map(SignedPauli::positive)
            .collect();
        Self::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[SignedPauli] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { index: q, n: self.n });
            }
        }
        for row in &mut self.rows {
            let negative = &mut row.negative;
            let (x, z) = row.pauli.parts_mut();
            match *gate {
                Gate::Cx { control: a, target: b } => {
                    let (xa, za, xb, zb) = (x.get(a), z.get(a), x.get(b), z.get(b));
                    *negative ^= xa && zb && !(xb ^ za);
                    x.set(b, xb ^ xa);
                    z.set(a, za ^ zb);
                }
                Gate::H(a) => {
                    let (xa, za) = (x.get(a), z.get(a));
                    *negative ^= xa && za;
                    x.set(a, za);
                    z.set(a, xa);
                }
                Gate::S(a) => {
                    let (xa, za) = (x.get(a), z.get(a));
                    *negative ^= xa && za;
                    z.set(a, za ^ xa);
                }
                Gate::Sdg(a) => {
                    let (xa, za) = (x.get(a), z.get(a));
                    *negative ^= xa && !za;
                    z.set(a, za ^ xa);
                }
                Gate::X(a) => *negative ^= z.get(a),
                Gate::Z(a) => *negative ^= x.get(a),
                Gate::Y(a) => *negative ^= x.get(a) ^ z.get(a),
                Gate::T(_) => {
                    return Err(Error::Unsupported(format!(
                        "{gate} is not a Clifford gate"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n() != self.n {
            return Err(Error::DimensionMismatch {
                op: "tableau_run",
                left: (1, self.n),
                right: (1, circuit.n()),
            });
        }
        if let Some(g) = circuit.gates().iter().find(|g| !g.is_clifford()) {
            return Err(Error::Unsupported(format!("{g} is not a Clifford gate")));
        }
        for g in circuit.gates() {
            self.apply(g)?;
        }
        Ok(())
    }

    /// The sign with which `pauli` (up to sign) belongs to the group, or `None`
    /// if it is not in the group at all.
    pub fn sign_of(&self, pauli: &PauliOperator) -> Option<bool> {
        if self.rows.is_empty() {
            return pauli.is_identity().then_some(false);
        }
        let columns: Vec<_> = self.rows.iter().map(|r| r.pauli.symplectic()).collect();
        let a = BinaryMatrix::from_columns(2 * self.n, &columns).expect("uniform row length");
        let coeffs = LinearSolver::new(&a).solve(&pauli.symplectic())?;
        let mut acc = SignedPauli::positive(PauliOperator::identity(self.n));
        for i in coeffs.iter_ones() {
            acc = signed_product(&acc, &self.rows[i]);
        }
        debug_assert_eq!(&acc.pauli, pauli);
        Some(acc.negative)
    }

    pub fn contains(&self, element: &SignedPauli) -> bool {
        self.sign_of(&element.pauli) == Some(element.negative)
    }

    /// Equality of the generated signed groups.
    pub fn same_group(&self, other: &StabilizerTableau) -> bool {
        self.n == other.n
            && self.rows.len() == other.rows.len()
            && other.rows.iter().all(|r| self.contains(r))
    }
}

/// Runs `circuit` on a copy of `initial`.
pub fn tableau_run(circuit: &Circuit, initial: &StabilizerTableau) -> Result<StabilizerTableau> {
    let mut t = initial.clone();
    t.run(circuit)?;
    Ok(t)
}
