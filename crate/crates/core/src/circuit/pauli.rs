use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::gf2::BitVec;
use crate::{Error, Result};

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NONTRIVIAL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Phase-free `n`-qubit Pauli operator in symplectic `(x | z)` form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn new(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                op: "pauli",
                left: (1, x.len()),
                right: (1, z.len()),
            });
        }
        Ok(Self { x, z })
    }

    pub fn x_type(support: BitVec) -> Self {
        let n = support.len();
        Self {
            x: support,
            z: BitVec::zeros(n),
        }
    }

    pub fn z_type(support: BitVec) -> Self {
        let n = support.len();
        Self {
            x: BitVec::zeros(n),
            z: support,
        }
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut op = Self::identity(n);
        op.set(qubit, p);
        op
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut BitVec, &mut BitVec) {
        (&mut self.x, &mut self.z)
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn support(&self) -> BitVec {
        let mut s = self.x.clone();
        s.or_assign(&self.z);
        s
    }

    pub fn weight(&self) -> usize {
        self.support().weight()
    }

    /// Symplectic form `x·z' + z·x'`; `true` means the operators anticommute.
    pub fn anticommutes_with(&self, other: &PauliOperator) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        !self.anticommutes_with(other)
    }

    /// Product up to phase.
    pub fn mul_assign(&mut self, other: &PauliOperator) {
        self.x ^= &other.x;
        self.z ^= &other.z;
    }

    pub fn times(&self, other: &PauliOperator) -> PauliOperator {
        let mut p = self.clone();
        p.mul_assign(other);
        p
    }

    /// Places `self` onto the given qubits of a larger register.
    pub fn embed(&self, n: usize, qubits: &[usize]) -> PauliOperator {
        debug_assert_eq!(qubits.len(), self.n());
        let mut out = PauliOperator::identity(n);
        for (i, &q) in qubits.iter().enumerate() {
            out.set(q, self.get(i));
        }
        out
    }

    /// Restriction to the given qubits, in order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliOperator {
        Self {
            x: self.x.gather(qubits),
            z: self.z.gather(qubits),
        }
    }

    /// Concatenated `x ‖ z` vector.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }
}

impl Ord for PauliOperator {
    /// X part compared before Z part, each lexicographically from qubit 0.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.x.cmp(&other.x).then_with(|| self.z.cmp(&other.z))
    }
}

impl PartialOrd for PauliOperator {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n() {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Dense label such as `XIZY`; `_` is accepted for identity.
    fn from_str(s: &str) -> Result<Self> {
        let labels: Vec<char> = s.trim().chars().collect();
        let mut p = PauliOperator::identity(labels.len());
        for (q, c) in labels.into_iter().enumerate() {
            let label = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        message: format!("bad Pauli label {other:?}"),
                    })
                }
            };
            p.set(q, label);
        }
        Ok(p)
    }
}
