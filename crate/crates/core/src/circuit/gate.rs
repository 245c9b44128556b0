use std::fmt;

use serde::{Deserialize, Serialize};

use super::PauliOperator;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    Cx { control: usize, target: usize },
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    /// Non-Clifford; Pauli propagation treats it as the identity.
    T(usize),
}

impl Gate {
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::Cx { control, target }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cx { control, target } => vec![control, target],
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::T(q) => {
                vec![q]
            }
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T(_))
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            // T† is not modelled separately; the frame treats both as identity
            g => g,
        }
    }

    /// Relabels qubits through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::Cx { control, target } => Gate::cx(map(control), map(target)),
            Gate::H(q) => Gate::H(map(q)),
            Gate::S(q) => Gate::S(map(q)),
            Gate::Sdg(q) => Gate::Sdg(map(q)),
            Gate::X(q) => Gate::X(map(q)),
            Gate::Y(q) => Gate::Y(map(q)),
            Gate::Z(q) => Gate::Z(map(q)),
            Gate::T(q) => Gate::T(map(q)),
        }
    }

    /// Phase-free Heisenberg update `P ↦ G P G†` in place.
    pub fn conjugate(&self, p: &mut PauliOperator) {
        let (x, z) = p.parts_mut();
        match *self {
            Gate::Cx { control, target } => {
                if x.get(control) {
                    x.flip(target);
                }
                if z.get(target) {
                    z.flip(control);
                }
            }
            Gate::H(q) => {
                let (xb, zb) = (x.get(q), z.get(q));
                x.set(q, zb);
                z.set(q, xb);
            }
            Gate::S(q) | Gate::Sdg(q) => {
                if x.get(q) {
                    z.flip(q);
                }
            }
            Gate::X(_) | Gate::Y(_) | Gate::Z(_) | Gate::T(_) => {}
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        if let Gate::Cx { control, target } = *self {
            if control == target {
                return Err(Error::InvalidArgument(format!(
                    "CNOT control and target coincide at qubit {control}"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn parse(line: &str, lineno: usize) -> Result<Gate> {
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let idx = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("bad qubit index {s:?}")))
        };
        match parts.as_slice() {
            ["CX", c, t] => Ok(Gate::cx(idx(c)?, idx(t)?)),
            [name, q] => {
                let q = idx(q)?;
                match *name {
                    "H" => Ok(Gate::H(q)),
                    "S" => Ok(Gate::S(q)),
                    "SDG" => Ok(Gate::Sdg(q)),
                    "X" => Ok(Gate::X(q)),
                    "Y" => Ok(Gate::Y(q)),
                    "Z" => Ok(Gate::Z(q)),
                    "T" => Ok(Gate::T(q)),
                    other => Err(err(format!("unknown gate {other:?}"))),
                }
            }
            _ => Err(err(format!("cannot parse gate line {line:?}"))),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cx { control, target } => write!(f, "CX {control} {target}"),
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Sdg(q) => write!(f, "SDG {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Y(q) => write!(f, "Y {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::T(q) => write!(f, "T {q}"),
        }
    }
}

/// Ordered gate list on `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    /// Phase-free `C P C†` (or `C† P C` when `inverse`).
    pub fn conjugate_pauli(&self, p: &PauliOperator, inverse: bool) -> PauliOperator {
        let mut out = p.clone();
        if inverse {
            for g in self.gates.iter().rev() {
                g.inverse().conjugate(&mut out);
            }
        } else {
            for g in &self.gates {
                g.conjugate(&mut out);
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("QUBITS {}\n", self.n);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses `QUBITS n` followed by one gate per line. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match circuit.as_mut() {
                None => {
                    let n = line
                        .strip_prefix("QUBITS")
                        .and_then(|rest| rest.trim().parse::<usize>().ok())
                        .ok_or(Error::Parse {
                            line: lineno,
                            message: "expected `QUBITS n` header".into(),
                        })?;
                    circuit = Some(Circuit::new(n));
                }
                Some(c) => {
                    let g = Gate::parse(line, lineno)?;
                    c.push(g).map_err(|e| Error::Parse {
                        line: lineno,
                        message: e.to_string(),
                    })?;
                }
            }
        }
        circuit.ok_or(Error::Parse {
            line: 1,
            message: "empty circuit file".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_rules() {
        let g = Gate::cx(0, 1);
        let mut x: PauliOperator = "XI".parse().unwrap();
        g.conjugate(&mut x);
        assert_eq!(x.to_string(), "XX");
        let mut z: PauliOperator = "IZ".parse().unwrap();
        g.conjugate(&mut z);
        assert_eq!(z.to_string(), "ZZ");
    }

    #[test]
    fn hadamard_and_phase() {
        let c = Circuit::from_gates(1, [Gate::H(0), Gate::S(0)]).unwrap();
        let z: PauliOperator = "Z".parse().unwrap();
        assert_eq!(c.conjugate_pauli(&z, false).to_string(), "Y");
        let back = c.conjugate_pauli(&c.conjugate_pauli(&z, false), true);
        assert_eq!(back, z);
    }

    #[test]
    fn text_round_trip() {
        let c = Circuit::from_gates(3, [Gate::cx(0, 2), Gate::H(1), Gate::S(2), Gate::T(0)]).unwrap();
        assert_eq!(Circuit::parse_text(&c.to_text()).unwrap(), c);
        let err = Circuit::parse_text("QUBITS 2\nCX 0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(Circuit::parse_text("CX 0 1\n").is_err());
    }
}
