//! Named codes and the padding / rotation / doubling constructions.

use crate::circuit::CnotCircuit;
use crate::complex::{boundary_from_css, css_from_boundary, ChainComplex, CssCode};
use crate::gf2::{BinaryMatrix, BitVec};
use crate::{Error, Result};

const STEANE: &str = include_str!("../../data/steane.txt");
const RM15_PADDED: &str = include_str!("../../data/rm15_padded.txt");

/// The 7×7 Steane boundary operator.
pub fn steane() -> ChainComplex {
    ChainComplex::parse_text(STEANE).expect("bundled matrix is a complex")
}

/// The 21×21 boundary of the Reed-Muller code padded with six `|+⟩` qubits.
pub fn padded_reed_muller() -> ChainComplex {
    ChainComplex::parse_text(RM15_PADDED).expect("bundled matrix is a complex")
}

pub fn steane_text() -> &'static str {
    STEANE
}

pub fn padded_reed_muller_text() -> &'static str {
    RM15_PADDED
}

/// `[[15,1,3]]` punctured Reed-Muller code with Z gauge fixed.
///
/// Qubit `t` carries the nonzero 4-bit label `15 − t`. The X generators are the
/// four coordinate functions (weight 8); the Z generators are those four plus
/// their six pairwise products (weight 4).
pub fn reed_muller_15() -> CssCode {
    let coord = |b: usize| BitVec::from_bools(&(0..15).map(|t| ((15 - t) >> b) & 1 == 1).collect::<Vec<_>>());
    let x: Vec<BitVec> = (0..4).map(coord).collect();
    let mut z = x.clone();
    for a in 0..4 {
        for b in a + 1..4 {
            let both: Vec<bool> = (0..15).map(|t| x[a].get(t) && x[b].get(t)).collect();
            z.push(BitVec::from_bools(&both));
        }
    }
    CssCode::new(15, x, z).expect("Reed-Muller generators commute")
}

/// The all-ones 4×4 boundary, whose code is `[[4,2,2]]`.
pub fn four_two_two_complex() -> ChainComplex {
    ChainComplex::new(BinaryMatrix::ones(4, 4)).expect("J₄² = 0")
}

/// Wires `(ψ₁, ψ₂, |0⟩, |+⟩)` = qubits 0..4.
pub fn four_two_two_encoder() -> CnotCircuit {
    CnotCircuit::from_pairs(4, [(0, 2), (3, 1), (1, 2), (3, 0)]).expect("valid gates")
}

/// `[[4,2,2]]` with stabilizers `XXXX`, `ZZZZ` and its four-gate encoder.
pub fn four_two_two() -> (CssCode, CnotCircuit) {
    let code = CssCode::new(4, vec![BitVec::ones(4)], vec![BitVec::ones(4)]).expect("even overlap");
    (code, four_two_two_encoder())
}

/// Zero boundary on `n` qubits.
pub fn trivial(n: usize) -> ChainComplex {
    ChainComplex::zero(n)
}

/// Appends `extra` qubits, each with a single-qubit X check.
pub fn pad(code: &CssCode, extra: usize) -> Result<CssCode> {
    if extra > 0 && code.x_rank() > code.z_rank() {
        return Err(Error::InvalidArgument(format!(
            "padding adds X checks but the code already has more X ({}) than Z ({}); rotate it first",
            code.x_rank(),
            code.z_rank()
        )));
    }
    let n = code.n() + extra;
    let widen = |v: &BitVec| v.concat(&BitVec::zeros(extra));
    let mut x: Vec<BitVec> = code.x_stabilizers().iter().map(widen).collect();
    x.extend((code.n()..n).map(|q| BitVec::unit(n, q)));
    let z = code.z_stabilizers().iter().map(widen).collect();
    CssCode::new(n, x, z)
}

/// Swaps the X and Z generator sets.
pub fn rotate(code: &CssCode) -> CssCode {
    CssCode::new(code.n(), code.z_stabilizers().to_vec(), code.x_stabilizers().to_vec())
        .expect("commutation is symmetric")
}

/// `n` parallel copies of the `[[4,2,2]]` encoder; copy `j` acts on qubits
/// `j, n+j, 2n+j, 3n+j`.
pub fn doubling_encoder(n: usize) -> CnotCircuit {
    let mut c = CnotCircuit::new(4 * n);
    for &(a, b) in four_two_two_encoder().gates() {
        for j in 0..n {
            c.push(a * n + j, b * n + j).expect("in range");
        }
    }
    c
}

/// The doubled code on four blocks of `n` qubits and the circuit producing it
/// from `code ⊗ rotate(code) ⊗ |0⟩ⁿ ⊗ |+⟩ⁿ`.
///
/// X generators, in order: each X check on blocks 1 and 3, each Z-check support
/// on blocks 2 and 3, then `X¹X²X³X⁴` at every position. Z generators mirror
/// this: Z checks on blocks 1 and 4, X-check supports on blocks 2 and 4, then
/// `Z¹Z²Z³Z⁴`.
pub fn double(code: &CssCode) -> (CssCode, CnotCircuit) {
    let n = code.n();
    let on_blocks = |v: &BitVec, blocks: &[usize]| {
        BitVec::from_indices(4 * n, blocks.iter().flat_map(|&b| v.iter_ones().map(move |j| b * n + j)))
    };
    let column = |j: usize| BitVec::from_indices(4 * n, (0..4).map(|b| b * n + j));
    let mut x: Vec<BitVec> = code.x_stabilizers().iter().map(|s| on_blocks(s, &[0, 2])).collect();
    x.extend(code.z_stabilizers().iter().map(|s| on_blocks(s, &[1, 2])));
    x.extend((0..n).map(column));
    let mut z: Vec<BitVec> = code.z_stabilizers().iter().map(|s| on_blocks(s, &[0, 3])).collect();
    z.extend(code.x_stabilizers().iter().map(|s| on_blocks(s, &[1, 3])));
    z.extend((0..n).map(column));
    let doubled = CssCode::new(4 * n, x, z).expect("doubling preserves commutation");
    (doubled, doubling_encoder(n))
}

/// A catalog entry resolved from a name.
#[derive(Debug, Clone)]
pub struct NamedCode {
    pub name: String,
    pub code: CssCode,
    /// Present when the code is symmetric.
    pub complex: Option<ChainComplex>,
}

impl NamedCode {
    fn from_complex(name: &str, c: ChainComplex) -> Self {
        Self {
            name: name.to_string(),
            code: css_from_boundary(&c),
            complex: Some(c),
        }
    }

    pub fn complex(&self) -> Result<&ChainComplex> {
        self.complex.as_ref().ok_or(Error::AsymmetricCode {
            x_rank: self.code.x_rank(),
            z_rank: self.code.z_rank(),
        })
    }
}

/// Names: `steane`, `rm15`, `rm15-padded`, `422`, `trivial<n>` and
/// `double:<name>`.
pub fn by_name(name: &str) -> Result<NamedCode> {
    if let Some(inner) = name.strip_prefix("double:") {
        let base = by_name(inner)?;
        let (code, _) = double(&base.code);
        let complex = boundary_from_css(&code).ok();
        return Ok(NamedCode {
            name: name.to_string(),
            code,
            complex,
        });
    }
    match name {
        "steane" => Ok(NamedCode::from_complex(name, steane())),
        "rm15-padded" => Ok(NamedCode::from_complex(name, padded_reed_muller())),
        "422" => Ok(NamedCode::from_complex(name, four_two_two_complex())),
        "rm15" => Ok(NamedCode {
            name: name.to_string(),
            code: reed_muller_15(),
            complex: None,
        }),
        _ => match name.strip_prefix("trivial").map(str::parse::<usize>) {
            Some(Ok(n)) if n > 0 => Ok(NamedCode::from_complex(name, trivial(n))),
            _ => Err(Error::UnknownCode(name.to_string())),
        },
    }
}

pub const NAMES: &[&str] = &["steane", "rm15", "rm15-padded", "422", "trivial<n>", "double:<name>"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::PauliOperator;

    #[test]
    fn steane_matrix() {
        let s = steane();
        assert_eq!(s.sparsity(), 4);
        assert_eq!(s.rank(), 3);
        assert_eq!(s.k(), 1);
    }

    #[test]
    fn padded_matrix() {
        let p = padded_reed_muller();
        assert_eq!(p.n(), 21);
        assert_eq!(p.rank(), 10);
        let b = p.boundary();
        // no Z check (column) touches the last six qubits
        for c in 0..21 {
            for r in 15..21 {
                assert!(!b.get(r, c));
            }
        }
    }

    #[test]
    fn reed_muller_counts() {
        let rm = reed_muller_15();
        assert_eq!((rm.n(), rm.k()), (15, 1));
        assert_eq!((rm.x_stabilizers().len(), rm.z_stabilizers().len()), (4, 10));
        assert!(matches!(boundary_from_css(&rm), Err(Error::AsymmetricCode { .. })));
        let r = rotate(&rm);
        assert_eq!((r.x_stabilizers().len(), r.z_stabilizers().len()), (10, 4));
        assert_eq!(rotate(&r), rm);
    }

    #[test]
    fn padding_matches_catalog_spans() {
        let padded = pad(&reed_muller_15(), 6).unwrap();
        assert_eq!((padded.n(), padded.k()), (21, 1));
        assert!(padded.is_symmetric());
        let catalog_code = css_from_boundary(&padded_reed_muller());
        assert!(padded.same_stabilizers(&catalog_code));
        let rebuilt = css_from_boundary(&boundary_from_css(&padded).unwrap());
        assert!(rebuilt.same_stabilizers(&catalog_code));
        assert_eq!(pad(&reed_muller_15(), 0).unwrap(), reed_muller_15());
        assert!(pad(&rotate(&reed_muller_15()), 6).is_err());
    }

    #[test]
    fn four_two_two_encoder_action() {
        let (code, enc) = four_two_two();
        assert_eq!(code.k(), 2);
        let x4: PauliOperator = "IIIX".parse().unwrap();
        assert_eq!(enc.conjugate_pauli(&x4, false).to_string(), "XXXX");
        let z3: PauliOperator = "IIZI".parse().unwrap();
        assert_eq!(enc.conjugate_pauli(&z3, false).to_string(), "ZZZZ");
    }

    #[test]
    fn doubled_reed_muller() {
        let (d, enc) = double(&reed_muller_15());
        assert_eq!(d.n(), 60);
        assert_eq!(d.x_stabilizers().len(), d.z_stabilizers().len());
        assert!(d.is_symmetric());
        assert_eq!(d.k(), 2);
        assert_eq!(enc.len(), 60);
    }

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("steane").unwrap().code.n(), 7);
        assert_eq!(by_name("trivial1").unwrap().code.k(), 1);
        assert!(by_name("rm15").unwrap().complex().is_err());
        assert_eq!(by_name("double:422").unwrap().code.n(), 16);
        assert!(matches!(by_name("nope"), Err(Error::UnknownCode(_))));
    }
}
