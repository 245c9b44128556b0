use crate::complex::{css_from_boundary, ChainComplex, CssCode};
use crate::gf2::{BinaryMatrix, BitVec, Span};

/// Paired logical representatives: `x[i]·z[j] = [i = j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalOperators {
    pub x: Vec<BitVec>,
    pub z: Vec<BitVec>,
}

impl LogicalOperators {
    pub fn k(&self) -> usize {
        self.x.len()
    }
}

// basis vectors of `candidates` (all of which lie in a space containing `stab`)
// that are independent modulo `stab`
fn complement(n: usize, stab: &[BitVec], candidates: Vec<BitVec>) -> Vec<BitVec> {
    let mut span = Span::from_vectors(n, stab);
    candidates.into_iter().filter(|v| span.insert(v)).collect()
}

pub fn logical_operators(code: &CssCode) -> LogicalOperators {
    let n = code.n();
    // X̄ must commute with every Z check, and vice versa
    let xs = complement(n, code.x_stabilizers(), code.z_check_matrix().kernel_basis());
    let zs = complement(n, code.z_stabilizers(), code.x_check_matrix().kernel_basis());
    let k = xs.len();
    debug_assert_eq!(zs.len(), k);
    if k == 0 {
        return LogicalOperators { x: xs, z: zs };
    }
    let mut gram = BinaryMatrix::zeros(k, k);
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in zs.iter().enumerate() {
            gram.set(i, j, a.dot(b));
        }
    }
    let inv = gram.invert().expect("symplectic pairing is nondegenerate");
    let z = (0..k)
        .map(|i| {
            let mut acc = BitVec::zeros(n);
            for (j, b) in zs.iter().enumerate() {
                if inv.get(j, i) {
                    acc ^= b;
                }
            }
            acc
        })
        .collect();
    LogicalOperators { x: xs, z }
}

pub fn logical_operators_of_complex(c: &ChainComplex) -> LogicalOperators {
    logical_operators(&css_from_boundary(c))
}
