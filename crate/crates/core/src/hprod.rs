//! The homological product `∂ = δ₁ ⊗ 1 + 1 ⊗ δ₂` and its unencoded layout.
//!
//! Qubits live on an `n₁ × n₂` grid flattened as `i·n₂ + j`, the first factor
//! major, matching [`BinaryMatrix::tensor`].

use serde::Serialize;

use crate::circuit::PauliOperator;
use crate::complex::{canonical_boundary, css_from_boundary, ChainComplex, CssCode};
use crate::gf2::BinaryMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub n1: usize,
    pub n2: usize,
}

impl Grid {
    pub fn new(n1: usize, n2: usize) -> Self {
        Self { n1, n2 }
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n1 && j < self.n2);
        i * self.n2 + j
    }

    pub fn coords(&self, q: usize) -> (usize, usize) {
        (q / self.n2, q % self.n2)
    }
}

#[derive(Debug, Clone)]
pub struct ProductCode {
    factor1: ChainComplex,
    factor2: ChainComplex,
    complex: ChainComplex,
    grid: Grid,
}

/// `δ₁ ⊗ 1 + 1 ⊗ δ₂` for square `δ₁`, `δ₂`.
pub fn tensor_sum(d1: &BinaryMatrix, d2: &BinaryMatrix) -> BinaryMatrix {
    let left = d1.tensor(&BinaryMatrix::identity(d2.rows()));
    let right = BinaryMatrix::identity(d1.rows()).tensor(d2);
    &left + &right
}

pub fn homological_product(c1: &ChainComplex, c2: &ChainComplex) -> ProductCode {
    let boundary = tensor_sum(c1.boundary(), c2.boundary());
    let complex = ChainComplex::new(boundary).expect("δ₁² = δ₂² = 0 implies ∂² = 0");
    ProductCode {
        factor1: c1.clone(),
        factor2: c2.clone(),
        complex,
        grid: Grid::new(c1.n(), c2.n()),
    }
}

impl ProductCode {
    pub fn factor1(&self) -> &ChainComplex {
        &self.factor1
    }

    pub fn factor2(&self) -> &ChainComplex {
        &self.factor2
    }

    /// Factor 1 or 2.
    pub fn factor(&self, which: usize) -> &ChainComplex {
        if which == 1 {
            &self.factor1
        } else {
            &self.factor2
        }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn boundary(&self) -> &BinaryMatrix {
        self.complex.boundary()
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.len()
    }

    /// `k₁·k₂`; agrees with `n − 2·rank(∂)`.
    pub fn k(&self) -> usize {
        self.factor1.k() * self.factor2.k()
    }

    pub fn css(&self) -> CssCode {
        css_from_boundary(&self.complex)
    }

    /// Whether `p` lies in the stabilizer group generated by the rows (X) and
    /// columns (Z) of `∂`.
    pub fn is_stabilizer(&self, p: &PauliOperator) -> bool {
        let b = self.boundary();
        let rows = crate::gf2::Span::from_vectors(self.n(), b.row_vectors());
        let cols = crate::gf2::Span::from_vectors(self.n(), &b.column_vectors());
        rows.contains(p.x_bits()) && cols.contains(p.z_bits())
    }
}

/// `∂₀ = δ₁,₀ ⊗ 1 + 1 ⊗ δ₂,₀`, or the half-canonical `δ₁,₀ ⊗ 1 + 1 ⊗ δ₂` when
/// `delta2` is supplied.
pub fn canonical_product_boundary(
    k1: usize,
    l1: usize,
    k2: usize,
    l2: usize,
    delta2: Option<&BinaryMatrix>,
) -> Result<BinaryMatrix> {
    let d10 = canonical_boundary(k1, l1);
    let n2 = k2 + 2 * l2;
    let d2 = match delta2 {
        None => canonical_boundary(k2, l2),
        Some(d) => {
            if d.rows() != n2 || d.cols() != n2 {
                return Err(Error::DimensionMismatch {
                    op: "canonical_product_boundary",
                    left: (n2, n2),
                    right: (d.rows(), d.cols()),
                });
            }
            d.clone()
        }
    };
    Ok(tensor_sum(&d10, &d2))
}

/// Role of a single factor position in the `(k, l, l)` ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorRole {
    Logical,
    Zero(usize),
    Plus(usize),
}

pub fn factor_role(k: usize, l: usize, index: usize) -> FactorRole {
    if index < k {
        FactorRole::Logical
    } else if index < k + l {
        FactorRole::Zero(index - k)
    } else {
        FactorRole::Plus(index - k - l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "role", content = "partner")]
pub enum QubitRole {
    Logical,
    ZeroAncilla,
    PlusAncilla,
    BellPair(usize),
}

/// Unencoded product state on the grid, read off `∂₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialStateLayout {
    pub grid: Grid,
    pub roles: Vec<QubitRole>,
}

pub fn initial_state_layout(k1: usize, l1: usize, k2: usize, l2: usize) -> InitialStateLayout {
    let grid = Grid::new(k1 + 2 * l1, k2 + 2 * l2);
    let d0 = canonical_product_boundary(k1, l1, k2, l2, None).expect("consistent sizes");
    let mut roles = vec![QubitRole::Logical; grid.len()];
    // weight-1 rows are single-qubit X checks, weight-1 columns single-qubit Z
    // checks, and a weight-2 row pairs two qubits into a Bell state
    for row in d0.row_vectors() {
        let support: Vec<usize> = row.iter_ones().collect();
        match support.as_slice() {
            [q] => roles[*q] = QubitRole::PlusAncilla,
            [a, b] => {
                roles[*a] = QubitRole::BellPair(*b);
                roles[*b] = QubitRole::BellPair(*a);
            }
            _ => {}
        }
    }
    for col in d0.column_vectors() {
        if let [q] = col.iter_ones().collect::<Vec<_>>().as_slice() {
            roles[*q] = QubitRole::ZeroAncilla;
        }
    }
    InitialStateLayout { grid, roles }
}

impl InitialStateLayout {
    pub fn count(&self, pred: impl Fn(&QubitRole) -> bool) -> usize {
        self.roles.iter().filter(|r| pred(r)).count()
    }

    /// Stabilizer generators of the unencoded state, X-type then Z-type.
    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        let n = self.grid.len();
        let mut out = Vec::new();
        for (q, role) in self.roles.iter().enumerate() {
            match *role {
                QubitRole::PlusAncilla => out.push(PauliOperator::x_type(crate::gf2::BitVec::unit(n, q))),
                QubitRole::ZeroAncilla => out.push(PauliOperator::z_type(crate::gf2::BitVec::unit(n, q))),
                QubitRole::BellPair(p) if q < p => {
                    let pair = crate::gf2::BitVec::from_indices(n, [q, p]);
                    out.push(PauliOperator::x_type(pair.clone()));
                    out.push(PauliOperator::z_type(pair));
                }
                _ => {}
            }
        }
        out
    }
}

/// `[lo, hi]` bounds on a distance of the product.
pub type DistanceWindow = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub n1: usize,
    pub n2: usize,
    pub k1: usize,
    pub k2: usize,
    pub k: usize,
    pub sparsity: usize,
    pub sparsity_bound: usize,
    pub distance_window_x: DistanceWindow,
    pub distance_window_z: DistanceWindow,
}

/// Parameter bookkeeping for a product; distances are `(d_X, d_Z)` per factor.
pub fn product_params(product: &ProductCode, d1: (usize, usize), d2: (usize, usize)) -> ProductReport {
    let window = |a: usize, b: usize| (a.max(b), a * b);
    ProductReport {
        n1: product.grid.n1,
        n2: product.grid.n2,
        k1: product.factor1.k(),
        k2: product.factor2.k(),
        k: product.k(),
        sparsity: product.boundary().sparsity(),
        sparsity_bound: product.factor1.sparsity() + product.factor2.sparsity(),
        distance_window_x: window(d1.0, d2.0),
        distance_window_z: window(d1.1, d2.1),
    }
}
