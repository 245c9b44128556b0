//! Single-sector chain complexes and the CSS codes they define.
//!
//! The rows of a boundary operator `δ` are X checks and its columns are Z checks;
//! `δ² = 0` is exactly the commutation condition. The code has
//! `k = n − 2·rank(δ)` logical qubits.

use serde::{Deserialize, Serialize};

use crate::circuit::{CnotCircuit, PauliOperator};
use crate::gf2::{independent_subset, BinaryMatrix, BitVec, LinearSolver, Span};
use crate::{Error, Result};

/// A boundary operator `δ: C → C` with `δ² = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    boundary: BinaryMatrix,
}

impl ChainComplex {
    pub fn new(boundary: BinaryMatrix) -> Result<Self> {
        if !boundary.is_square() {
            return Err(Error::NotSquare {
                rows: boundary.rows(),
                cols: boundary.cols(),
            });
        }
        if !boundary.multiply(&boundary)?.is_zero() {
            return Err(Error::NotAComplex);
        }
        Ok(Self { boundary })
    }

    /// The zero complex on `n` qubits: `n` bare logical qubits.
    pub fn zero(n: usize) -> Self {
        Self {
            boundary: BinaryMatrix::zeros(n, n),
        }
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        Self::new(BinaryMatrix::parse_text(text)?)
    }

    pub fn n(&self) -> usize {
        self.boundary.rows()
    }

    pub fn boundary(&self) -> &BinaryMatrix {
        &self.boundary
    }

    pub fn into_boundary(self) -> BinaryMatrix {
        self.boundary
    }

    pub fn rank(&self) -> usize {
        self.boundary.rank()
    }

    pub fn k(&self) -> usize {
        self.n() - 2 * self.rank()
    }

    pub fn sparsity(&self) -> usize {
        self.boundary.sparsity()
    }
}

/// A CSS code given by (possibly over-complete) X and Z generator supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    n: usize,
    x_stabilizers: Vec<BitVec>,
    z_stabilizers: Vec<BitVec>,
    x_rank: usize,
    z_rank: usize,
}

#[derive(Serialize, Deserialize)]
struct CssCodeJson {
    n: usize,
    k: usize,
    x_stabilizers: Vec<String>,
    z_stabilizers: Vec<String>,
}

impl CssCode {
    pub fn new(n: usize, x_stabilizers: Vec<BitVec>, z_stabilizers: Vec<BitVec>) -> Result<Self> {
        for s in x_stabilizers.iter().chain(&z_stabilizers) {
            if s.len() != n {
                return Err(Error::DimensionMismatch {
                    op: "css_code",
                    left: (1, n),
                    right: (1, s.len()),
                });
            }
        }
        for (i, x) in x_stabilizers.iter().enumerate() {
            for (j, z) in z_stabilizers.iter().enumerate() {
                if x.dot(z) {
                    return Err(Error::NonCommuting { x: i, z: j });
                }
            }
        }
        let x_rank = Span::from_vectors(n, &x_stabilizers).dim();
        let z_rank = Span::from_vectors(n, &z_stabilizers).dim();
        Ok(Self {
            n,
            x_stabilizers,
            z_stabilizers,
            x_rank,
            z_rank,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.x_rank - self.z_rank
    }

    pub fn x_stabilizers(&self) -> &[BitVec] {
        &self.x_stabilizers
    }

    pub fn z_stabilizers(&self) -> &[BitVec] {
        &self.z_stabilizers
    }

    pub fn x_rank(&self) -> usize {
        self.x_rank
    }

    pub fn z_rank(&self) -> usize {
        self.z_rank
    }

    pub fn is_symmetric(&self) -> bool {
        self.x_rank == self.z_rank
    }

    /// Common rank of the two stabilizer groups.
    pub fn l(&self) -> Result<usize> {
        if self.is_symmetric() {
            Ok(self.x_rank)
        } else {
            Err(Error::AsymmetricCode {
                x_rank: self.x_rank,
                z_rank: self.z_rank,
            })
        }
    }

    pub fn x_stabilizer_paulis(&self) -> Vec<PauliOperator> {
        self.x_stabilizers.iter().cloned().map(PauliOperator::x_type).collect()
    }

    pub fn z_stabilizer_paulis(&self) -> Vec<PauliOperator> {
        self.z_stabilizers.iter().cloned().map(PauliOperator::z_type).collect()
    }

    /// X generators as the rows of a matrix.
    pub fn x_check_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(self.n, self.x_stabilizers.clone()).expect("lengths checked")
    }

    pub fn z_check_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(self.n, self.z_stabilizers.clone()).expect("lengths checked")
    }

    pub fn x_span(&self) -> Span {
        Span::from_vectors(self.n, &self.x_stabilizers)
    }

    pub fn z_span(&self) -> Span {
        Span::from_vectors(self.n, &self.z_stabilizers)
    }

    /// Sparsity of this generator set: the largest generator weight or per-qubit
    /// participation count within one type.
    pub fn sparsity(&self) -> usize {
        self.x_check_matrix().sparsity().max(self.z_check_matrix().sparsity())
    }

    /// Equality of both stabilizer groups (spans, not generator lists).
    pub fn same_stabilizers(&self, other: &CssCode) -> bool {
        self.n == other.n
            && self.x_span().same_as(&other.x_span())
            && self.z_span().same_as(&other.z_span())
    }

    /// `(x-check bits, z-check bits)`: X checks see the Z part of `p`, Z checks
    /// see its X part.
    pub fn syndrome(&self, p: &PauliOperator) -> (BitVec, BitVec) {
        let sx = BitVec::from_bools(
            &self
                .x_stabilizers
                .iter()
                .map(|s| s.dot(p.z_bits()))
                .collect::<Vec<_>>(),
        );
        let sz = BitVec::from_bools(
            &self
                .z_stabilizers
                .iter()
                .map(|s| s.dot(p.x_bits()))
                .collect::<Vec<_>>(),
        );
        (sx, sz)
    }

    pub fn is_stabilizer(&self, p: &PauliOperator) -> bool {
        self.x_span().contains(p.x_bits()) && self.z_span().contains(p.z_bits())
    }

    pub fn to_json(&self) -> String {
        let j = CssCodeJson {
            n: self.n,
            k: self.k(),
            x_stabilizers: self.x_stabilizers.iter().map(ToString::to_string).collect(),
            z_stabilizers: self.z_stabilizers.iter().map(ToString::to_string).collect(),
        };
        serde_json::to_string_pretty(&j).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: CssCodeJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let parse = |v: &[String]| -> Result<Vec<BitVec>> { v.iter().map(|s| s.parse()).collect() };
        let code = Self::new(j.n, parse(&j.x_stabilizers)?, parse(&j.z_stabilizers)?)?;
        if code.k() != j.k {
            return Err(Error::InvalidArgument(format!(
                "recorded k = {} but generators give k = {}",
                j.k,
                code.k()
            )));
        }
        Ok(code)
    }
}

/// X generators are the nonzero rows of `δ`, Z generators its nonzero columns.
pub fn css_from_boundary(c: &ChainComplex) -> CssCode {
    let b = c.boundary();
    let x = b.row_vectors().iter().filter(|r| !r.is_zero()).cloned().collect();
    let z = b.column_vectors().into_iter().filter(|r| !r.is_zero()).collect();
    CssCode::new(c.n(), x, z).expect("δ² = 0 makes rows and columns commute")
}

/// `δ₀` for the `(k, l, l)` ordering: logical qubits, then `|0⟩` ancillas, then
/// `|+⟩` ancillas; its only nonzero entries are `δ₀[k+a][k+l+a]`.
pub fn canonical_boundary(k: usize, l: usize) -> BinaryMatrix {
    let n = k + 2 * l;
    let mut d = BinaryMatrix::zeros(n, n);
    for a in 0..l {
        d.set(k + a, k + l + a, true);
    }
    d
}

/// A witness `δ = W δ₀ W⁻¹` together with a CNOT circuit realizing `W`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub k: usize,
    pub l: usize,
    pub delta0: BinaryMatrix,
    pub encoder_matrix: BinaryMatrix,
    pub encoder_circuit: CnotCircuit,
    /// The boundary the witness conjugates to.
    pub boundary: BinaryMatrix,
}

impl CanonicalForm {
    // W has columns [L | y | u] with δ u_a = y_a and L completing y to a basis of ker δ
    fn assemble(n: usize, k: usize, logical: Vec<BitVec>, y: Vec<BitVec>, u: Vec<BitVec>, boundary: BinaryMatrix) -> Self {
        let l = y.len();
        let columns: Vec<BitVec> = logical.into_iter().chain(y).chain(u).collect();
        let w = BinaryMatrix::from_columns(n, &columns).expect("n-long columns");
        let circuit = CnotCircuit::synthesize(&w).expect("columns form a basis");
        Self {
            k,
            l,
            delta0: canonical_boundary(k, l),
            encoder_matrix: w,
            encoder_circuit: circuit,
            boundary,
        }
    }

    fn complete_kernel(n: usize, k: usize, y: &[BitVec], kernel: &[BitVec]) -> Vec<BitVec> {
        let mut span = Span::from_vectors(n, y);
        let logical: Vec<BitVec> = kernel.iter().filter(|v| span.insert(v)).cloned().collect();
        debug_assert_eq!(logical.len(), k);
        logical
    }

    /// Witness reproducing the given boundary exactly.
    pub fn of_complex(c: &ChainComplex) -> Self {
        let b = c.boundary();
        let n = c.n();
        let pivots = b.echelon().pivots;
        let y: Vec<BitVec> = pivots.iter().map(|&p| b.column(p)).collect();
        let u: Vec<BitVec> = pivots.iter().map(|&p| BitVec::unit(n, p)).collect();
        let logical = Self::complete_kernel(n, c.k(), &y, &b.kernel_basis());
        Self::assemble(n, c.k(), logical, y, u, b.clone())
    }

    /// Witness for a symmetric CSS code; the resulting boundary is `H_Zᵀ H_X` for
    /// greedily chosen independent generators, whose row and column spaces are
    /// the X and Z stabilizer groups.
    pub fn of_code(code: &CssCode) -> Result<Self> {
        let l = code.l()?;
        let n = code.n();
        let hx_rows: Vec<BitVec> = independent_subset(n, code.x_stabilizers())
            .into_iter()
            .map(|i| code.x_stabilizers()[i].clone())
            .collect();
        let y: Vec<BitVec> = independent_subset(n, code.z_stabilizers())
            .into_iter()
            .map(|i| code.z_stabilizers()[i].clone())
            .collect();
        let hx = BinaryMatrix::from_rows(n, hx_rows)?;
        let solver = LinearSolver::new(&hx);
        let u: Vec<BitVec> = (0..l)
            .map(|a| solver.solve(&BitVec::unit(l, a)).expect("H_X has full row rank"))
            .collect();
        let hz = BinaryMatrix::from_rows(n, y.clone())?;
        let boundary = hz.transpose().multiply(&hx)?;
        let logical = Self::complete_kernel(n, code.k(), &y, &hx.kernel_basis());
        Ok(Self::assemble(n, code.k(), logical, y, u, boundary))
    }

    /// Encoded Z̄ supports: the first `k` columns of `W`.
    pub fn logical_z(&self) -> Vec<BitVec> {
        (0..self.k).map(|i| self.encoder_matrix.column(i)).collect()
    }

    /// Encoded X̄ supports: the first `k` rows of `W⁻¹`.
    pub fn logical_x(&self) -> Vec<BitVec> {
        let inv = self.encoder_matrix.invert().expect("W is invertible");
        (0..self.k).map(|i| inv.row(i).clone()).collect()
    }
}

pub fn canonical_form(code: &CssCode) -> Result<CanonicalForm> {
    CanonicalForm::of_code(code)
}

/// `δ = W δ₀ W⁻¹` from the code's canonical form.
pub fn boundary_from_css(code: &CssCode) -> Result<ChainComplex> {
    let cf = CanonicalForm::of_code(code)?;
    ChainComplex::new(cf.boundary)
}
