//! Error bands and the band theorem checker.
//!
//! Axis-1 band `a` is the grid row `{(a, j)}`, axis-2 band `a` the column
//! `{(i, a)}`. A Pauli confined to fewer than `d₁` axis-1 bands (or fewer than
//! `d₂` axis-2 bands) cannot be a nontrivial logical of the product.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Pauli, PauliOperator};
use crate::gf2::Span;
use crate::hprod::{Grid, ProductCode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    One,
    Two,
}

impl Axis {
    pub fn from_index(a: usize) -> Result<Axis> {
        match a {
            1 => Ok(Axis::One),
            2 => Ok(Axis::Two),
            _ => Err(Error::InvalidArgument(format!("axis must be 1 or 2, got {a}"))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::One => 1,
            Axis::Two => 2,
        }
    }

    pub fn band_count(self, grid: Grid) -> usize {
        match self {
            Axis::One => grid.n1,
            Axis::Two => grid.n2,
        }
    }

    pub fn band_of(self, grid: Grid, q: usize) -> usize {
        let (i, j) = grid.coords(q);
        match self {
            Axis::One => i,
            Axis::Two => j,
        }
    }

    /// Flat qubit indices of band `a`.
    pub fn band_qubits(self, grid: Grid, a: usize) -> Vec<usize> {
        match self {
            Axis::One => (0..grid.n2).map(|j| grid.flat(a, j)).collect(),
            Axis::Two => (0..grid.n1).map(|i| grid.flat(i, a)).collect(),
        }
    }
}

/// Bands of one axis and the qubits they cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorBandSet {
    pub axis: Axis,
    pub bands: BTreeSet<usize>,
    pub grid: Grid,
}

impl ErrorBandSet {
    pub fn qubits(&self) -> Vec<usize> {
        let mut q: Vec<usize> = self
            .bands
            .iter()
            .flat_map(|&a| self.axis.band_qubits(self.grid, a))
            .collect();
        q.sort_unstable();
        q
    }
}

/// Smallest set of `axis` bands covering the support of `p`.
pub fn band_support(p: &PauliOperator, axis: Axis, grid: Grid) -> ErrorBandSet {
    ErrorBandSet {
        axis,
        bands: p.support().iter_ones().map(|q| axis.band_of(grid, q)).collect(),
        grid,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    /// Every Pauli on every choice of `budget` bands, refused above `cap` candidates.
    Exhaustive { cap: u128 },
    /// Uniform Paulis on uniformly chosen sets of between one and `budget` bands.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandTheoremReport {
    pub axis: usize,
    pub budget: usize,
    pub checked: u64,
    pub detectable: u64,
    pub stabilizer: u64,
    pub counterexample: Option<String>,
}

impl BandTheoremReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Classifies Paulis against the product's stabilizer group.
pub(crate) struct Classifier<'a> {
    boundary: &'a crate::gf2::BinaryMatrix,
    rows: Span,
    cols: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Residual {
    Identity,
    Stabilizer,
    Detectable,
    Logical,
}

impl<'a> Classifier<'a> {
    pub(crate) fn new(boundary: &'a crate::gf2::BinaryMatrix) -> Self {
        let n = boundary.rows();
        Self {
            boundary,
            rows: Span::from_vectors(n, boundary.row_vectors()),
            cols: Span::from_vectors(n, &boundary.column_vectors()),
        }
    }

    pub(crate) fn classify(&self, p: &PauliOperator) -> Residual {
        if p.is_identity() {
            return Residual::Identity;
        }
        // X checks are rows (see Z parts), Z checks are columns (see X parts)
        if !self.boundary.mul_vec(p.z_bits()).is_zero() || !self.boundary.vec_mul(p.x_bits()).is_zero() {
            return Residual::Detectable;
        }
        if self.rows.contains(p.x_bits()) && self.cols.contains(p.z_bits()) {
            Residual::Stabilizer
        } else {
            Residual::Logical
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

/// Checks that no Pauli supported on `budget` bands of `axis` is a nontrivial
/// logical of `product`.
pub fn check_band_theorem(product: &ProductCode, axis: Axis, budget: usize, mode: CheckMode) -> Result<BandTheoremReport> {
    let grid = product.grid();
    let bands = axis.band_count(grid);
    let budget = budget.min(bands);
    let classifier = Classifier::new(product.boundary());
    let mut report = BandTheoremReport {
        axis: axis.index(),
        budget,
        checked: 0,
        detectable: 0,
        stabilizer: 0,
        counterexample: None,
    };
    let record = |p: &PauliOperator, report: &mut BandTheoremReport| -> bool {
        report.checked += 1;
        match classifier.classify(p) {
            Residual::Detectable => report.detectable += 1,
            Residual::Stabilizer => report.stabilizer += 1,
            Residual::Identity => {}
            Residual::Logical => {
                report.counterexample = Some(p.to_string());
                return false;
            }
        }
        true
    };
    if budget == 0 {
        return Ok(report);
    }
    match mode {
        CheckMode::Exhaustive { cap } => {
            let choices = combinations(bands, budget);
            let width = budget * axis.band_qubits(grid, 0).len();
            let per_choice = 4u128.checked_pow(width as u32).unwrap_or(u128::MAX);
            let requested = per_choice.saturating_mul(choices.len() as u128);
            if requested > cap {
                return Err(Error::CapExceeded { requested, cap });
            }
            for choice in choices {
                let qubits: Vec<usize> = choice.iter().flat_map(|&a| axis.band_qubits(grid, a)).collect();
                for code in 0..per_choice as u64 {
                    let mut p = PauliOperator::identity(grid.len());
                    for (slot, &q) in qubits.iter().enumerate() {
                        let (x, z) = ((code >> (2 * slot)) & 1 == 1, (code >> (2 * slot + 1)) & 1 == 1);
                        p.set(q, Pauli::from_bits(x, z));
                    }
                    if !record(&p, &mut report) {
                        return Ok(report);
                    }
                }
            }
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let size = rng.random_range(1..=budget);
                let mut chosen = BTreeSet::new();
                while chosen.len() < size {
                    chosen.insert(rng.random_range(0..bands));
                }
                let mut p = PauliOperator::identity(grid.len());
                for &a in &chosen {
                    for q in axis.band_qubits(grid, a) {
                        p.set(q, Pauli::from_bits(rng.random(), rng.random()));
                    }
                }
                if !record(&p, &mut report) {
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}
