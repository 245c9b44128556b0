use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use super::BitVec;
use crate::{Error, Result};

/// Dense binary matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: BinaryMatrix,
    pub pivots: Vec<usize>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// All-ones `rows × cols` matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::ones(cols); rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                op: "from_rows",
                left: (rows.len(), cols),
                right: (1, bad.len()),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Result<Self> {
        Ok(Self::from_rows(rows, columns.to_vec())?.transpose())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[BitVec] {
        &self.data
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn column_vectors(&self) -> Vec<BitVec> {
        self.transpose().data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Row operation `row[target] ^= row[source]`.
    pub fn add_row(&mut self, target: usize, source: usize) {
        debug_assert_ne!(target, source);
        let src = self.data[source].clone();
        self.data[target] ^= &src;
    }

    /// Column operation `col[target] ^= col[source]`.
    pub fn add_column(&mut self, target: usize, source: usize) {
        debug_assert_ne!(target, source);
        for row in &mut self.data {
            if row.get(source) {
                row.flip(target);
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    pub fn try_add(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Matrix product mod 2.
    pub fn multiply(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "multiply",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.iter_ones() {
                    acc ^= &other.data[k];
                }
                acc
            })
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.cols);
        BitVec::from_indices(self.rows, (0..self.rows).filter(|&r| self.data[r].dot(v)))
    }

    /// `vᵀ M` for a row vector `v`.
    pub fn vec_mul(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.rows);
        let mut acc = BitVec::zeros(self.cols);
        for r in v.iter_ones() {
            acc ^= &self.data[r];
        }
        acc
    }

    /// Gauss-Jordan elimination. Pivot rows are chosen as the lowest-index
    /// candidate, so the result is deterministic.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && m.get(i, c) {
                    m.add_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right null space `{v : M v = 0}`, one vector per free column in
    /// ascending order.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let Echelon { reduced, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::unit(self.cols, f);
                for (i, &p) in pivots.iter().enumerate() {
                    if reduced.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Basis of the column space: the original columns at the pivot positions.
    pub fn image_basis(&self) -> Vec<BitVec> {
        self.echelon()
            .pivots
            .iter()
            .map(|&c| self.column(c))
            .collect()
    }

    /// Basis of the row space: the nonzero rows of the reduced echelon form.
    pub fn row_space_basis(&self) -> Vec<BitVec> {
        let Echelon { reduced, pivots } = self.echelon();
        reduced.data.into_iter().take(pivots.len()).collect()
    }

    /// Kronecker product; entry `((i1, i2), (j1, j2))` lives at row `i1 * B.rows + i2`
    /// and column `j1 * B.cols + j2`.
    pub fn tensor(&self, other: &BinaryMatrix) -> BinaryMatrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in self.data[i1].iter_ones() {
                for i2 in 0..other.rows {
                    let r = i1 * other.rows + i2;
                    for j2 in other.data[i2].iter_ones() {
                        out.data[r].flip(j1 * other.cols + j2);
                    }
                }
            }
        }
        out
    }

    pub fn invert(&self) -> Result<BinaryMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| m.get(i, c)).ok_or(Error::SingularMatrix)?;
            m.swap_rows(c, p);
            inv.swap_rows(c, p);
            for i in 0..n {
                if i != c && m.get(i, c) {
                    m.add_row(i, c);
                    inv.add_row(i, c);
                }
            }
        }
        Ok(inv)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.data.iter().map(BitVec::weight).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.data {
            for c in row.iter_ones() {
                w[c] += 1;
            }
        }
        w
    }

    /// Largest number of nonzero entries in any row or column.
    pub fn sparsity(&self) -> usize {
        let r = self.row_weights().into_iter().max().unwrap_or(0);
        let c = self.column_weights().into_iter().max().unwrap_or(0);
        r.max(c)
    }

    /// Text form: a `rows cols` header followed by one `0`/`1` line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for row in &self.data {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text form. `|` separators and surrounding whitespace on a row are
    /// ignored; errors carry 1-based line numbers.
    pub fn parse_text(text: &str) -> Result<BinaryMatrix> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hline, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty())
            .ok_or(Error::Parse {
                line: 1,
                message: "missing `rows cols` header".into(),
            })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: hline,
                message: format!("bad dimension {s:?} in header"),
            })
        };
        if dims.len() != 2 {
            return Err(Error::Parse {
                line: hline,
                message: format!("header must be `rows cols`, got {header:?}"),
            });
        }
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let mut data = Vec::with_capacity(rows);
        let mut last_line = hline;
        for (lineno, line) in lines {
            last_line = lineno;
            if line.is_empty() {
                continue;
            }
            if data.len() == rows {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("more than the declared {rows} rows"),
                });
            }
            let row: BitVec = line.parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    line: lineno,
                    message,
                },
                other => other,
            })?;
            if row.len() != cols {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("row has {} entries, expected {cols}", row.len()),
                });
            }
            data.push(row);
        }
        if data.len() != rows {
            return Err(Error::Parse {
                line: last_line,
                message: format!("expected {rows} rows, found {}", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }
}

impl Add for &BinaryMatrix {
    type Output = BinaryMatrix;

    /// Panics on a shape mismatch; use [`BinaryMatrix::try_add`] otherwise.
    fn add(self, rhs: &BinaryMatrix) -> BinaryMatrix {
        self.try_add(rhs).expect("matrix shapes differ")
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}
