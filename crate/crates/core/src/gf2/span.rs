use super::{BinaryMatrix, BitVec};

/// Incrementally built basis of a subspace of GF(2)^n, kept in echelon form so
/// membership tests are a single reduction pass.
#[derive(Debug, Clone)]
pub struct Span {
    len: usize,
    // (pivot, vector) with every pivot distinct
    basis: Vec<(usize, BitVec)>,
}

impl Span {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            basis: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(len: usize, vectors: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut s = Self::new(len);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    /// Reduces `v` against the basis, returning the remainder.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (p, b) in &self.basis {
            if r.get(*p) {
                r ^= b;
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns `true` if it was independent of the current basis.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                for (_, b) in &mut self.basis {
                    if b.get(p) {
                        *b ^= &r;
                    }
                }
                self.basis.push((p, r));
                true
            }
        }
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        other.basis.iter().all(|(_, v)| self.contains(v))
    }

    pub fn same_as(&self, other: &Span) -> bool {
        self.dim() == other.dim() && self.contains_span(other)
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitVec> {
        self.basis.iter().map(|(_, v)| v)
    }
}

/// Greedy maximal independent subset, returned as indices into `vectors`.
pub fn independent_subset(len: usize, vectors: &[BitVec]) -> Vec<usize> {
    let mut span = Span::new(len);
    vectors
        .iter()
        .enumerate()
        .filter(|(_, v)| span.insert(v))
        .map(|(i, _)| i)
        .collect()
}

/// Precomputed solver for `A x = b`.
#[derive(Debug, Clone)]
pub struct LinearSolver {
    cols: usize,
    transform: BinaryMatrix,
    pivots: Vec<usize>,
}

impl LinearSolver {
    pub fn new(a: &BinaryMatrix) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        let mut m = a.clone();
        let mut t = BinaryMatrix::identity(rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            t.swap_rows(r, p);
            for i in 0..rows {
                if i != r && m.get(i, c) {
                    m.add_row(i, r);
                    t.add_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Self {
            cols,
            transform: t,
            pivots,
        }
    }

    /// A particular solution with all free variables zero, or `None` if `b` is not
    /// in the column space.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        let tb = self.transform.mul_vec(b);
        if tb.iter_ones().any(|i| i >= self.pivots.len()) {
            return None;
        }
        Some(BitVec::from_indices(
            self.cols,
            tb.iter_ones().map(|i| self.pivots[i]),
        ))
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_membership() {
        let a: BitVec = "1100".parse().unwrap();
        let b: BitVec = "0110".parse().unwrap();
        let s = Span::from_vectors(4, [&a, &b]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&"1010".parse().unwrap()));
        assert!(!s.contains(&"0001".parse().unwrap()));
    }

    #[test]
    fn solver_finds_solution() {
        let a = BinaryMatrix::from_rows(
            3,
            vec!["110".parse().unwrap(), "011".parse().unwrap()],
        )
        .unwrap();
        let solver = LinearSolver::new(&a);
        let b: BitVec = "10".parse().unwrap();
        let x = solver.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);

        let dependent = BinaryMatrix::from_rows(
            2,
            vec!["11".parse().unwrap(), "11".parse().unwrap()],
        )
        .unwrap();
        assert!(LinearSolver::new(&dependent).solve(&"10".parse().unwrap()).is_none());
    }
}
