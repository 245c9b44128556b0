//! Lookup and minimum-weight decoders for CSS codes.
//!
//! Recoveries are the smallest-weight Pauli with the observed syndrome, ties
//! broken by [`PauliOperator`]'s order (X part first). Syndromes outside the
//! correctable set fall back to an arbitrary pure error, which is flagged.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::distance::distance;
use crate::circuit::{Pauli, PauliOperator};
use crate::complex::{ChainComplex, CssCode};
use crate::gf2::{BinaryMatrix, BitVec, LinearSolver};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderStrategy {
    Lookup,
    MinWeight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub recovery: PauliOperator,
    /// `false` when the syndrome is not produced by any error of weight `≤ t`.
    pub within_bound: bool,
}

#[derive(Debug, Clone)]
pub struct Decoder {
    hx: BinaryMatrix,
    hz: BinaryMatrix,
    t: usize,
    strategy: DecoderStrategy,
    table: HashMap<(BitVec, BitVec), PauliOperator>,
    x_solver: LinearSolver,
    z_solver: LinearSolver,
}

/// Default bound on the number of enumerated Paulis.
pub const DEFAULT_DECODER_CAP: u128 = 5_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Calls `visit` for every Pauli of weight exactly `w` on `n` qubits.
fn for_each_weight(n: usize, w: usize, mut visit: impl FnMut(&PauliOperator)) {
    if w > n {
        return;
    }
    let mut idx: Vec<usize> = (0..w).collect();
    loop {
        let mut labels = vec![0usize; w];
        loop {
            let mut p = PauliOperator::identity(n);
            for (slot, &q) in idx.iter().enumerate() {
                p.set(q, Pauli::NONTRIVIAL[labels[slot]]);
            }
            visit(&p);
            let Some(pos) = (0..w).rev().find(|&s| labels[s] < 2) else {
                break;
            };
            labels[pos] += 1;
            labels[pos + 1..].iter_mut().for_each(|l| *l = 0);
        }
        let Some(pos) = (0..w).rev().find(|&p| idx[p] != p + n - w) else {
            return;
        };
        idx[pos] += 1;
        for p in pos + 1..w {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

impl Decoder {
    /// Decoder for X checks `hx` (rows) and Z checks `hz` correcting all Paulis of
    /// weight `≤ t`.
    pub fn new(hx: BinaryMatrix, hz: BinaryMatrix, t: usize, strategy: DecoderStrategy, cap: u128) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::DimensionMismatch {
                op: "decoder",
                left: (hx.rows(), hx.cols()),
                right: (hz.rows(), hz.cols()),
            });
        }
        let n = hx.cols();
        let requested: u128 = (1..=t).map(|w| binomial(n, w) * 3u128.pow(w as u32)).sum();
        if requested > cap {
            return Err(Error::CapExceeded { requested, cap });
        }
        let mut d = Self {
            x_solver: LinearSolver::new(&hz),
            z_solver: LinearSolver::new(&hx),
            hx,
            hz,
            t,
            strategy,
            table: HashMap::new(),
        };
        if strategy == DecoderStrategy::Lookup {
            for w in 1..=t {
                let mut level: HashMap<(BitVec, BitVec), PauliOperator> = HashMap::new();
                for_each_weight(n, w, |p| {
                    let key = d.syndrome(p);
                    if key.0.is_zero() && key.1.is_zero() || d.table.contains_key(&key) {
                        return;
                    }
                    match level.get(&key) {
                        Some(best) if best <= p => {}
                        _ => {
                            level.insert(key, p.clone());
                        }
                    }
                });
                d.table.extend(level);
            }
        }
        Ok(d)
    }

    /// Checks are the rows and columns of `δ`, zero ones included.
    pub fn for_complex(c: &ChainComplex, t: usize, strategy: DecoderStrategy, cap: u128) -> Result<Self> {
        Self::new(c.boundary().clone(), c.boundary().transpose(), t, strategy, cap)
    }

    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    pub fn correctable_weight(&self) -> usize {
        self.t
    }

    pub fn strategy(&self) -> DecoderStrategy {
        self.strategy
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    /// `(X-check bits, Z-check bits)`.
    pub fn syndrome(&self, p: &PauliOperator) -> (BitVec, BitVec) {
        (self.hx.mul_vec(p.z_bits()), self.hz.mul_vec(p.x_bits()))
    }

    pub fn decode(&self, sx: &BitVec, sz: &BitVec) -> Result<DecodeOutcome> {
        if sx.len() != self.hx.rows() {
            return Err(Error::SyndromeLength {
                expected: self.hx.rows(),
                got: sx.len(),
            });
        }
        if sz.len() != self.hz.rows() {
            return Err(Error::SyndromeLength {
                expected: self.hz.rows(),
                got: sz.len(),
            });
        }
        let n = self.n();
        if sx.is_zero() && sz.is_zero() {
            return Ok(DecodeOutcome {
                recovery: PauliOperator::identity(n),
                within_bound: true,
            });
        }
        let found = match self.strategy {
            DecoderStrategy::Lookup => self.table.get(&(sx.clone(), sz.clone())).cloned(),
            DecoderStrategy::MinWeight => (1..=self.t).find_map(|w| {
                let mut best: Option<PauliOperator> = None;
                for_each_weight(n, w, |p| {
                    let (a, b) = self.syndrome(p);
                    if &a == sx && &b == sz && best.as_ref().is_none_or(|q| p < q) {
                        best = Some(p.clone());
                    }
                });
                best
            }),
        };
        if let Some(recovery) = found {
            return Ok(DecodeOutcome {
                recovery,
                within_bound: true,
            });
        }
        Ok(DecodeOutcome {
            recovery: self.pure_error(sx, sz).unwrap_or_else(|| PauliOperator::identity(n)),
            within_bound: false,
        })
    }

    /// Some Pauli with the given syndrome, if the syndrome is consistent.
    pub fn pure_error(&self, sx: &BitVec, sz: &BitVec) -> Option<PauliOperator> {
        let z = self.z_solver.solve(sx)?;
        let x = self.x_solver.solve(sz)?;
        Some(PauliOperator::new(x, z).expect("both have n bits"))
    }
}

/// Decoder for `code` with `t = max(1, ⌊(d−1)/2⌋)`, `d` from the distance oracle.
///
/// The floor of one keeps `d = 2` codes useful for detection: weight-1 errors get
/// a weight-1 recovery with matching syndrome, whose residual may be logical.
pub fn build_decoder(code: &CssCode, strategy: DecoderStrategy, cap: u128) -> Result<Decoder> {
    let d = distance(code, 8).min().lower_bound();
    let t = ((d.saturating_sub(1)) / 2).max(1);
    Decoder::new(code.x_check_matrix(), code.z_check_matrix(), t, strategy, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::catalog;
    use crate::complex::css_from_boundary;

    fn all_weight(n: usize, w: usize) -> Vec<PauliOperator> {
        let mut v = Vec::new();
        for_each_weight(n, w, |p| v.push(p.clone()));
        v
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_weight(7, 1).len(), 21);
        assert_eq!(all_weight(4, 2).len(), 54);
        assert_eq!(binomial(147, 2), 10731);
    }

    #[test]
    fn steane_lookup_corrects_weight_one() {
        let code = css_from_boundary(&catalog::steane());
        let dec = build_decoder(&code, DecoderStrategy::Lookup, DEFAULT_DECODER_CAP).unwrap();
        assert_eq!(dec.correctable_weight(), 1);
        for e in all_weight(7, 1) {
            let (sx, sz) = dec.syndrome(&e);
            let out = dec.decode(&sx, &sz).unwrap();
            assert!(out.within_bound);
            assert!(code.is_stabilizer(&out.recovery.times(&e)), "{e}");
        }
        let zero = dec.decode(&BitVec::zeros(7), &BitVec::zeros(7)).unwrap();
        assert!(zero.recovery.is_identity());
    }

    #[test]
    fn strategies_agree() {
        let code = css_from_boundary(&catalog::steane());
        let a = build_decoder(&code, DecoderStrategy::Lookup, DEFAULT_DECODER_CAP).unwrap();
        let b = build_decoder(&code, DecoderStrategy::MinWeight, DEFAULT_DECODER_CAP).unwrap();
        for e in all_weight(7, 1).into_iter().chain(all_weight(7, 2)) {
            let (sx, sz) = a.syndrome(&e);
            assert_eq!(a.decode(&sx, &sz).unwrap(), b.decode(&sx, &sz).unwrap());
        }
    }

    #[test]
    fn detection_only_for_distance_two() {
        let (code, _) = catalog::four_two_two();
        let dec = build_decoder(&code, DecoderStrategy::Lookup, DEFAULT_DECODER_CAP).unwrap();
        for e in all_weight(4, 1) {
            let (sx, sz) = dec.syndrome(&e);
            let r = dec.decode(&sx, &sz).unwrap().recovery;
            assert_eq!(r.weight(), 1);
            assert_eq!(dec.syndrome(&r), (sx, sz));
        }
    }

    #[test]
    fn cap_and_length_errors() {
        let code = css_from_boundary(&catalog::steane());
        assert!(matches!(
            build_decoder(&code, DecoderStrategy::Lookup, 10),
            Err(Error::CapExceeded { .. })
        ));
        let dec = build_decoder(&code, DecoderStrategy::Lookup, DEFAULT_DECODER_CAP).unwrap();
        assert!(matches!(
            dec.decode(&BitVec::zeros(3), &BitVec::zeros(7)),
            Err(Error::SyndromeLength { .. })
        ));
    }
}
