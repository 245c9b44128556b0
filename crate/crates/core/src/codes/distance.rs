//! Exhaustive minimum-distance oracle for CSS codes.
//!
//! An X-type logical is a vector `x` with `H_Z x = 0` that anticommutes with some
//! Z̄. Each qubit contributes the column `(H_Z e_q ‖ Z̄ e_q)`, and the search looks
//! for the fewest columns summing to `(0 ‖ nonzero)`. Weights above five are
//! handled by meet-in-the-middle over half-weight subsets.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::catalog::rotate;
use super::logicals::logical_operators;
use crate::complex::CssCode;
use crate::gf2::{independent_subset, BitVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DistanceBound {
    Exact(usize),
    /// No logical of weight `≤ cap` exists.
    GreaterThan(usize),
}

impl DistanceBound {
    pub fn exact(&self) -> Option<usize> {
        match *self {
            DistanceBound::Exact(d) => Some(d),
            DistanceBound::GreaterThan(_) => None,
        }
    }

    /// Smallest distance consistent with the bound.
    pub fn lower_bound(&self) -> usize {
        match *self {
            DistanceBound::Exact(d) => d,
            DistanceBound::GreaterThan(c) => c + 1,
        }
    }
}

impl fmt::Display for DistanceBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceBound::Exact(d) => write!(f, "{d}"),
            DistanceBound::GreaterThan(c) => write!(f, ">{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Distances {
    pub x: DistanceBound,
    pub z: DistanceBound,
}

impl Distances {
    pub fn min(&self) -> DistanceBound {
        match (self.x, self.z) {
            (DistanceBound::Exact(a), DistanceBound::Exact(b)) => DistanceBound::Exact(a.min(b)),
            (DistanceBound::Exact(a), DistanceBound::GreaterThan(c))
            | (DistanceBound::GreaterThan(c), DistanceBound::Exact(a)) => {
                if a <= c {
                    DistanceBound::Exact(a)
                } else {
                    DistanceBound::GreaterThan(c)
                }
            }
            (DistanceBound::GreaterThan(a), DistanceBound::GreaterThan(b)) => DistanceBound::GreaterThan(a.min(b)),
        }
    }
}

const PLAIN_LIMIT: usize = 5;

struct Search {
    columns: Vec<BitVec>,
    m: usize,
}

impl Search {
    fn is_logical(&self, acc: &BitVec) -> bool {
        acc.slice(0, self.m).is_zero() && !acc.is_zero()
    }

    fn dfs(&self, start: usize, left: usize, acc: &BitVec, chosen: &mut Vec<usize>) -> bool {
        if left == 0 {
            return self.is_logical(acc);
        }
        for q in start..self.columns.len() - left + 1 {
            let next = acc ^ &self.columns[q];
            chosen.push(q);
            if self.dfs(q + 1, left - 1, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn plain(&self, w: usize) -> Option<Vec<usize>> {
        let n = self.columns.len();
        if w > n {
            return None;
        }
        (0..=n - w).into_par_iter().find_map_first(|first| {
            let mut chosen = vec![first];
            self.dfs(first + 1, w - 1, &self.columns[first], &mut chosen)
                .then_some(chosen)
        })
    }

    fn subsets(&self, size: usize, mut visit: impl FnMut(&[usize], &BitVec) -> bool) {
        let n = self.columns.len();
        if size > n {
            return;
        }
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut acc = BitVec::zeros(self.columns.first().map_or(0, BitVec::len));
            for &q in &idx {
                acc ^= &self.columns[q];
            }
            if visit(&idx, &acc) {
                return;
            }
            let Some(pos) = (0..size).rev().find(|&p| idx[p] != p + n - size) else {
                return;
            };
            idx[pos] += 1;
            for p in pos + 1..size {
                idx[p] = idx[p - 1] + 1;
            }
        }
    }

    fn meet_in_the_middle(&self, w: usize) -> Option<Vec<usize>> {
        let (h1, h2) = (w.div_ceil(2), w / 2);
        // per syndrome, up to two subsets with distinct logical parts
        let mut table: HashMap<BitVec, Vec<(BitVec, Vec<usize>)>> = HashMap::new();
        self.subsets(h1, |idx, acc| {
            let entry = table.entry(acc.slice(0, self.m)).or_default();
            let log = acc.slice(self.m, acc.len() - self.m);
            if entry.len() < 2 && entry.iter().all(|(l, _)| *l != log) {
                entry.push((log, idx.to_vec()));
            }
            false
        });
        let mut found = None;
        self.subsets(h2, |idx, acc| {
            let log = acc.slice(self.m, acc.len() - self.m);
            if let Some(entry) = table.get(&acc.slice(0, self.m)) {
                if let Some((_, a)) = entry.iter().find(|(l, _)| *l != log) {
                    let mut support = BitVec::from_indices(self.columns.len(), a.iter().copied());
                    support ^= &BitVec::from_indices(self.columns.len(), idx.iter().copied());
                    found = Some(support.iter_ones().collect());
                    return true;
                }
            }
            false
        });
        found
    }
}

/// A minimum-weight X-type logical of weight `≤ cap`, if one exists.
pub fn min_weight_x_logical(code: &CssCode, cap: usize) -> Option<BitVec> {
    let n = code.n();
    let logicals = logical_operators(code);
    if logicals.k() == 0 {
        return None;
    }
    let hz: Vec<BitVec> = independent_subset(n, code.z_stabilizers())
        .into_iter()
        .map(|i| code.z_stabilizers()[i].clone())
        .collect();
    let m = hz.len();
    let columns = (0..n)
        .map(|q| {
            BitVec::from_bools(
                &hz.iter()
                    .chain(&logicals.z)
                    .map(|row| row.get(q))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let search = Search { columns, m };
    for w in 1..=cap.min(n) {
        let hit = if cap <= PLAIN_LIMIT || w == 1 {
            search.plain(w)
        } else {
            search.meet_in_the_middle(w)
        };
        if let Some(support) = hit {
            return Some(BitVec::from_indices(n, support));
        }
    }
    None
}

pub fn x_distance(code: &CssCode, cap: usize) -> DistanceBound {
    match min_weight_x_logical(code, cap) {
        Some(v) => DistanceBound::Exact(v.weight()),
        None => DistanceBound::GreaterThan(cap),
    }
}

pub fn z_distance(code: &CssCode, cap: usize) -> DistanceBound {
    x_distance(&rotate(code), cap)
}

pub fn distance(code: &CssCode, cap: usize) -> Distances {
    Distances {
        x: x_distance(code, cap),
        z: z_distance(code, cap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::catalog;
    use crate::complex::css_from_boundary;

    #[test]
    fn steane_and_four_two_two() {
        let steane = css_from_boundary(&catalog::steane());
        let d = distance(&steane, 5);
        assert_eq!((d.x, d.z), (DistanceBound::Exact(3), DistanceBound::Exact(3)));
        let (c, _) = catalog::four_two_two();
        let d = distance(&c, 4);
        assert_eq!(d.min(), DistanceBound::Exact(2));
    }

    #[test]
    fn cap_gives_lower_bound() {
        let steane = css_from_boundary(&catalog::steane());
        assert_eq!(x_distance(&steane, 2), DistanceBound::GreaterThan(2));
        assert_eq!(x_distance(&steane, 2).lower_bound(), 3);
    }

    #[test]
    fn meet_in_the_middle_agrees_with_plain() {
        let rm = catalog::reed_muller_15();
        // X logicals of RM15 have weight 7, Z logicals weight 3
        let d = distance(&rm, 8);
        assert_eq!(d.x, DistanceBound::Exact(7));
        assert_eq!(d.z, DistanceBound::Exact(3));
        assert_eq!(z_distance(&rm, 4), DistanceBound::Exact(3));
    }

    #[test]
    fn witness_is_logical() {
        let steane = css_from_boundary(&catalog::steane());
        let x = min_weight_x_logical(&steane, 3).unwrap();
        assert!(steane.z_stabilizers().iter().all(|s| !s.dot(&x)));
        assert!(!steane.x_span().contains(&x));
    }
}
