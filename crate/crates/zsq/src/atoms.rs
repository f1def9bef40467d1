//! Atoms of `B(G0)`: the componentwise-minimal nonzero solutions of
//! `Σ x_g g = 0` over `x ∈ N0^{G0}`.

use crate::{GroundSet, Sequence, ZsqError};
use rayon::prelude::*;
use std::collections::HashSet;

/// Length cap used when the caller gives none.
pub const DEFAULT_BUDGET: usize = 20;

/// Atoms of `B(G0)`, sorted lexicographically by multiplicity vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomSet {
    pub atoms: Vec<Sequence>,
    /// True when the search exhausted the Hilbert basis; false when a length budget cut it off.
    pub complete: bool,
    /// Largest length explored.
    pub explored: usize,
}

/// Davenport constant, exact or a certified lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Davenport {
    pub value: u64,
    pub exact: bool,
    pub witnesses: Vec<Sequence>,
}

impl AtomSet {
    pub fn new(mut atoms: Vec<Sequence>, complete: bool, explored: usize) -> Self {
        atoms.sort();
        atoms.dedup();
        AtomSet { atoms, complete, explored }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn davenport(&self) -> Davenport {
        let value = self.atoms.iter().map(Sequence::length).max().unwrap_or(0);
        Davenport {
            value,
            exact: self.complete,
            witnesses: self.atoms.iter().filter(|a| a.length() == value && value > 0).cloned().collect(),
        }
    }

    pub fn of_length(&self, k: u64) -> Vec<&Sequence> {
        self.atoms.iter().filter(|a| a.length() == k).collect()
    }

    /// `η = max |supp(U)|` over the atoms.
    pub fn eta(&self) -> usize {
        self.atoms.iter().map(|a| a.support().len()).max().unwrap_or(0)
    }
}

/// An atom enumeration strategy, selectable by name.
pub trait AtomEnumerator: Sync {
    fn name(&self) -> &'static str;
    fn enumerate(&self, g: &GroundSet, budget: Option<usize>) -> AtomSet;
}

/// Contejean–Devie completion with dominance pruning.
pub struct Completion;

/// Exhaustive search over all multiplicity vectors up to the budget.
pub struct BruteForce;

pub static ATOM_ENUMERATORS: &[&dyn AtomEnumerator] = &[&Completion, &BruteForce];

pub fn atom_enumerator(name: &str) -> Result<&'static dyn AtomEnumerator, ZsqError> {
    ATOM_ENUMERATORS
        .iter()
        .copied()
        .find(|e| e.name() == name)
        .ok_or_else(|| ZsqError::Invalid(format!("unknown atom enumerator `{name}`")))
}

/// Enumerates atoms with the default completion strategy.
pub fn enumerate_atoms(g: &GroundSet, budget: Option<usize>) -> AtomSet {
    Completion.enumerate(g, budget)
}

pub fn davenport(g: &GroundSet, budget: Option<usize>) -> Davenport {
    enumerate_atoms(g, budget).davenport()
}

fn support_mask(x: &[u32]) -> u128 {
    if x.len() > 128 {
        return 0;
    }
    x.iter().enumerate().filter(|(_, &v)| v > 0).fold(0u128, |m, (i, _)| m | (1u128 << i))
}

struct Found {
    vecs: Vec<Vec<u32>>,
    masks: Vec<u128>,
    wide: bool,
}

impl Found {
    fn dominated_by_any(&self, y: &[u32], ymask: u128) -> bool {
        self.vecs
            .iter()
            .zip(&self.masks)
            .any(|(a, &m)| (self.wide || m & !ymask == 0) && a.iter().zip(y).all(|(p, q)| p <= q))
    }

    fn push(&mut self, x: Vec<u32>) {
        self.masks.push(support_mask(&x));
        self.vecs.push(x);
    }
}

#[derive(Clone)]
struct Node {
    x: Vec<u32>,
    s: Vec<i64>,
}

impl AtomEnumerator for Completion {
    fn name(&self) -> &'static str {
        "completion"
    }

    /// Breadth-first by length. A partial vector `x` with sum `s ≠ 0` is only
    /// extended by `g_j` with `<s, g_j> < 0`; this keeps every minimal solution
    /// reachable while the search stays finite. Partial vectors dominating a
    /// known atom are dropped.
    fn enumerate(&self, g: &GroundSet, budget: Option<usize>) -> AtomSet {
        let budget = budget.unwrap_or(DEFAULT_BUDGET);
        let n = g.len();
        let elems = g.elements();
        let mut found = Found { vecs: Vec::new(), masks: Vec::new(), wide: n > 128 };
        let mut frontier: Vec<Node> = Vec::new();
        if budget == 0 {
            return AtomSet::new(Vec::new(), n == 0, 0);
        }
        for i in 0..n {
            let mut x = vec![0u32; n];
            x[i] = 1;
            if elems[i].iter().all(|&v| v == 0) {
                found.push(x);
            } else {
                frontier.push(Node { x, s: elems[i].clone() });
            }
        }
        let mut level = 1;
        while !frontier.is_empty() && level < budget {
            let mut children: Vec<Node> = frontier
                .par_iter()
                .flat_map_iter(|node| {
                    let found = &found;
                    (0..n).filter_map(move |j| {
                        let dot: i64 = node.s.iter().zip(&elems[j]).map(|(a, b)| a * b).sum();
                        if dot >= 0 {
                            return None;
                        }
                        let mut x = node.x.clone();
                        x[j] += 1;
                        if found.dominated_by_any(&x, support_mask(&x)) {
                            return None;
                        }
                        let s = node.s.iter().zip(&elems[j]).map(|(a, b)| a + b).collect();
                        Some(Node { x, s })
                    })
                })
                .collect();
            children.par_sort_unstable_by(|a, b| a.x.cmp(&b.x));
            children.dedup_by(|a, b| a.x == b.x);
            level += 1;
            frontier = Vec::with_capacity(children.len());
            for c in children {
                if c.s.iter().all(|&v| v == 0) {
                    found.push(c.x);
                } else {
                    frontier.push(c);
                }
            }
        }
        let complete = frontier.is_empty();
        let atoms = found.vecs.into_iter().map(|x| Sequence::new(x.into_iter().map(u64::from).collect())).collect();
        AtomSet::new(atoms, complete, level)
    }
}

/// Budget used by the brute-force strategy when none is given.
pub const BRUTE_FORCE_BUDGET: usize = 7;

impl AtomEnumerator for BruteForce {
    fn name(&self) -> &'static str {
        "brute-force"
    }

    /// Visits every vector of length at most the budget; keeps zero-sum ones
    /// with no proper nonempty zero-sum sub-vector. It cannot certify that no
    /// longer atom exists, so the result is never marked complete.
    fn enumerate(&self, g: &GroundSet, budget: Option<usize>) -> AtomSet {
        let budget = budget.unwrap_or(BRUTE_FORCE_BUDGET);
        let n = g.len();
        let mut atoms = Vec::new();
        let mut x = vec![0u64; n];
        fn rec(g: &GroundSet, i: usize, left: usize, x: &mut Vec<u64>, atoms: &mut Vec<Sequence>) {
            if i == g.len() {
                let s = Sequence::new(x.clone());
                if !s.is_empty() && is_atom(g, &s) {
                    atoms.push(s);
                }
                return;
            }
            for m in 0..=left {
                x[i] = m as u64;
                rec(g, i + 1, left - m, x, atoms);
            }
            x[i] = 0;
        }
        rec(g, 0, budget, &mut x, &mut atoms);
        AtomSet::new(atoms, n == 0, budget)
    }
}

/// Zero-sum, nonempty, and without a proper nonempty zero-sum subsequence.
pub fn is_atom(g: &GroundSet, s: &Sequence) -> bool {
    !s.is_empty()
        && crate::sigma_int(g, s).is_ok_and(|v| v.iter().all(|&x| x == 0))
        && proper_zero_sum_subsequence(g, s).is_none()
}

/// A proper nonempty zero-sum subsequence of `s`, if one exists.
///
/// Dynamic programming over the reachable (sum, length) pairs of subsequences.
/// Partial sum, length, and a witness multiplicity vector on the support.
type SubsumState = (Vec<i64>, u64, Vec<u64>);

pub fn proper_zero_sum_subsequence(g: &GroundSet, s: &Sequence) -> Option<Sequence> {
    let total = s.length();
    let supp = s.support();
    let r = g.rank();
    // Each state remembers one witness multiplicity vector on the support.
    let mut states: HashSet<(Vec<i64>, u64)> = HashSet::new();
    let mut layers: Vec<Vec<SubsumState>> = vec![vec![(vec![0; r], 0, vec![0; supp.len()])]];
    states.insert((vec![0; r], 0));
    for (k, &i) in supp.iter().enumerate() {
        let prev = layers.last().unwrap().clone();
        let mut next = Vec::with_capacity(prev.len() * 2);
        for (sum, len, w) in prev {
            for m in 0..=s.mult[i] {
                let mut s2 = sum.clone();
                for (a, &b) in s2.iter_mut().zip(g.element(i)) {
                    *a += m as i64 * b;
                }
                let key = (s2.clone(), len + m);
                if m > 0 && !states.insert(key) {
                    continue;
                }
                let mut w2 = w.clone();
                w2[k] = m;
                if m > 0 && len + m < total && s2.iter().all(|&v| v == 0) {
                    let mut out = Sequence::empty(g.len());
                    for (kk, &ii) in supp.iter().enumerate() {
                        out.mult[ii] = w2[kk];
                    }
                    return Some(out);
                }
                next.push((s2, len + m, w2));
            }
        }
        layers.push(next);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_pair() {
        let g = GroundSet::new(1, vec![vec![1], vec![-1]]).unwrap();
        let a = enumerate_atoms(&g, None);
        assert!(a.complete);
        assert_eq!(a.atoms, vec![Sequence::new(vec![1, 1])]);
        assert_eq!(a.davenport().value, 2);
    }

    #[test]
    fn two_minus_three() {
        let g = GroundSet::new(1, vec![vec![2], vec![-3]]).unwrap();
        let a = enumerate_atoms(&g, None);
        assert!(a.complete);
        assert_eq!(a.atoms, vec![Sequence::new(vec![3, 2])]);
    }

    #[test]
    fn single_nonzero_element_has_no_atoms() {
        let g = GroundSet::new(1, vec![vec![4]]).unwrap();
        let a = enumerate_atoms(&g, None);
        assert!(a.complete && a.is_empty());
        assert_eq!(a.davenport().value, 0);
    }

    #[test]
    fn zero_element_is_an_atom() {
        let g = GroundSet::new(2, vec![vec![0, 0], vec![1, 0], vec![-1, 0]]).unwrap();
        let a = enumerate_atoms(&g, None);
        assert_eq!(a.atoms, vec![Sequence::new(vec![0, 1, 1]), Sequence::new(vec![1, 0, 0])]);
    }

    #[test]
    fn budget_truncates() {
        let g = GroundSet::new(1, vec![vec![5], vec![-7]]).unwrap();
        let a = enumerate_atoms(&g, Some(6));
        assert!(!a.complete);
        assert!(a.is_empty());
        let full = enumerate_atoms(&g, None);
        assert_eq!(full.atoms, vec![Sequence::new(vec![7, 5])]);
    }

    #[test]
    fn proper_subsequence_search() {
        let g = GroundSet::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert!(proper_zero_sum_subsequence(&g, &Sequence::new(vec![1, 1])).is_none());
        let w = proper_zero_sum_subsequence(&g, &Sequence::new(vec![2, 2])).unwrap();
        assert_eq!(w, Sequence::new(vec![1, 1]));
    }
}
