//! Factorizations, sets of lengths, distances and the catenary degree.

use crate::{Elem, InvariantError, Monoid};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap, HashSet};

/// A formal product of atoms, stored as a count per atom index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization {
    pub counts: Vec<u32>,
}

impl Factorization {
    pub fn empty(n: usize) -> Self {
        Self { counts: vec![0; n] }
    }

    pub fn len(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// `π(z)`.
    pub fn eval(&self, m: &dyn Monoid) -> Elem {
        let mut x = m.identity();
        for (i, &c) in self.counts.iter().enumerate() {
            for _ in 0..c {
                x = m.combine(&x, &m.atoms()[i]);
            }
        }
        x
    }

    /// Atom indices with repetition, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.counts.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize)).collect()
    }
}

/// `d(z, z') = max{|z / gcd|, |z' / gcd|}`.
pub fn distance(z: &Factorization, w: &Factorization) -> u64 {
    let (mut a, mut b) = (0u64, 0u64);
    for (&x, &y) in z.counts.iter().zip(&w.counts) {
        let g = x.min(y);
        a += (x - g) as u64;
        b += (y - g) as u64;
    }
    a.max(b)
}

/// All factorizations of `x`, in lexicographic order of their counts.
///
/// Depth-first over atoms in non-decreasing index order; a branch is cut as soon
/// as no remaining atom is among the candidates that must occur in `x`.
pub fn factorizations(m: &dyn Monoid, x: &Elem) -> Vec<Factorization> {
    fn rec(m: &dyn Monoid, x: &Elem, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Factorization>) {
        if m.level(x) == 0 {
            out.push(Factorization { counts: cur.clone() });
            return;
        }
        let cands = m.candidate_atoms(x);
        if cands.iter().all(|&i| i < start) {
            return;
        }
        for i in start..m.atoms().len() {
            if let Some(q) = m.quotient(x, &m.atoms()[i]) {
                cur[i] += 1;
                rec(m, &q, i, cur, out);
                cur[i] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(m, x, 0, &mut vec![0; m.atoms().len()], &mut out);
    out.sort();
    out
}

pub fn has_factorization(m: &dyn Monoid, x: &Elem) -> bool {
    !LengthCache::new(m).lengths(x).is_empty()
}

/// Memoized sets of lengths. Every factorization of `x` contains one of the
/// candidate atoms, so `L(x) = ⋃ 1 + L(x/a)` over the candidates only.
pub struct LengthCache<'a> {
    m: &'a dyn Monoid,
    memo: HashMap<Elem, BTreeSet<u64>>,
}

impl<'a> LengthCache<'a> {
    pub fn new(m: &'a dyn Monoid) -> Self {
        Self { m, memo: HashMap::new() }
    }

    /// `L(x)`; empty when `x` is not in the monoid.
    pub fn lengths(&mut self, x: &Elem) -> BTreeSet<u64> {
        if self.m.level(x) == 0 {
            return BTreeSet::from([0]);
        }
        if let Some(l) = self.memo.get(x) {
            return l.clone();
        }
        let mut out = BTreeSet::new();
        for i in self.m.candidate_atoms(x) {
            if let Some(q) = self.m.quotient(x, &self.m.atoms()[i]) {
                out.extend(self.lengths(&q).into_iter().map(|l| l + 1));
            }
        }
        self.memo.insert(x.clone(), out.clone());
        out
    }

    pub fn min_length(&mut self, x: &Elem) -> Option<u64> {
        self.lengths(x).first().copied()
    }

    pub fn max_length(&mut self, x: &Elem) -> Option<u64> {
        self.lengths(x).last().copied()
    }
}

pub fn set_of_lengths(m: &dyn Monoid, x: &Elem) -> BTreeSet<u64> {
    LengthCache::new(m).lengths(x)
}

/// Successive differences of a set of lengths.
pub fn delta_set(l: &BTreeSet<u64>) -> BTreeSet<u64> {
    l.iter().zip(l.iter().skip(1)).map(|(a, b)| b - a).collect()
}

/// Catenary degree of one element with the factorizations it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catenary {
    pub value: u64,
    pub factorizations: Vec<Factorization>,
}

/// Least `N` connecting all factorizations of `x` by steps of distance at most
/// `N`: the bottleneck edge of a minimum spanning tree on the distance graph.
pub fn catenary_element(m: &dyn Monoid, x: &Elem) -> Result<Catenary, InvariantError> {
    let zs = factorizations(m, x);
    if zs.is_empty() {
        return Err(InvariantError::NotInMonoid);
    }
    let value = bottleneck(&zs);
    Ok(Catenary { value, factorizations: zs })
}

fn bottleneck(zs: &[Factorization]) -> u64 {
    let n = zs.len();
    if n < 2 {
        return 0;
    }
    let mut edges: Vec<(u64, usize, usize)> =
        (0..n).into_par_iter().flat_map_iter(|i| (i + 1..n).map(move |j| (distance(&zs[i], &zs[j]), i, j))).collect();
    edges.par_sort_unstable();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut joined = 1;
    for (d, i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            joined += 1;
            if joined == n {
                return d;
            }
        }
    }
    unreachable!("complete graph is connected")
}

/// Distinct elements that are products of between 1 and `max_atoms` atoms, sorted.
pub fn elements_up_to(m: &dyn Monoid, max_atoms: usize) -> Vec<Elem> {
    let mut all: HashSet<Elem> = HashSet::new();
    let mut layer: HashSet<Elem> = HashSet::from([m.identity()]);
    for _ in 0..max_atoms {
        layer =
            layer.par_iter().flat_map_iter(|x| m.atoms().iter().map(move |a| m.combine(x, a))).collect::<HashSet<_>>();
        all.extend(layer.iter().cloned());
    }
    let mut v: Vec<Elem> = all.into_iter().collect();
    v.sort();
    v
}

/// Outcome of checking `|L(x)| = 1` on all products of at most `budget` atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfFactorialProbe {
    pub half_factorial: bool,
    pub checked: usize,
    /// An element with two distinct lengths, and its set of lengths.
    pub witness: Option<(Elem, BTreeSet<u64>)>,
}

pub fn half_factorial_probe(m: &dyn Monoid, budget: usize) -> HalfFactorialProbe {
    let elements = elements_up_to(m, budget);
    let mut cache = LengthCache::new(m);
    for x in &elements {
        let l = cache.lengths(x);
        if l.len() > 1 {
            return HalfFactorialProbe {
                half_factorial: false,
                checked: elements.len(),
                witness: Some((x.clone(), l)),
            };
        }
    }
    HalfFactorialProbe { half_factorial: true, checked: elements.len(), witness: None }
}

/// Largest catenary degree over products of at most `budget` atoms, with a maximizing element.
pub fn max_catenary(m: &dyn Monoid, budget: usize) -> (u64, Option<Elem>) {
    elements_up_to(m, budget)
        .par_iter()
        .map(|x| (bottleneck(&factorizations(m, x)), x.clone()))
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .map(|(c, x)| (c, Some(x)))
        .unwrap_or((0, None))
}
