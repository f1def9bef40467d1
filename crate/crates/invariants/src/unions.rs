//! Unions of sets of lengths `U_k` and their extremes `ρ_k`, `λ_k`.
//!
//! `k ∈ L(a)` forces `a` to be a product of `k` atoms, so scanning those
//! products is exact.

use crate::{Elem, InvariantError, LengthCache, Monoid};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashSet};

/// Default cap on the number of `k`-multisets visited by the exhaustive strategy.
pub const DEFAULT_MULTISET_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionOfLengths {
    pub k: usize,
    /// The full union when the strategy computes it.
    pub lengths: Option<BTreeSet<u64>>,
    pub rho: u64,
    pub lambda: u64,
    /// Elements whose length sets realize `ρ_k` and `λ_k`.
    pub rho_witness: Elem,
    pub lambda_witness: Elem,
    pub elements_examined: usize,
}

/// A way to compute `U_k`, selectable by name.
pub trait UnionStrategy: Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, m: &dyn Monoid, k: usize, budget: Option<u64>) -> Result<UnionOfLengths, InvariantError>;
}

/// Every multiset of `k` atoms, deduplicated by the element it multiplies to.
pub struct Exhaustive;

/// Branch and bound for `ρ_k` and `λ_k` using additive levels; leaves `lengths` empty.
pub struct Extremal;

pub static UNION_STRATEGIES: &[&dyn UnionStrategy] = &[&Exhaustive, &Extremal];

pub fn union_strategy(name: &str) -> Result<&'static dyn UnionStrategy, InvariantError> {
    UNION_STRATEGIES.iter().copied().find(|s| s.name() == name).ok_or_else(|| InvariantError::UnknownStrategy {
        name: name.into(),
        known: UNION_STRATEGIES.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "),
    })
}

pub fn union_of_lengths(
    m: &dyn Monoid,
    k: usize,
    strategy: &str,
    budget: Option<u64>,
) -> Result<UnionOfLengths, InvariantError> {
    union_strategy(strategy)?.compute(m, k, budget)
}

fn multiset_count(n: u64, k: u64) -> u64 {
    // C(n + k - 1, k), saturating.
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 + i) / (i + 1);
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

fn check_k(m: &dyn Monoid, k: usize) -> Result<(), InvariantError> {
    if k == 0 {
        return Err(InvariantError::Invalid("k must be at least 1".into()));
    }
    if m.atoms().is_empty() {
        return Err(InvariantError::Invalid("monoid has no atoms".into()));
    }
    Ok(())
}

impl UnionStrategy for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn compute(&self, m: &dyn Monoid, k: usize, budget: Option<u64>) -> Result<UnionOfLengths, InvariantError> {
        check_k(m, k)?;
        let n = m.atoms().len();
        let count = multiset_count(n as u64, k as u64);
        let cap = budget.unwrap_or(DEFAULT_MULTISET_BUDGET);
        if count > cap {
            return Err(InvariantError::Budget(format!("{count} multisets of {k} atoms exceed the budget {cap}")));
        }
        // Layer j holds the distinct products of j atoms with largest index i.
        let mut layer: Vec<(Elem, usize)> = vec![(m.identity(), 0)];
        for _ in 0..k {
            let mut next: Vec<(Elem, usize)> = layer
                .par_iter()
                .flat_map_iter(|(x, s)| (*s..n).map(move |i| (m.combine(x, &m.atoms()[i]), i)))
                .collect();
            next.par_sort_unstable();
            next.dedup();
            layer = next;
        }
        let elements: Vec<Elem> = {
            let set: HashSet<Elem> = layer.into_iter().map(|(x, _)| x).collect();
            let mut v: Vec<Elem> = set.into_iter().collect();
            v.sort();
            v
        };
        let sets: Vec<(Elem, BTreeSet<u64>)> =
            elements.par_iter().map_init(|| LengthCache::new(m), |cache, x| (x.clone(), cache.lengths(x))).collect();
        let mut lengths = BTreeSet::new();
        let (mut rho, mut lambda) = (0u64, u64::MAX);
        let (mut rw, mut lw) = (m.identity(), m.identity());
        for (x, l) in &sets {
            lengths.extend(l.iter().copied());
            let (lo, hi) = (*l.first().expect("k atoms"), *l.last().expect("k atoms"));
            if hi > rho {
                rho = hi;
                rw = x.clone();
            }
            if lo < lambda {
                lambda = lo;
                lw = x.clone();
            }
        }
        Ok(UnionOfLengths {
            k,
            lengths: Some(lengths),
            rho,
            lambda,
            rho_witness: rw,
            lambda_witness: lw,
            elements_examined: sets.len(),
        })
    }
}

struct Search<'a, 'b> {
    m: &'a dyn Monoid,
    order: Vec<usize>,
    levels: Vec<u64>,
    min_level: u64,
    max_level: u64,
    k: usize,
    cache: LengthCache<'b>,
    best: u64,
    witness: Elem,
    visited: usize,
    budget: u64,
}

impl Search<'_, '_> {
    /// Maximizes `max L` over products of `k` atoms.
    fn rho(&mut self, pos: usize, depth: usize, x: &Elem, level: u64) -> Result<(), InvariantError> {
        if depth == self.k {
            self.visited += 1;
            let hi = self.cache.max_length(x).expect("product of atoms");
            if hi > self.best {
                self.best = hi;
                self.witness = x.clone();
            }
            return Ok(());
        }
        for p in pos..self.order.len() {
            // Atoms are sorted by decreasing level, so later picks weigh at most `levels[p]`.
            let reach = level + self.levels[p] * (self.k - depth) as u64;
            if reach / self.min_level <= self.best {
                break;
            }
            self.tick()?;
            let y = self.m.combine(x, &self.m.atoms()[self.order[p]]);
            self.rho(p, depth + 1, &y, level + self.levels[p])?;
        }
        Ok(())
    }

    /// Minimizes `min L` over products of `k` atoms.
    fn lambda(&mut self, pos: usize, depth: usize, x: &Elem, level: u64) -> Result<(), InvariantError> {
        if depth == self.k {
            self.visited += 1;
            let lo = self.cache.min_length(x).expect("product of atoms");
            if lo < self.best {
                self.best = lo;
                self.witness = x.clone();
            }
            return Ok(());
        }
        let floor = *self.levels.last().expect("nonempty");
        for p in pos..self.order.len() {
            let least = level + self.levels[p] + floor * (self.k - depth - 1) as u64;
            if least.div_ceil(self.max_level) >= self.best {
                continue;
            }
            self.tick()?;
            let y = self.m.combine(x, &self.m.atoms()[self.order[p]]);
            self.lambda(p, depth + 1, &y, level + self.levels[p])?;
        }
        Ok(())
    }

    fn tick(&mut self) -> Result<(), InvariantError> {
        if self.budget == 0 {
            return Err(InvariantError::Budget("extremal search node budget exhausted".into()));
        }
        self.budget -= 1;
        Ok(())
    }
}

impl UnionStrategy for Extremal {
    fn name(&self) -> &'static str {
        "extremal"
    }

    fn compute(&self, m: &dyn Monoid, k: usize, budget: Option<u64>) -> Result<UnionOfLengths, InvariantError> {
        check_k(m, k)?;
        let mut order: Vec<usize> = (0..m.atoms().len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(m.level(&m.atoms()[i])));
        let levels: Vec<u64> = order.iter().map(|&i| m.level(&m.atoms()[i])).collect();
        let mut s = Search {
            m,
            min_level: *levels.last().expect("nonempty"),
            max_level: levels[0],
            order,
            levels,
            k,
            cache: LengthCache::new(m),
            best: k as u64,
            witness: m.identity(),
            visited: 0,
            budget: budget.unwrap_or(DEFAULT_MULTISET_BUDGET),
        };
        // Any product of k atoms has k among its lengths, so k seeds both searches.
        s.rho(0, 0, &m.identity(), 0)?;
        let (rho, rho_witness) = (s.best, std::mem::replace(&mut s.witness, m.identity()));
        s.best = k as u64;
        s.lambda(0, 0, &m.identity(), 0)?;
        let (lambda, lambda_witness) = (s.best, s.witness.clone());
        // Seeds that were never improved still need a concrete witness.
        let fallback = || (0..k).fold(m.identity(), |x, _| m.combine(&x, &m.atoms()[0]));
        Ok(UnionOfLengths {
            k,
            lengths: None,
            rho,
            lambda,
            rho_witness: if rho_witness == m.identity() { fallback() } else { rho_witness },
            lambda_witness: if lambda_witness == m.identity() { fallback() } else { lambda_witness },
            elements_examined: s.visited,
        })
    }
}
