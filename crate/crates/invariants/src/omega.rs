//! The ω- and τ-invariants of an atom and its tame degree.
//!
//! Both invariants are governed by the minimal covers of `u`: multisets `z`
//! of atoms with `u | π(z)` such that `u` divides no `π(z)/v` for `v ∈ z`.
//! `ω(u)` is the largest length of a minimal cover and `τ(u)` the largest
//! `min L(π(z)/u)` over them. Since divisibility only grows with `z`, any
//! product divisible by `u` contains a minimal cover, so nothing is lost.

use crate::{Elem, Factorization, InvariantError, LengthCache, Monoid};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Default bound on the length of multisets tried by the definition-budget strategy.
pub const DEFAULT_OMEGA_BUDGET: u64 = 6;
const MULTISET_LIMIT: u64 = 30_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega {
    pub atom: usize,
    pub value: u64,
    /// All minimal covers found, sorted.
    pub covers: Vec<Factorization>,
    /// False when longer minimal covers may exist.
    pub complete: bool,
    pub strategy: &'static str,
}

impl Omega {
    pub fn is_prime(&self) -> bool {
        self.complete && self.value == 1
    }

    pub fn witness(&self) -> Option<&Factorization> {
        self.covers.iter().find(|z| z.len() == self.value)
    }
}

/// A way to compute minimal covers, selectable by name.
pub trait OmegaStrategy: Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, m: &dyn Monoid, atom: usize, budget: Option<u64>) -> Result<Omega, InvariantError>;
}

/// Breadth-first growth of partial covers, each step lowering the cover deficit.
pub struct MinimalCover;

/// Every multiset of at most `B` atoms, read straight off the definition.
pub struct DefinitionBudget;

pub static OMEGA_STRATEGIES: &[&dyn OmegaStrategy] = &[&MinimalCover, &DefinitionBudget];

pub fn omega_strategy(name: &str) -> Result<&'static dyn OmegaStrategy, InvariantError> {
    OMEGA_STRATEGIES.iter().copied().find(|s| s.name() == name).ok_or_else(|| InvariantError::UnknownStrategy {
        name: name.into(),
        known: OMEGA_STRATEGIES.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "),
    })
}

pub fn omega(m: &dyn Monoid, atom: usize, strategy: &str, budget: Option<u64>) -> Result<Omega, InvariantError> {
    omega_strategy(strategy)?.compute(m, atom, budget)
}

fn is_minimal_cover(m: &dyn Monoid, u: &Elem, z: &Factorization) -> bool {
    (0..z.counts.len()).filter(|&i| z.counts[i] > 0).all(|i| {
        let mut w = z.clone();
        w.counts[i] -= 1;
        !m.divides(u, &w.eval(m))
    })
}

impl OmegaStrategy for MinimalCover {
    fn name(&self) -> &'static str {
        "minimal-cover"
    }

    /// `budget` caps the cover length; by default the deficit of the identity bounds it.
    fn compute(&self, m: &dyn Monoid, atom: usize, budget: Option<u64>) -> Result<Omega, InvariantError> {
        let u = m.atom(atom)?.clone();
        let start = m
            .cover_deficit(&u, &m.identity())
            .ok_or_else(|| InvariantError::Invalid("this monoid has no cover deficit; use definition-budget".into()))?;
        let n = m.atoms().len();
        let cap = budget.unwrap_or(start);
        let mut frontier: Vec<(Factorization, Elem, u64)> = vec![(Factorization::empty(n), m.identity(), start)];
        let mut covers: BTreeSet<Factorization> = BTreeSet::new();
        let mut depth = 0;
        while !frontier.is_empty() && depth < cap {
            let steps: Vec<(Factorization, Elem, u64)> = frontier
                .par_iter()
                .flat_map_iter(|(z, x, d)| {
                    let u = &u;
                    (0..n).filter_map(move |i| {
                        let y = m.combine(x, &m.atoms()[i]);
                        let e = m.cover_deficit(u, &y).expect("deficit available");
                        (e < *d).then(|| {
                            let mut w = z.clone();
                            w.counts[i] += 1;
                            (w, y, e)
                        })
                    })
                })
                .collect();
            depth += 1;
            let mut next = Vec::new();
            for (z, y, e) in steps {
                if e == 0 {
                    if is_minimal_cover(m, &u, &z) {
                        covers.insert(z);
                    }
                } else {
                    next.push((z, y, e));
                }
            }
            next.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
            next.dedup_by(|a, b| a.0 == b.0);
            frontier = next;
        }
        let covers: Vec<Factorization> = covers.into_iter().collect();
        Ok(Omega {
            atom,
            value: covers.iter().map(Factorization::len).max().unwrap_or(0),
            covers,
            complete: frontier.is_empty(),
            strategy: self.name(),
        })
    }
}

impl OmegaStrategy for DefinitionBudget {
    fn name(&self) -> &'static str {
        "definition-budget"
    }

    /// Complete when the budget reaches the monoid's bound on minimal cover length.
    fn compute(&self, m: &dyn Monoid, atom: usize, budget: Option<u64>) -> Result<Omega, InvariantError> {
        let u = m.atom(atom)?.clone();
        let b = budget.unwrap_or(DEFAULT_OMEGA_BUDGET);
        let n = m.atoms().len();
        let mut total = 0u64;
        let mut layer: Vec<(Factorization, Elem, usize)> = vec![(Factorization::empty(n), m.identity(), 0)];
        let mut covers = Vec::new();
        for _ in 0..b {
            let next: Vec<(Factorization, Elem, usize)> = layer
                .par_iter()
                .flat_map_iter(|(z, x, s)| {
                    (*s..n).map(move |i| {
                        let mut w = z.clone();
                        w.counts[i] += 1;
                        (w, m.combine(x, &m.atoms()[i]), i)
                    })
                })
                .collect();
            total += next.len() as u64;
            if total > MULTISET_LIMIT {
                return Err(InvariantError::Budget(format!("more than {MULTISET_LIMIT} multisets within length {b}")));
            }
            covers.extend(
                next.par_iter()
                    .filter(|(z, x, _)| m.divides(&u, x) && is_minimal_cover(m, &u, z))
                    .map(|(z, _, _)| z.clone())
                    .collect::<Vec<_>>(),
            );
            layer = next;
        }
        covers.sort();
        let complete = m.cover_length_bound(&u).is_some_and(|bound| bound <= b);
        Ok(Omega {
            atom,
            value: covers.iter().map(Factorization::len).max().unwrap_or(0),
            covers,
            complete,
            strategy: self.name(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tau {
    pub value: u64,
    /// A minimal cover attaining the value.
    pub witness: Option<Factorization>,
    pub complete: bool,
}

/// `τ(u)` from a set of minimal covers of `u`.
pub fn tau_from_covers(m: &dyn Monoid, om: &Omega) -> Tau {
    let u = &m.atoms()[om.atom];
    let mut cache = LengthCache::new(m);
    let mut best: Option<(u64, &Factorization)> = None;
    for z in &om.covers {
        let q = m.quotient(&z.eval(m), u).expect("covers are divisible by u");
        let lo = cache.min_length(&q).expect("quotient lies in the monoid");
        if best.is_none_or(|(b, _)| lo > b) {
            best = Some((lo, z));
        }
    }
    Tau { value: best.map_or(0, |b| b.0), witness: best.map(|b| b.1.clone()), complete: om.complete }
}

pub fn tau(m: &dyn Monoid, atom: usize, strategy: &str, budget: Option<u64>) -> Result<Tau, InvariantError> {
    Ok(tau_from_covers(m, &omega(m, atom, strategy, budget)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameDegree {
    pub atom: usize,
    pub omega: u64,
    pub tau: u64,
    /// `max{ω, τ + 1}`, or 0 for a prime atom.
    pub value: u64,
    pub prime: bool,
    pub complete: bool,
}

pub fn tame_degree(
    m: &dyn Monoid,
    atom: usize,
    strategy: &str,
    budget: Option<u64>,
) -> Result<TameDegree, InvariantError> {
    let om = omega(m, atom, strategy, budget)?;
    let t = tau_from_covers(m, &om);
    let prime = om.is_prime();
    Ok(TameDegree {
        atom,
        omega: om.value,
        tau: t.value,
        value: if prime { 0 } else { om.value.max(t.value + 1) },
        prime,
        complete: om.complete,
    })
}
