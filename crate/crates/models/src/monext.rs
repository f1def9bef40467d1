//! `H0 ⋉ D = (H0 ∖ H0^×) × D ∪ H0^× × {1_D}`.
//!
//! Elements are the concatenation of an `H0` element and a `D` element. `D`
//! is a finite abelian group or a free monoid `N0^k`; in the free case the
//! atom list is truncated to `D`-parts of total size at most a given bound,
//! which is exact for every element whose `D`-part stays within it. Quotients
//! of such elements can leave the truncation, so only `ω` is computed there.

use crate::group::FiniteAbelianGroup;
use crate::ModelError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use zsl_invariants::{
    catenary_element, elements_up_to, factorizations, has_factorization, omega, tame_degree, Elem, LengthCache, Monoid,
    PresentedMonoid,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DPart {
    Group(FiniteAbelianGroup),
    /// `N0^rank`, atoms listed with `D`-part of size at most `truncation`.
    Free {
        rank: usize,
        truncation: u64,
    },
}

impl DPart {
    pub fn dim(&self) -> usize {
        match self {
            DPart::Group(g) => g.rank(),
            DPart::Free { rank, .. } => *rank,
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            DPart::Group(g) => g.is_trivial(),
            DPart::Free { rank, .. } => *rank == 0,
        }
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.dim()]
    }

    fn add(&self, x: &[i64], y: &[i64]) -> Elem {
        match self {
            DPart::Group(g) => g.add(x, y),
            DPart::Free { .. } => x.iter().zip(y).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub(&self, x: &[i64], y: &[i64]) -> Option<Elem> {
        match self {
            DPart::Group(g) => Some(g.sub(x, y)),
            DPart::Free { .. } => {
                let d: Elem = x.iter().zip(y).map(|(a, b)| a - b).collect();
                d.iter().all(|&v| v >= 0).then_some(d)
            }
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        match self {
            DPart::Group(g) => g.contains(x),
            DPart::Free { rank, .. } => x.len() == *rank && x.iter().all(|&v| v >= 0),
        }
    }

    /// Group elements, or free vectors of size at most the truncation.
    pub fn listed_elements(&self) -> Vec<Elem> {
        match self {
            DPart::Group(g) => g.elements(),
            DPart::Free { rank, truncation } => {
                let mut out = vec![Vec::new()];
                for _ in 0..*rank {
                    out = out
                        .into_iter()
                        .flat_map(|p: Elem| {
                            let used: i64 = p.iter().sum();
                            (0..=*truncation as i64 - used).map(move |v| {
                                let mut q = p.clone();
                                q.push(v);
                                q
                            })
                        })
                        .collect();
                }
                out.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
                out
            }
        }
    }

    /// Free part: the coordinate deficit of `d` against `f`; groups: zero.
    fn deficit(&self, d: &[i64], f: &[i64]) -> u64 {
        match self {
            DPart::Group(_) => 0,
            DPart::Free { .. } => d.iter().zip(f).map(|(a, b)| (a - b).max(0) as u64).sum(),
        }
    }
}

pub struct Monext {
    h0: Box<dyn Monoid>,
    d: DPart,
    h0_dim: usize,
    d_parts: Vec<Elem>,
    atoms: Vec<Elem>,
}

impl std::fmt::Debug for Monext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Monext").field("d", &self.d).field("atoms", &self.atoms.len()).finish()
    }
}

impl Monext {
    pub fn new(h0: Box<dyn Monoid>, d: DPart) -> Result<Self, ModelError> {
        let h0_dim = h0.identity().len();
        if h0.atoms().is_empty() {
            return Err(ModelError::Spec("monext: H0 has no atoms".into()));
        }
        let d_parts = d.listed_elements();
        let atoms = h0
            .atoms()
            .iter()
            .flat_map(|v| {
                d_parts.iter().map(move |e| {
                    let mut a = v.clone();
                    a.extend(e);
                    a
                })
            })
            .collect();
        Ok(Self { h0, d, h0_dim, d_parts, atoms })
    }

    pub fn h0(&self) -> &dyn Monoid {
        self.h0.as_ref()
    }

    pub fn d(&self) -> &DPart {
        &self.d
    }

    pub fn pair(&self, a: &[i64], d: &[i64]) -> Elem {
        let mut x = a.to_vec();
        x.extend(d);
        x
    }

    pub fn split<'a>(&self, x: &'a [i64]) -> (&'a [i64], &'a [i64]) {
        x.split_at(self.h0_dim)
    }

    /// Index of the atom `(v, e)` for the `H0` atom index `v`.
    pub fn atom_index(&self, v: usize, e: &[i64]) -> Option<usize> {
        self.d_parts.iter().position(|p| p.as_slice() == e).map(|k| v * self.d_parts.len() + k)
    }

    pub fn contains(&self, x: &Elem) -> bool {
        if x.len() != self.h0_dim + self.d.dim() {
            return false;
        }
        let (a, d) = self.split(x);
        let a = a.to_vec();
        self.d.contains(d)
            && has_factorization(self.h0.as_ref(), &a)
            && (self.h0.level(&a) > 0 || d.iter().all(|&v| v == 0))
    }
}

impl Monoid for Monext {
    fn atoms(&self) -> &[Elem] {
        &self.atoms
    }

    fn identity(&self) -> Elem {
        self.pair(&self.h0.identity(), &self.d.zero())
    }

    fn combine(&self, x: &Elem, y: &Elem) -> Elem {
        let (a, d) = self.split(x);
        let (b, e) = self.split(y);
        self.pair(&self.h0.combine(&a.to_vec(), &b.to_vec()), &self.d.add(d, e))
    }

    fn quotient(&self, y: &Elem, x: &Elem) -> Option<Elem> {
        let (b, f) = self.split(y);
        let (a, e) = self.split(x);
        let q = self.h0.quotient(&b.to_vec(), &a.to_vec())?;
        let r = self.d.sub(f, e)?;
        (self.h0.level(&q) > 0 || r.iter().all(|&v| v == 0)).then(|| self.pair(&q, &r))
    }

    fn level(&self, x: &Elem) -> u64 {
        self.h0.level(&self.split(x).0.to_vec())
    }

    /// For an atom `u = (a, d)`: zero on divisibility, otherwise `2(δ + ε) + 1`
    /// with `δ` the `H0` deficit and `ε` the free `D` deficit. The odd offset
    /// leaves a step for the cover `(a, e)(v, e')` with `e ≠ d`, whose first
    /// atom removes `δ` while `u` still fails to divide.
    fn cover_deficit(&self, u: &Elem, x: &Elem) -> Option<u64> {
        if self.divides(u, x) {
            return Some(0);
        }
        let (a, d) = self.split(u);
        let (b, f) = self.split(x);
        let delta = self.h0.cover_deficit(&a.to_vec(), &b.to_vec())?;
        Some(2 * (delta + self.d.deficit(d, f)) + 1)
    }

    fn candidate_atoms(&self, x: &Elem) -> Vec<usize> {
        let n = self.d_parts.len();
        self.h0
            .candidate_atoms(&self.split(x).0.to_vec())
            .into_iter()
            .flat_map(|v| v * n..(v + 1) * n)
            .filter(|&i| self.divides(&self.atoms[i], x))
            .collect()
    }
}

/// Result of replaying the transfer conditions for `θ: H0 ⋉ D → H0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    pub samples: usize,
    /// `θ` is onto and only the identity maps to a unit.
    pub t1: bool,
    /// Every sampled split `a = bc` lifts.
    pub t2: bool,
    /// `L_H((a, d)) = L_H0(a)` on every sample.
    pub lengths: bool,
    pub counterexample: Option<String>,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.t1 && self.t2 && self.lengths
    }
}

/// Checks the transfer conditions on `samples` seeded triples `(d, b, c)` with
/// `b, c` products of at most `level` atoms of `H0` (or units).
pub fn monext_theta_check(m: &Monext, samples: usize, seed: u64, level: usize) -> ThetaReport {
    let h0 = m.h0();
    let mut pool = vec![h0.identity()];
    pool.extend(elements_up_to(h0, level));
    let d_pool = m.d().listed_elements();
    let mut counterexample = None;

    let mut t1 = pool.iter().all(|a| m.contains(&m.pair(a, &m.d().zero())));
    for e in &d_pool {
        let unit_preimage = m.contains(&m.pair(&h0.identity(), e));
        if unit_preimage != e.iter().all(|&v| v == 0) {
            t1 = false;
            counterexample.get_or_insert(format!("T1: (1, {e:?}) membership is {unit_preimage}"));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<(Elem, Elem, Elem)> = (0..samples)
        .map(|_| {
            let b = pool[rng.gen_range(0..pool.len())].clone();
            let c = pool[rng.gen_range(0..pool.len())].clone();
            let d = d_pool[rng.gen_range(0..d_pool.len())].clone();
            (b, c, d)
        })
        .collect();
    let results: Vec<(bool, bool, String)> = triples
        .par_iter()
        .map(|(b, c, d)| {
            let a = h0.combine(b, c);
            let d = if h0.level(&a) == 0 { m.d().zero() } else { d.clone() };
            let lifts = d_pool.iter().any(|e| {
                let Some(rest) = m.d().sub(&d, e) else { return false };
                m.contains(&m.pair(b, e)) && m.contains(&m.pair(c, &rest))
            });
            let mut lh = LengthCache::new(m);
            let mut l0 = LengthCache::new(h0);
            let same = lh.lengths(&m.pair(&a, &d)) == l0.lengths(&a);
            (lifts, same, format!("a = {b:?}·{c:?}, d = {d:?}"))
        })
        .collect();
    let t2 = results.iter().all(|r| r.0);
    let lengths = results.iter().all(|r| r.1);
    if let Some(r) = results.iter().find(|r| !r.0 || !r.1) {
        counterexample.get_or_insert(r.2.clone());
    }
    ThetaReport { samples, t1, t2, lengths, counterexample }
}

/// The units of `H0 ⋉ D` are `H0^× × {1}`: for every listed `d ≠ 1`, `(1, d) ∉ H`
/// while `(a, d) ∈ H` for each atom `a` of `H0`.
pub fn units_check(m: &Monext) -> bool {
    let h0 = m.h0();
    m.d().listed_elements().iter().all(|e| {
        let is_one = e.iter().all(|&v| v == 0);
        m.contains(&m.pair(&h0.identity(), e)) == is_one && h0.atoms().iter().all(|a| m.contains(&m.pair(a, e)))
    })
}

/// `(a, d0)·(a, 1)^{-1} = (1, d0)` lies in the quotient group but not in `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonSaturationWitness {
    pub numerator: Elem,
    pub denominator: Elem,
    pub quotient: Elem,
}

pub fn non_saturation_witness(m: &Monext) -> Option<NonSaturationWitness> {
    let h0 = m.h0();
    let d0 = m.d().listed_elements().into_iter().find(|e| e.iter().any(|&v| v != 0))?;
    let a = h0.atoms()[0].clone();
    let numerator = m.pair(&a, &d0);
    let denominator = m.pair(&a, &m.d().zero());
    let quotient = m.pair(&h0.identity(), &d0);
    let ok = m.contains(&numerator)
        && m.contains(&denominator)
        && m.combine(&denominator, &quotient) == numerator
        && !m.contains(&quotient);
    ok.then_some(NonSaturationWitness { numerator, denominator, quotient })
}

/// `ω`, `τ` and `t` of the atom `(u, d)`: closed form next to the engine's values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonextInvariants {
    pub h0_prime: bool,
    pub omega_formula: Option<u64>,
    pub tau_formula: Option<u64>,
    pub tame_formula: Option<u64>,
    /// Free `D`: `max{ω(H0,u), |d|} ≤ ω ≤ ω(H0,u) + |d| + ε`.
    pub omega_bracket: Option<(u64, u64)>,
    pub omega_oracle: u64,
    /// Group `D` only: with free `D` the quotient `π(z)/u` of a cover can leave the truncation.
    pub tau_oracle: Option<u64>,
    pub tame_oracle: Option<u64>,
    pub oracle_complete: bool,
    /// Free nontrivial `D`: `ω(H)` and `t(H)` are infinite.
    pub unbounded: bool,
}

impl MonextInvariants {
    pub fn agrees(&self) -> bool {
        match self.omega_bracket {
            Some((lo, hi)) => (lo..=hi).contains(&self.omega_oracle),
            None => {
                self.omega_formula == Some(self.omega_oracle)
                    && self.tau_formula == self.tau_oracle
                    && self.tame_formula == self.tame_oracle
            }
        }
    }
}

pub fn monext_invariants(
    m: &Monext,
    u: usize,
    d: &[i64],
    strategy: &str,
    budget: Option<u64>,
) -> Result<MonextInvariants, ModelError> {
    let h0 = m.h0();
    let base = tame_degree(h0, u, "minimal-cover", None)?;
    let idx =
        m.atom_index(u, d).ok_or_else(|| ModelError::Spec(format!("monext: {d:?} is not a listed element of D")))?;
    let (omega_oracle, tau_oracle, tame_oracle, complete) = match m.d() {
        DPart::Free { .. } => {
            let w = omega(m, idx, strategy, budget)?;
            (w.value, None, None, w.complete)
        }
        DPart::Group(_) => {
            let t = tame_degree(m, idx, strategy, budget)?;
            (t.omega, Some(t.tau), Some(t.value), t.complete)
        }
    };
    let (omega_formula, tau_formula, tame_formula, omega_bracket, unbounded) = match m.d() {
        _ if m.d().is_trivial() => (Some(base.omega), Some(base.tau), Some(base.value), None, false),
        DPart::Group(_) if base.prime => (Some(2), Some(1), Some(2), None, false),
        DPart::Group(_) => (Some(base.omega), Some(base.tau), Some(base.value), None, false),
        DPart::Free { .. } => {
            let size = d.iter().sum::<i64>() as u64;
            let eps = u64::from(base.prime && size == 0);
            (None, None, None, Some((base.omega.max(size), base.omega + size + eps)), true)
        }
    };
    Ok(MonextInvariants {
        h0_prime: base.prime,
        omega_formula,
        tau_formula,
        tame_formula,
        omega_bracket,
        omega_oracle,
        tau_oracle,
        tame_oracle,
        oracle_complete: complete && base.complete,
        unbounded,
    })
}

/// `ω(H0 ⋉ N0, (u, k))` for `k = 0..=kmax`, each on its own truncation.
pub fn free_omega_growth(h0: &PresentedMonoid, u: usize, kmax: u64) -> Result<Vec<(u64, u64)>, ModelError> {
    (0..=kmax)
        .map(|k| {
            let m = Monext::new(Box::new(h0.clone()), DPart::Free { rank: 1, truncation: k + 1 })?;
            let idx = m.atom_index(u, &[k as i64]).expect("listed");
            Ok((k, omega(&m, idx, "minimal-cover", None)?.value))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CatenaryCase {
    /// `D^× = {1, d}` and `Z(a) = {u²}`.
    UnitPairSquare,
    /// `D` reduced, `d = 1`, `a` factors uniquely.
    ReducedIdentity,
    /// `D` reduced, `d` an atom of `D`, `Z(a) = {u^k}` with `k ≥ 2`.
    ReducedAtomPower,
    /// `max{2, c_H0(a)}`.
    General,
    /// `D` trivial: `H = H0`.
    TrivialD,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonextCatenary {
    pub case: CatenaryCase,
    pub formula: u64,
    /// Catenary degree from the explicit factorizations of `(a, d)`.
    pub oracle: u64,
    pub factorization_count: usize,
}

pub fn monext_catenary(m: &Monext, a: &Elem, d: &[i64]) -> Result<MonextCatenary, ModelError> {
    let h0 = m.h0();
    let z0 = factorizations(h0, a);
    if z0.is_empty() || h0.level(a) == 0 || z0.iter().all(|z| z.len() == 1) {
        return Err(ModelError::Spec("monext catenary: a must be a non-unit, non-atom element of H0".into()));
    }
    let c0 = catenary_element(h0, a)?.value;
    let single_power =
        |k: u64| z0.len() == 1 && z0[0].len() == k && z0[0].counts.iter().filter(|&&c| c > 0).count() == 1;
    let is_one = d.iter().all(|&v| v == 0);
    let case = match m.d() {
        _ if m.d().is_trivial() => CatenaryCase::TrivialD,
        DPart::Group(g) if g.order() == 2 && !is_one && single_power(2) => CatenaryCase::UnitPairSquare,
        DPart::Free { .. } if is_one && z0.len() == 1 => CatenaryCase::ReducedIdentity,
        DPart::Free { .. }
            if d.iter().sum::<i64>() == 1 && z0.len() == 1 && z0[0].len() >= 2 && single_power(z0[0].len()) =>
        {
            CatenaryCase::ReducedAtomPower
        }
        _ => CatenaryCase::General,
    };
    let formula = match case {
        CatenaryCase::TrivialD => c0,
        CatenaryCase::General => c0.max(2),
        _ => 0,
    };
    let c = catenary_element(m, &m.pair(a, d))?;
    Ok(MonextCatenary { case, formula, oracle: c.value, factorization_count: c.factorizations.len() })
}

/// `(H0 ⋉ D) ⋉ E` and `H0 ⋉ (D × E)` agree on products of at most `level` atoms:
/// same atoms, same elements, same divisibility. Both use the coordinate layout
/// `(a, d, e)`, so the bijection is the identity map.
pub fn associativity_check(
    h0: &PresentedMonoid,
    d: &FiniteAbelianGroup,
    e: &FiniteAbelianGroup,
    level: usize,
) -> Result<bool, ModelError> {
    let inner = Monext::new(Box::new(h0.clone()), DPart::Group(d.clone()))?;
    let nested = Monext::new(Box::new(inner), DPart::Group(e.clone()))?;
    let flat = Monext::new(Box::new(h0.clone()), DPart::Group(d.direct_sum(e)))?;
    let atoms_agree = nested.atoms().iter().collect::<BTreeSet<_>>() == flat.atoms().iter().collect::<BTreeSet<_>>();
    let xs = elements_up_to(&nested, level);
    if !atoms_agree || xs != elements_up_to(&flat, level) {
        return Ok(false);
    }
    Ok(xs.par_iter().all(|x| xs.iter().all(|y| nested.quotient(y, x) == flat.quotient(y, x))))
}
