//! The finitely primary monoid of rank one and exponent one over a finite
//! abelian group: `(G × N) ∪ {(0, 0)}`, with atoms `(g, 1)`.
//!
//! Elements are encoded as `[n, g_1, ..., g_t]`.

use crate::group::FiniteAbelianGroup;
use crate::monext::{DPart, Monext};
use crate::ModelError;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use zsl_invariants::{
    catenary_element, elements_up_to, factorizations, tame_degree, DivisibilityMode, Elem, LengthCache, Monoid,
    PresentedMonoid,
};

#[derive(Clone, Debug)]
pub struct FinitelyPrimaryRank1 {
    group: FiniteAbelianGroup,
    atoms: Vec<Elem>,
}

impl FinitelyPrimaryRank1 {
    pub fn new(group: FiniteAbelianGroup) -> Self {
        let atoms = group
            .elements()
            .into_iter()
            .map(|g| {
                let mut a = vec![1];
                a.extend(g);
                a
            })
            .collect();
        Self { group, atoms }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn contains(&self, x: &Elem) -> bool {
        x.len() == self.group.rank() + 1
            && x[0] >= 0
            && self.group.contains(&x[1..])
            && (x[0] > 0 || x[1..].iter().all(|&v| v == 0))
    }
}

impl Monoid for FinitelyPrimaryRank1 {
    fn atoms(&self) -> &[Elem] {
        &self.atoms
    }

    fn identity(&self) -> Elem {
        vec![0; self.group.rank() + 1]
    }

    fn combine(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = vec![a[0] + b[0]];
        out.extend(self.group.add(&a[1..], &b[1..]));
        out
    }

    fn quotient(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        let n = b[0] - a[0];
        let g = self.group.sub(&b[1..], &a[1..]);
        if n > 0 || (n == 0 && g.iter().all(|&v| v == 0)) {
            let mut out = vec![n];
            out.extend(g);
            Some(out)
        } else {
            None
        }
    }

    fn level(&self, x: &Elem) -> u64 {
        x[0] as u64
    }

    fn cover_deficit(&self, u: &Elem, x: &Elem) -> Option<u64> {
        Some(if self.divides(u, x) { 0 } else { (u[0] - x[0]).max(0) as u64 + 1 })
    }

    fn candidate_atoms(&self, x: &Elem) -> Vec<usize> {
        if x[0] == 0 {
            return Vec::new();
        }
        (0..self.atoms.len()).filter(|&i| self.divides(&self.atoms[i], x)).collect()
    }
}

/// What was observed on the truncation `n ≤ budget`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpReport {
    pub invariant_factors: Vec<u64>,
    pub budget: usize,
    pub elements_checked: usize,
    pub half_factorial: bool,
    pub factorial: bool,
    /// Largest catenary degree over the truncation.
    pub catenary: u64,
    /// Distinct catenary degrees of elements with at least two factorizations.
    pub catenary_nonunique: BTreeSet<u64>,
    /// Elements of level at least 2 with a unique factorization.
    pub unique_factorization_elements: Vec<Elem>,
    pub omega_max: u64,
    pub tame_max: u64,
    /// The same truncation built as `N0 ⋉ G` has the same elements, lengths and catenary degrees.
    pub agrees_with_extension: bool,
}

pub fn fp_rank1_invariants(group: &FiniteAbelianGroup, budget: usize) -> Result<FpReport, ModelError> {
    if budget < 3 {
        return Err(ModelError::Spec("fp: level budget must be at least 3".into()));
    }
    let m = FinitelyPrimaryRank1::new(group.clone());
    let elements = elements_up_to(&m, budget);
    let mut cache = LengthCache::new(&m);
    let half_factorial = elements.iter().all(|x| cache.lengths(x) == BTreeSet::from([x[0] as u64]));
    let stats: Vec<(Elem, usize, u64)> = elements
        .par_iter()
        .map(|x| {
            let c = catenary_element(&m, x).expect("element of the truncation");
            (x.clone(), c.factorizations.len(), c.value)
        })
        .collect();
    let factorial = stats.iter().all(|s| s.1 == 1);
    let catenary = stats.iter().map(|s| s.2).max().unwrap_or(0);
    let catenary_nonunique = stats.iter().filter(|s| s.1 > 1).map(|s| s.2).collect();
    let unique_factorization_elements = stats.iter().filter(|s| s.1 == 1 && s.0[0] >= 2).map(|s| s.0.clone()).collect();
    let mut omega_max = 0;
    let mut tame_max = 0;
    for i in 0..m.atoms().len() {
        let t = tame_degree(&m, i, "minimal-cover", None)?;
        omega_max = omega_max.max(t.omega);
        tame_max = tame_max.max(t.value);
    }
    Ok(FpReport {
        invariant_factors: group.invariant_factors(),
        budget,
        elements_checked: elements.len(),
        half_factorial,
        factorial,
        catenary,
        catenary_nonunique,
        unique_factorization_elements,
        omega_max,
        tame_max,
        agrees_with_extension: agrees_with_extension(&m, &elements, budget)?,
    })
}

fn agrees_with_extension(m: &FinitelyPrimaryRank1, elements: &[Elem], budget: usize) -> Result<bool, ModelError> {
    let n0 = PresentedMonoid::new(1, vec![vec![1]], DivisibilityMode::Saturated)?;
    let ext = Monext::new(Box::new(n0), DPart::Group(m.group().clone()))?;
    if elements_up_to(&ext, budget) != elements {
        return Ok(false);
    }
    let same_atoms = ext.atoms().iter().collect::<BTreeSet<_>>() == m.atoms().iter().collect::<BTreeSet<_>>();
    Ok(same_atoms
        && elements.par_iter().all(|x| {
            let a = atom_multisets(m, x);
            let b = atom_multisets(&ext, x);
            a == b
                && catenary_element(m, x).map(|c| c.value) == catenary_element(&ext, x).map(|c| c.value)
                && m.contains(x)
        }))
}

/// Factorizations of `x` as sorted lists of atoms, independent of atom order.
fn atom_multisets(m: &dyn Monoid, x: &Elem) -> BTreeSet<Vec<Elem>> {
    factorizations(m, x)
        .iter()
        .map(|z| {
            let mut v: Vec<Elem> = z.indices().into_iter().map(|i| m.atoms()[i].clone()).collect();
            v.sort();
            v
        })
        .collect()
}
