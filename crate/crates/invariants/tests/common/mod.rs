#![allow(dead_code)]

use zsl_invariants::{DivisibilityMode, Elem, PresentedMonoid};
use zsl_zsq::constructions::hypercube_pm;
use zsl_zsq::{enumerate_atoms, GroundSet, Sequence};

pub fn block_monoid(g: &GroundSet) -> PresentedMonoid {
    let atoms = enumerate_atoms(g, None);
    assert!(atoms.complete);
    let vecs = atoms.atoms.iter().map(to_elem).collect();
    PresentedMonoid::new(g.len(), vecs, DivisibilityMode::Saturated).unwrap()
}

pub fn hypercube(r: usize) -> (GroundSet, PresentedMonoid) {
    let g = hypercube_pm(r).unwrap();
    let m = block_monoid(&g);
    (g, m)
}

pub fn to_elem(s: &Sequence) -> Elem {
    s.mult.iter().map(|&v| v as i64).collect()
}
