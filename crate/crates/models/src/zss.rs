//! Block monoids as presented monoids, and two ground sets with a single atom.

use crate::ModelError;
use num_integer::Integer;
use zsl_invariants::{DivisibilityMode, PresentedMonoid};
use zsl_zsq::{enumerate_atoms, AtomSet, GroundSet};

/// `B(G0)` inside `N0^{|G0|}`, saturated. Fails when the atom search is cut off.
pub fn block_monoid(g: &GroundSet, budget: Option<usize>) -> Result<(PresentedMonoid, AtomSet), ModelError> {
    let atoms = enumerate_atoms(g, budget);
    if !atoms.complete {
        return Err(ModelError::Budget(format!("atom enumeration stopped at length {}", atoms.explored)));
    }
    let vecs = atoms.atoms.iter().map(|s| s.mult.iter().map(|&m| m as i64).collect()).collect();
    Ok((PresentedMonoid::new(g.len(), vecs, DivisibilityMode::Saturated)?, atoms))
}

/// Complete atom set of the block monoid over the given vectors of `Z^rank`.
pub fn block_monoid_of_vectors(
    rank: usize,
    vectors: &[Vec<i64>],
    budget: Option<usize>,
) -> Result<AtomSet, ModelError> {
    let g = GroundSet::new(rank, vectors.to_vec())?;
    Ok(block_monoid(&g, budget)?.1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SomeZss {
    /// `G0 = {g}` with `ord(g)` finite.
    Torsion { order: u64 },
    /// `G0 = {A_i e_i : i < n} ∪ {-Σ B_i e_i}` in `Z^{n-1}`, `gcd(A_i, B_i) = 1`.
    Independent { a: Vec<u64>, b: Vec<u64> },
}

/// The unique atom, as exponents over `ground`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZssAtom {
    /// Vectors of `Z^{n-1}`; the torsion case uses `[1]` for `g`.
    pub ground: Vec<Vec<i64>>,
    pub exponents: Vec<u64>,
    /// The block monoid is free on this single atom.
    pub factorial: bool,
}

impl ZssAtom {
    pub fn length(&self) -> u64 {
        self.exponents.iter().sum()
    }
}

pub fn some_zss_atoms(case: &SomeZss) -> Result<ZssAtom, ModelError> {
    match case {
        SomeZss::Torsion { order } => {
            if *order == 0 {
                return Err(ModelError::Spec("order: must be positive".into()));
            }
            Ok(ZssAtom { ground: vec![vec![1]], exponents: vec![*order], factorial: true })
        }
        SomeZss::Independent { a, b } => {
            if a.is_empty() || a.len() != b.len() {
                return Err(ModelError::Spec("a, b: need equal, nonzero lengths".into()));
            }
            if let Some(i) = (0..a.len()).find(|&i| a[i] == 0 || b[i] == 0 || a[i].gcd(&b[i]) != 1) {
                return Err(ModelError::Spec(format!("a, b: entry {i} needs positive coprime A_i, B_i")));
            }
            let n1 = a.len();
            let l = a.iter().fold(1u64, |acc, &x| acc.lcm(&x));
            let mut ground: Vec<Vec<i64>> = (0..n1)
                .map(|i| {
                    let mut v = vec![0; n1];
                    v[i] = a[i] as i64;
                    v
                })
                .collect();
            ground.push(b.iter().map(|&x| -(x as i64)).collect());
            let mut exponents: Vec<u64> = (0..n1).map(|i| b[i] * l / a[i]).collect();
            exponents.push(l);
            Ok(ZssAtom { ground, exponents, factorial: true })
        }
    }
}
