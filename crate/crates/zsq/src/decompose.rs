//! Decomposition of a rational zero-sum sequence into a cancellation part and
//! rational powers of elementary atoms.

use crate::{
    elementary_atoms, is_zero_sum, signed_support, strip_r, AtomSet, GroundSet, RationalSequence, Sequence, ZsqError,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// `S = R · U_1^{α_1} ⋯ U_ℓ^{α_ℓ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryDecomposition {
    /// Product of zero-sum subsequences of length at most 2.
    pub r: RationalSequence,
    pub parts: Vec<(Sequence, BigRational)>,
}

impl ElementaryDecomposition {
    pub fn ell(&self) -> usize {
        self.parts.len()
    }

    pub fn reconstruct(&self) -> RationalSequence {
        self.parts.iter().fold(self.r.clone(), |acc, (u, a)| acc.product(&u.to_rational().scale(a)))
    }
}

/// `min{½|supp⁺(S)|, |G0+| - rank<G0>}`.
pub fn ell_bound(g: &GroundSet, s: &RationalSequence) -> Result<usize, ZsqError> {
    let half = signed_support(g, s)?.plus.len();
    Ok(half.min(g.plus_indices().len().saturating_sub(g.lattice_rank())))
}

/// Greedy peel: strip the cancellation part, then repeatedly remove the
/// largest rational power of the lexicographically least elementary atom
/// whose support lies in the current support.
pub fn rational_elementary_decomposition(
    g: &GroundSet,
    s: &RationalSequence,
    atoms: &AtomSet,
) -> Result<ElementaryDecomposition, ZsqError> {
    s.check_ground(g)?;
    if !s.is_nonnegative() {
        return Err(ZsqError::Invalid("negative multiplicity".into()));
    }
    if !is_zero_sum(g, s)? {
        return Err(ZsqError::NotZeroSum);
    }
    let elementary = elementary_atoms(g, atoms);
    let (r, mut rest) = strip_r(g, s)?;
    let mut parts = Vec::new();
    while !rest.is_empty() {
        let supp = rest.support();
        let u = elementary.iter().find(|u| u.support().iter().all(|i| supp.contains(i))).ok_or_else(|| {
            ZsqError::Invalid(format!(
                "no elementary atom with support inside the remainder{}",
                if atoms.complete { "" } else { " (atom set truncated)" }
            ))
        })?;
        let alpha = u
            .support()
            .into_iter()
            .map(|i| &rest.mult[i] / BigRational::from_integer(BigInt::from(u.mult[i])))
            .min()
            .expect("atoms are nonempty");
        for i in u.support() {
            let take = &alpha * BigRational::from_integer(BigInt::from(u.mult[i]));
            rest.mult[i] = &rest.mult[i] - take;
        }
        debug_assert!(rest.mult.iter().all(|m| m >= &BigRational::zero()));
        parts.push((u.clone(), alpha));
    }
    Ok(ElementaryDecomposition { r, parts })
}
