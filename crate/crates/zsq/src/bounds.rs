//! Upper bounds for the Davenport constant of a full-rank `G0 ⊂ Z^r`.

use crate::elementary::k_subsets;
use crate::{AtomSet, ByEnumeration, ElementaryDavenportMethod, GroundSet, ZsqError};
use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use zsl_linalg::{det_bareiss, smith_normal_form, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    /// `2·sup d_{r+1}(M)` over nonsingular matrices with columns from `{g + e_{r+1}} ∪ G0`.
    pub snf_g0: Option<BigInt>,
    /// `sup d_{r+1}(M)` over nonsingular matrices with columns from `{g ± e_{r+1}}`.
    pub snf_g1: Option<BigInt>,
    /// `⌊(2^r - r - 1)/2^r · (r+2)^{(r+2)/2}⌋`, for `r ≥ 2` and subsets of the signed hypercube.
    pub hadamard: Option<BigInt>,
    /// `(2r)^r (r+1)^{r+1} · max |det M'|` over `r x r` submatrices of the `G0+` column matrix.
    pub dgs: BigInt,
    /// `sup{2, min{η, |G0+| - r}·D^elm}`.
    pub elm_product: BigInt,
    /// True when `η` or `D^elm` came from a truncated atom set.
    pub elm_product_conditional: bool,
    /// Explanations for skipped bounds.
    pub notes: Vec<String>,
}

impl BoundsReport {
    /// All bounds that were computed, with labels.
    pub fn values(&self) -> Vec<(&'static str, BigInt)> {
        let mut v = Vec::new();
        if let Some(b) = &self.snf_g0 {
            v.push(("snf_g0", b.clone()));
        }
        if let Some(b) = &self.snf_g1 {
            v.push(("snf_g1", b.clone()));
        }
        if let Some(b) = &self.hadamard {
            v.push(("hadamard", b.clone()));
        }
        v.push(("dgs", self.dgs.clone()));
        v.push(("elm_product", self.elm_product.clone()));
        v
    }
}

fn largest_divisor_sweep(r: usize, cols: &[Vec<i64>]) -> BigInt {
    k_subsets(cols.len(), r + 1)
        .into_par_iter()
        .filter_map(|idx| {
            let sel: Vec<&[i64]> = idx.iter().map(|&i| cols[i].as_slice()).collect();
            let m = IntMatrix::from_columns(r + 1, &sel).expect("dimensions checked");
            let snf = smith_normal_form(&m);
            (snf.rank() == r + 1).then(|| snf.diag[r].clone())
        })
        .max()
        .unwrap_or_default()
}

fn lift(g: &[i64], last: i64) -> Vec<i64> {
    let mut v = g.to_vec();
    v.push(last);
    v
}

/// `⌊(2^r - r - 1)/2^r · (r+2)^{(r+2)/2}⌋`, evaluated exactly.
pub fn hadamard_bound(r: u32) -> BigInt {
    let num = (BigInt::one() << r) - BigInt::from(r) - 1;
    let base = BigInt::from(r + 2);
    let den = BigInt::one() << r;
    if (r + 2).is_multiple_of(2) {
        num * base.pow((r + 2) / 2) / den
    } else {
        // floor(sqrt(N)) / den equals floor(sqrt(N) / den) for integer den.
        let n: BigInt = &num * &num * base.pow(r + 2);
        Roots::sqrt(&n) / den
    }
}

pub fn davenport_upper_bounds(g: &GroundSet, atoms: &AtomSet) -> Result<BoundsReport, ZsqError> {
    let r = g.rank();
    let rank = g.lattice_rank();
    if rank < r {
        return Err(ZsqError::RankDeficient { rank, r });
    }
    let mut notes = Vec::new();
    let d = atoms.davenport();
    let (snf_g0, snf_g1) = if d.value >= 3 || !d.exact {
        let mut g0t: Vec<Vec<i64>> = g.elements().iter().map(|e| lift(e, 1)).collect();
        g0t.extend(g.elements().iter().map(|e| lift(e, 0)));
        let mut g1t: Vec<Vec<i64>> = g.elements().iter().map(|e| lift(e, 1)).collect();
        g1t.extend(g.elements().iter().map(|e| lift(e, -1)));
        (Some(largest_divisor_sweep(r, &g0t) * 2), Some(largest_divisor_sweep(r, &g1t)))
    } else {
        notes.push(format!("SNF bounds skipped: D(G0) = {} < 3", d.value));
        (None, None)
    };
    let hadamard = if r >= 2 && g.in_signed_hypercube() {
        Some(hadamard_bound(r as u32))
    } else {
        notes.push("Hadamard bound skipped: needs r >= 2 and G0 inside the signed hypercube".into());
        None
    };
    let plus: Vec<&[i64]> = g.plus_indices().iter().map(|&i| g.element(i)).collect();
    let max_minor = k_subsets(plus.len(), r)
        .into_par_iter()
        .map(|idx| {
            let sel: Vec<&[i64]> = idx.iter().map(|&i| plus[i]).collect();
            det_bareiss(&IntMatrix::from_columns(r, &sel).expect("dimensions checked")).expect("square").abs()
        })
        .max()
        .unwrap_or_else(BigInt::zero);
    let rb = BigInt::from(r);
    let dgs = (BigInt::from(2) * &rb).pow(r as u32) * (&rb + 1u32).pow(r as u32 + 1) * max_minor;
    let delm = ByEnumeration.compute(g, Some(atoms))?;
    let ell_hat = BigInt::from(atoms.eta().min(g.plus_indices().len().saturating_sub(rank)));
    let elm_product = (ell_hat * &delm.value).max(BigInt::from(2));
    if !atoms.complete {
        notes.push("elm_product is conditional: atom set truncated".into());
    }
    Ok(BoundsReport { snf_g0, snf_g1, hadamard, dgs, elm_product, elm_product_conditional: !atoms.complete, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_values() {
        assert_eq!(hadamard_bound(3), BigInt::from(27));
        // r = 2: (4-3)/4 · 4^2 = 4.
        assert_eq!(hadamard_bound(2), BigInt::from(4));
        // r = 1: 0.
        assert!(hadamard_bound(1).is_zero());
    }
}
