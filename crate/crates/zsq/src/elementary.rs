//! Elementary zero-sum sequences: those whose signed support is nonempty and
//! minimal. Their atoms are determined by the signed support up to sign, and
//! their lengths are governed by maximal minors.

use crate::{enumerate_atoms, is_zero_sum, signed_support, AtomSet, GroundSet, Sequence, SignedSupport, ZsqError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use zsl_linalg::{det_bareiss, integer_kernel, rank_over_q, IntMatrix};

fn columns_rank(r: usize, cols: &[&[i64]]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    rank_over_q(&IntMatrix::from_columns(r, cols).expect("dimensions checked"))
}

/// The `G0+` representatives form a circuit: dependent, with every proper subset independent.
pub fn is_circuit(g: &GroundSet, plus: &SignedSupport) -> bool {
    let ys: Vec<&[i64]> = plus.plus.iter().map(|&i| g.element(i)).collect();
    let k = ys.len();
    if k == 0 || columns_rank(g.rank(), &ys) != k - 1 {
        return false;
    }
    (0..k).all(|drop| {
        let rest: Vec<&[i64]> = ys.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, y)| *y).collect();
        columns_rank(g.rank(), &rest) == k - 1
    })
}

/// Whether a zero-sum sequence is elementary.
///
/// With `X = supp⁺(S)` and `Y = X ∩ G0+`, a nonempty `X` is minimal exactly when
/// `Y` is a circuit; existence of a zero-sum with that signed support is
/// witnessed by `S` itself.
pub fn is_elementary(g: &GroundSet, s: &Sequence) -> Result<bool, ZsqError> {
    if !is_zero_sum(g, s)? {
        return Err(ZsqError::NotZeroSum);
    }
    let x = signed_support(g, s)?;
    Ok(!x.is_empty() && is_circuit(g, &x))
}

/// Direct-search variant of [`is_elementary`]: looks for a zero-sum `T` with
/// `|T| ≤ max_len` and `∅ ≠ supp⁺(T) ⊊ supp⁺(S)`.
pub fn is_elementary_direct(g: &GroundSet, s: &Sequence, max_len: u64) -> Result<bool, ZsqError> {
    if !is_zero_sum(g, s)? {
        return Err(ZsqError::NotZeroSum);
    }
    let x = signed_support(g, s)?;
    if x.is_empty() {
        return Ok(false);
    }
    let n = g.len();
    let mut t = vec![0u64; n];
    let mut sum = vec![0i64; g.rank()];
    fn rec(g: &GroundSet, i: usize, left: u64, t: &mut Vec<u64>, sum: &mut Vec<i64>, x: &SignedSupport) -> bool {
        if i == g.len() {
            if sum.iter().all(|&v| v == 0) {
                let st = signed_support(g, &Sequence::new(t.clone())).expect("same ground");
                return !st.is_empty() && st.plus.is_subset(&x.plus) && st.plus != x.plus;
            }
            return false;
        }
        for m in 0..=left {
            t[i] = m;
            if m > 0 {
                for (a, &b) in sum.iter_mut().zip(g.element(i)) {
                    *a += b;
                }
            }
            if rec(g, i + 1, left - m, t, sum, x) {
                return true;
            }
        }
        for (a, &b) in sum.iter_mut().zip(g.element(i)) {
            *a -= left as i64 * b;
        }
        t[i] = 0;
        false
    }
    Ok(!rec(g, 0, max_len, &mut t, &mut sum, &x))
}

/// The unique (up to sign) atom whose signed support is `x`, if `x` is the
/// signed support of an elementary zero-sum sequence over `G0`.
///
/// The returned sign puts a positive `φ`-coordinate on the first element of
/// `x ∩ G0+` whenever that sign is realizable over `G0`.
pub fn unique_elementary_atom(g: &GroundSet, x: &SignedSupport) -> Option<Sequence> {
    if x.is_empty() || !is_circuit(g, x) {
        return None;
    }
    let idx: Vec<usize> = x.plus.iter().copied().collect();
    let cols: Vec<&[i64]> = idx.iter().map(|&i| g.element(i)).collect();
    let ker = integer_kernel(&IntMatrix::from_columns(g.rank(), &cols).expect("dimensions checked"));
    debug_assert_eq!(ker.len(), 1);
    let mut coeff = ker.into_iter().next()?;
    if coeff[0].is_negative() {
        coeff.iter_mut().for_each(|c| *c = -c.clone());
    }
    let realize = |coeff: &[BigInt]| -> Option<Sequence> {
        let mut s = Sequence::empty(g.len());
        for (&i, c) in idx.iter().zip(coeff) {
            let m = c.abs().to_u64()?;
            if c.is_positive() {
                s.mult[i] = m;
            } else {
                s.mult[g.neg_index(i)?] = m;
            }
        }
        Some(s)
    };
    realize(&coeff).or_else(|| {
        let neg: Vec<BigInt> = coeff.iter().map(|c| -c).collect();
        realize(&neg)
    })
}

/// `Δ(g_1, ..., g_{r+1}) = Σ|det(ĝ_i)| / gcd_i |det(ĝ_i)|`, or 0 when the rank is below `r`.
pub fn delta_tuple(vectors: &[Vec<i64>]) -> Result<BigInt, ZsqError> {
    let r = vectors.len().saturating_sub(1);
    if r == 0 {
        return Err(ZsqError::Dimension { expected: 2, got: vectors.len() });
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != r) {
        return Err(ZsqError::Dimension { expected: r, got: v.len() });
    }
    let dets: Vec<BigInt> = (0..=r)
        .map(|drop| {
            let cols: Vec<&[i64]> =
                vectors.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, v)| v.as_slice()).collect();
            det_bareiss(&IntMatrix::from_columns(r, &cols).expect("dimensions checked")).expect("square")
        })
        .collect();
    let gcd = dets.iter().fold(BigInt::zero(), |a, d| a.gcd(d));
    if gcd.is_zero() {
        return Ok(BigInt::zero());
    }
    Ok(dets.iter().map(|d| d.abs()).sum::<BigInt>() / gcd)
}

/// Result of an elementary Davenport computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryDavenport {
    pub value: BigInt,
    /// False when the value is only a lower bound (truncated atom set).
    pub exact: bool,
    /// Elementary atoms of maximal length (enumerate) or maximizing index tuples (formula).
    pub witness_atoms: Vec<Sequence>,
    pub witness_tuples: Vec<Vec<usize>>,
}

/// A method for `D^elm(G0)`, selectable by name.
pub trait ElementaryDavenportMethod: Sync {
    fn name(&self) -> &'static str;
    /// `atoms` is used when supplied and enumerated otherwise.
    fn compute(&self, g: &GroundSet, atoms: Option<&AtomSet>) -> Result<ElementaryDavenport, ZsqError>;
}

/// Maximum length over the elementary members of the atom set.
pub struct ByEnumeration;

/// Supremum of `Δ` over `(r+1)`-subsets.
pub struct ByFormula;

pub static ELEMENTARY_DAVENPORT_METHODS: &[&dyn ElementaryDavenportMethod] = &[&ByEnumeration, &ByFormula];

pub fn elementary_davenport_method(name: &str) -> Result<&'static dyn ElementaryDavenportMethod, ZsqError> {
    ELEMENTARY_DAVENPORT_METHODS
        .iter()
        .copied()
        .find(|m| m.name() == name)
        .ok_or_else(|| ZsqError::Invalid(format!("unknown method `{name}` (expected enumerate or formula)")))
}

pub fn elementary_davenport(g: &GroundSet, method: &str) -> Result<ElementaryDavenport, ZsqError> {
    elementary_davenport_method(method)?.compute(g, None)
}

/// Elementary members of an atom set.
pub fn elementary_atoms(g: &GroundSet, atoms: &AtomSet) -> Vec<Sequence> {
    atoms.atoms.iter().filter(|a| is_elementary(g, a).unwrap_or(false)).cloned().collect()
}

impl ElementaryDavenportMethod for ByEnumeration {
    fn name(&self) -> &'static str {
        "enumerate"
    }

    fn compute(&self, g: &GroundSet, atoms: Option<&AtomSet>) -> Result<ElementaryDavenport, ZsqError> {
        let owned;
        let atoms = match atoms {
            Some(a) => a,
            None => {
                owned = enumerate_atoms(g, None);
                &owned
            }
        };
        let elm = elementary_atoms(g, atoms);
        let value = elm.iter().map(Sequence::length).max().unwrap_or(0);
        Ok(ElementaryDavenport {
            value: BigInt::from(value),
            exact: atoms.complete,
            witness_atoms: elm.into_iter().filter(|a| a.length() == value).collect(),
            witness_tuples: Vec::new(),
        })
    }
}

pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `D(Y) ≥ 3` for a small subset `Y`. This holds exactly when `Y` carries an
/// elementary atom, i.e. some circuit of `Y` has a kernel vector whose signs
/// are realizable inside `Y`.
fn davenport_at_least_three(g: &GroundSet, idx: &[usize]) -> bool {
    let sub = g.restrict(idx);
    let plus = sub.plus_indices().to_vec();
    (1u32..(1 << plus.len())).any(|mask| {
        let x = SignedSupport {
            plus: plus.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect(),
        };
        unique_elementary_atom(&sub, &x).is_some()
    })
}

impl ElementaryDavenportMethod for ByFormula {
    fn name(&self) -> &'static str {
        "formula"
    }

    fn compute(&self, g: &GroundSet, _atoms: Option<&AtomSet>) -> Result<ElementaryDavenport, ZsqError> {
        let r = g.rank();
        let rank = g.lattice_rank();
        if rank < r {
            return Err(ZsqError::RankDeficient { rank, r });
        }
        let symmetric = g.is_symmetric();
        let scored: Vec<(BigInt, Vec<usize>)> = k_subsets(g.len(), r + 1)
            .into_par_iter()
            .filter_map(|idx| {
                let vs: Vec<Vec<i64>> = idx.iter().map(|&i| g.element(i).to_vec()).collect();
                let d = delta_tuple(&vs).expect("r+1 vectors of dimension r");
                if d.is_zero() {
                    return None;
                }
                let ok = if symmetric { d >= BigInt::from(3) } else { davenport_at_least_three(g, &idx) };
                ok.then_some((d, idx))
            })
            .collect();
        // Without any qualifying subset there is no elementary atom at all.
        let value = scored.iter().map(|(d, _)| d.clone()).max().unwrap_or_default();
        let witness_tuples = scored.into_iter().filter(|(d, _)| *d == value).map(|(_, i)| i).collect();
        Ok(ElementaryDavenport { value, exact: true, witness_atoms: Vec::new(), witness_tuples })
    }
}
