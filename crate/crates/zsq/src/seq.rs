use crate::{GroundSet, Side, ZsqError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Debug;
use std::ops::{Add, Sub};

/// A multiplicity type: `u64` for ordinary sequences, exact rationals for rational ones.
pub trait Mult: Clone + PartialOrd + Zero + Add<Output = Self> + Sub<Output = Self> + Debug {
    fn to_q(&self) -> BigRational;
}

impl Mult for u64 {
    fn to_q(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}

impl Mult for BigRational {
    fn to_q(&self) -> BigRational {
        self.clone()
    }
}

/// Dense multiplicity vector over a ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seq<M> {
    pub mult: Vec<M>,
}

pub type Sequence = Seq<u64>;
pub type RationalSequence = Seq<BigRational>;

/// JSON form: `{"mult": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceJson {
    pub mult: Vec<u64>,
}

impl<M: Mult> Seq<M> {
    pub fn empty(n: usize) -> Self {
        Seq { mult: vec![M::zero(); n] }
    }

    pub fn new(mult: Vec<M>) -> Self {
        Seq { mult }
    }

    /// `v_g(S)` by ground index.
    pub fn v(&self, i: usize) -> &M {
        &self.mult[i]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mult.len()).filter(|&i| !self.mult[i].is_zero()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(Zero::is_zero)
    }

    /// Concatenation `S·T`.
    pub fn product(&self, other: &Self) -> Self {
        Seq { mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn check_ground(&self, g: &GroundSet) -> Result<(), ZsqError> {
        if self.mult.len() == g.len() {
            Ok(())
        } else {
            Err(ZsqError::GroundMismatch { expected: g.len(), got: self.mult.len() })
        }
    }
}

impl Sequence {
    pub fn from_json(j: &SequenceJson, g: &GroundSet) -> Result<Self, ZsqError> {
        let s = Seq { mult: j.mult.clone() };
        s.check_ground(g)?;
        Ok(s)
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut s = Self::empty(n);
        s.mult[i] = 1;
        s
    }

    /// `|S|`.
    pub fn length(&self) -> u64 {
        self.mult.iter().sum()
    }

    /// `S / T` when `T | S`.
    pub fn quotient(&self, t: &Self) -> Option<Self> {
        self.mult.iter().zip(&t.mult).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Seq::new)
    }

    pub fn power(&self, k: u64) -> Self {
        Seq { mult: self.mult.iter().map(|a| a * k).collect() }
    }

    pub fn to_rational(&self) -> RationalSequence {
        Seq { mult: self.mult.iter().map(Mult::to_q).collect() }
    }
}

impl RationalSequence {
    /// `|S|` as an exact rational.
    pub fn length(&self) -> BigRational {
        self.mult.iter().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Seq { mult: self.mult.iter().map(|a| a * q).collect() }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.mult.iter().all(|a| !a.is_negative())
    }
}

/// `σ(S) = Σ v_g(S)·g`, exactly.
pub fn sigma<M: Mult>(g: &GroundSet, s: &Seq<M>) -> Result<Vec<BigRational>, ZsqError> {
    s.check_ground(g)?;
    let mut out = vec![BigRational::zero(); g.rank()];
    for (i, m) in s.mult.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        let q = m.to_q();
        for (o, &x) in out.iter_mut().zip(g.element(i)) {
            *o += &q * BigInt::from(x);
        }
    }
    Ok(out)
}

/// Integer `σ(S)` for ordinary sequences.
pub fn sigma_int(g: &GroundSet, s: &Sequence) -> Result<Vec<i64>, ZsqError> {
    s.check_ground(g)?;
    let mut out = vec![0i64; g.rank()];
    for (i, &m) in s.mult.iter().enumerate() {
        for (o, &x) in out.iter_mut().zip(g.element(i)) {
            *o += m as i64 * x;
        }
    }
    Ok(out)
}

pub fn is_zero_sum<M: Mult>(g: &GroundSet, s: &Seq<M>) -> Result<bool, ZsqError> {
    Ok(sigma(g, s)?.iter().all(Zero::is_zero))
}

pub fn is_subsequence<M: Mult>(g: &GroundSet, t: &Seq<M>, s: &Seq<M>) -> Result<bool, ZsqError> {
    t.check_ground(g)?;
    s.check_ground(g)?;
    Ok(t.mult.iter().zip(&s.mult).all(|(a, b)| a <= b))
}

/// Signed support `supp⁺(S)`. It is symmetric, so it is stored by its `G0+` half.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedSupport {
    /// Ground indices `g ∈ G0+` with `v_g(S) ≠ v_{-g}(S)`.
    pub plus: BTreeSet<usize>,
}

impl SignedSupport {
    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    /// `|supp⁺(S)|`, counting both `g` and `-g`.
    pub fn size(&self) -> usize {
        2 * self.plus.len()
    }

    /// The full symmetric set as sorted vectors.
    pub fn vectors(&self, g: &GroundSet) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::with_capacity(self.size());
        for &i in &self.plus {
            let e = g.element(i).to_vec();
            out.push(e.iter().map(|x| -x).collect());
            out.push(e);
        }
        out.sort();
        out
    }

    /// Parses a symmetric vector set contained in `G0 ∪ -G0`.
    pub fn from_vectors(g: &GroundSet, xs: &[Vec<i64>]) -> Result<Self, ZsqError> {
        let set: BTreeSet<&Vec<i64>> = xs.iter().collect();
        let mut plus = BTreeSet::new();
        for x in &set {
            let neg: Vec<i64> = x.iter().map(|v| -v).collect();
            if !set.contains(&neg) {
                return Err(ZsqError::Invalid(format!("signed support is not symmetric: {x:?} without its negative")));
            }
            let i = g
                .index_of(x)
                .filter(|&i| g.side(i) == Side::Plus)
                .or_else(|| g.index_of(&neg).filter(|&i| g.side(i) == Side::Plus));
            match i {
                Some(i) => {
                    plus.insert(i);
                }
                None if x.iter().all(|&v| v == 0) => {
                    return Err(ZsqError::Invalid("the zero vector never lies in a signed support".into()))
                }
                None => return Err(ZsqError::Invalid(format!("{x:?} is not in G0 ∪ -G0"))),
            }
        }
        Ok(SignedSupport { plus })
    }
}

fn signed_diff<M: Mult>(g: &GroundSet, s: &Seq<M>, i: usize) -> BigRational {
    let a = s.mult[i].to_q();
    match g.neg_index(i) {
        Some(j) => a - s.mult[j].to_q(),
        None => a,
    }
}

pub fn signed_support<M: Mult>(g: &GroundSet, s: &Seq<M>) -> Result<SignedSupport, ZsqError> {
    s.check_ground(g)?;
    let plus = g.plus_indices().iter().copied().filter(|&i| !signed_diff(g, s, i).is_zero()).collect();
    Ok(SignedSupport { plus })
}

/// `φ(S) = Σ_{g ∈ G0+} (v_g(S) - v_{-g}(S)) e_g`, coordinates in `plus_indices` order.
pub fn varphi<M: Mult>(g: &GroundSet, s: &Seq<M>) -> Result<Vec<BigRational>, ZsqError> {
    s.check_ground(g)?;
    Ok(g.plus_indices().iter().map(|&i| signed_diff(g, s, i)).collect())
}

/// `S = R·S'` with `R = 0^{v_0} ∏_{g ∈ G0+} (g(-g))^{min(v_g, v_-g)}`.
pub fn strip_r<M: Mult>(g: &GroundSet, s: &Seq<M>) -> Result<(Seq<M>, Seq<M>), ZsqError> {
    s.check_ground(g)?;
    let mut r = Seq::<M>::empty(g.len());
    if let Some(z) = g.zero_index() {
        r.mult[z] = s.mult[z].clone();
    }
    for &i in g.plus_indices() {
        if let Some(j) = g.neg_index(i) {
            let m = if s.mult[i] <= s.mult[j] { s.mult[i].clone() } else { s.mult[j].clone() };
            r.mult[i] = m.clone();
            r.mult[j] = m;
        }
    }
    let rest = Seq { mult: s.mult.iter().zip(&r.mult).map(|(a, b)| a.clone() - b.clone()).collect() };
    Ok((r, rest))
}

/// `-S` as a sequence over `G0`, when every `-g` with `g ∈ supp(S)` lies in `G0`.
pub fn negate<M: Mult>(g: &GroundSet, s: &Seq<M>) -> Result<Option<Seq<M>>, ZsqError> {
    s.check_ground(g)?;
    let mut out = Seq::<M>::empty(g.len());
    for i in s.support() {
        let j = if g.side(i) == Side::Zero { Some(i) } else { g.neg_index(i) };
        match j {
            Some(j) => out.mult[j] = s.mult[i].clone(),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Human-readable term list such as `(1,1,0)^2·(-1,0,0)`.
pub fn format_sequence(g: &GroundSet, s: &Sequence) -> String {
    let terms: Vec<String> = s
        .support()
        .into_iter()
        .map(|i| {
            let e = g.element(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            match s.mult[i] {
                1 => format!("({e})"),
                m => format!("({e})^{m}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "1".into()
    } else {
        terms.join("·")
    }
}
