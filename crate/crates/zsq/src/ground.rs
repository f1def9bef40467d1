use crate::ZsqError;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use zsl_linalg::{rank_over_q, IntMatrix};

/// Side of the fixed partition `G0 \ {0} = G0+ ∪ G0-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
    Zero,
}

/// A finite indexed subset of `Z^r` with its signed-support partition.
///
/// A nonzero `g` is placed in `G0+` when it is lexicographically positive or
/// when `-g` is absent from the set, so `-G0-` is always contained in `G0+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    rank: usize,
    elements: Vec<Vec<i64>>,
    side: Vec<Side>,
    neg: Vec<Option<usize>>,
    index: HashMap<Vec<i64>, usize>,
    plus: Vec<usize>,
}

/// JSON form: `{"rank": r, "elements": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroundSetJson {
    pub rank: usize,
    pub elements: Vec<Vec<i64>>,
}

pub(crate) fn lex_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

impl GroundSet {
    pub fn new(rank: usize, elements: Vec<Vec<i64>>) -> Result<Self, ZsqError> {
        if rank == 0 {
            return Err(ZsqError::Invalid("rank must be at least 1".into()));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if e.len() != rank {
                return Err(ZsqError::Dimension { expected: rank, got: e.len() });
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(ZsqError::Invalid(format!("duplicate element {e:?}")));
            }
        }
        let neg: Vec<Option<usize>> = elements
            .iter()
            .map(|e| {
                if e.iter().all(|&x| x == 0) {
                    return None;
                }
                let m: Vec<i64> = e.iter().map(|x| -x).collect();
                index.get(&m).copied()
            })
            .collect();
        let side: Vec<Side> = elements
            .iter()
            .zip(&neg)
            .map(|(e, n)| {
                if e.iter().all(|&x| x == 0) {
                    Side::Zero
                } else if n.is_none() || lex_positive(e) {
                    Side::Plus
                } else {
                    Side::Minus
                }
            })
            .collect();
        let plus = (0..elements.len()).filter(|&i| side[i] == Side::Plus).collect();
        Ok(GroundSet { rank, elements, side, neg, index, plus })
    }

    pub fn from_json(j: &GroundSetJson) -> Result<Self, ZsqError> {
        Self::new(j.rank, j.elements.clone())
    }

    pub fn to_json(&self) -> GroundSetJson {
        GroundSetJson { rank: self.rank, elements: self.elements.clone() }
    }

    /// Same set with elements sorted lexicographically.
    pub fn canonicalized(&self) -> Self {
        let mut e = self.elements.clone();
        e.sort();
        Self::new(self.rank, e).expect("reordering preserves validity")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<i64>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &[i64] {
        &self.elements[i]
    }

    pub fn side(&self, i: usize) -> Side {
        self.side[i]
    }

    /// Index of `-g_i` when it belongs to the set.
    pub fn neg_index(&self, i: usize) -> Option<usize> {
        self.neg[i]
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Indices of `G0+`, in ground order. Coordinates of `φ` follow this order.
    pub fn plus_indices(&self) -> &[usize] {
        &self.plus
    }

    pub fn zero_index(&self) -> Option<usize> {
        self.side.iter().position(|&s| s == Side::Zero)
    }

    /// `G0 = -G0`.
    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| self.side[i] == Side::Zero || self.neg[i].is_some())
    }

    /// Rank of the subgroup generated by the elements.
    pub fn lattice_rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        rank_over_q(&IntMatrix::from_columns(self.rank, &self.elements).expect("dimensions checked"))
    }

    /// Whether every element has all coordinates in `{-1, 0, 1}`, i.e. lies in the hypercube vertex set.
    pub fn in_signed_hypercube(&self) -> bool {
        self.elements.iter().all(|e| e.iter().all(|x| (-1..=1).contains(x)))
    }

    /// Sub-ground set on the given indices, in that order.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        Self::new(self.rank, idx.iter().map(|&i| self.elements[i].clone()).collect())
            .expect("subset of a valid ground set")
    }
}
