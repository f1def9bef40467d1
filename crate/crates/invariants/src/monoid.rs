use crate::InvariantError;
use std::collections::HashMap;

/// Elements are vectors; their interpretation belongs to the monoid.
pub type Elem = Vec<i64>;

/// A reduced, cancellative, atomic monoid presented by a finite atom list.
///
/// Contracts the algorithms rely on:
/// - `level` is additive, zero only on the identity, and at least 1 on atoms;
/// - `cover_deficit(u, x)` is zero exactly when `u | x`, never increases as `x`
///   grows, and every minimal cover of `u` can be built in some order where each
///   new atom strictly lowers it.
pub trait Monoid: Sync {
    fn atoms(&self) -> &[Elem];
    fn identity(&self) -> Elem;
    fn combine(&self, a: &Elem, b: &Elem) -> Elem;
    /// `b / a` when `a` divides `b`.
    fn quotient(&self, b: &Elem, a: &Elem) -> Option<Elem>;
    fn level(&self, x: &Elem) -> u64;
    /// `None` when the monoid cannot supply a deficit with the contract above.
    fn cover_deficit(&self, u: &Elem, x: &Elem) -> Option<u64>;

    fn divides(&self, a: &Elem, b: &Elem) -> bool {
        self.quotient(b, a).is_some()
    }

    /// Atom indices such that every factorization of `x` uses at least one of them.
    fn candidate_atoms(&self, x: &Elem) -> Vec<usize> {
        (0..self.atoms().len()).filter(|&i| self.divides(&self.atoms()[i], x)).collect()
    }

    /// Upper bound for the length of a minimal cover of `u`.
    fn cover_length_bound(&self, u: &Elem) -> Option<u64> {
        self.cover_deficit(u, &self.identity())
    }

    fn atom(&self, i: usize) -> Result<&Elem, InvariantError> {
        self.atoms().get(i).ok_or(InvariantError::NoSuchAtom(i))
    }
}

/// How divisibility is decided in a [`PresentedMonoid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisibilityMode {
    /// `a | b` iff `b - a ≥ 0`: the monoid is saturated in `N0^m`.
    Saturated,
    /// `a | b` iff `b - a ≥ 0` and `b - a` factors over the atoms.
    Solver,
}

/// A submonoid of `N0^m` generated by its atoms.
#[derive(Clone, Debug)]
pub struct PresentedMonoid {
    dim: usize,
    atoms: Vec<Elem>,
    mode: DivisibilityMode,
}

impl PresentedMonoid {
    pub fn new(dim: usize, atoms: Vec<Elem>, mode: DivisibilityMode) -> Result<Self, InvariantError> {
        for a in &atoms {
            if a.len() != dim {
                return Err(InvariantError::Invalid(format!("atom of dimension {} in N0^{dim}", a.len())));
            }
            if a.iter().any(|&x| x < 0) || a.iter().all(|&x| x == 0) {
                return Err(InvariantError::Invalid(format!("atom {a:?} is not a nonzero vector of N0^{dim}")));
            }
        }
        let m = Self { dim, atoms, mode };
        for (i, a) in m.atoms.iter().enumerate() {
            for (j, b) in m.atoms.iter().enumerate() {
                if i != j && m.quotient(b, a).is_some() {
                    return Err(InvariantError::Invalid(format!("atom {a:?} divides atom {b:?}")));
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> DivisibilityMode {
        self.mode
    }

    /// Membership by factorization search.
    pub fn contains(&self, x: &Elem) -> bool {
        x.len() == self.dim && x.iter().all(|&v| v >= 0) && self.factorable(x, &mut HashMap::new())
    }

    fn factorable(&self, x: &Elem, memo: &mut HashMap<Elem, bool>) -> bool {
        let Some(g) = Self::leading(x) else { return true };
        if let Some(&b) = memo.get(x) {
            return b;
        }
        let found = self.atoms.iter().any(|a| {
            a[g] > 0 && a.iter().zip(x).all(|(p, q)| p <= q) && {
                let d: Elem = x.iter().zip(a).map(|(p, q)| p - q).collect();
                self.factorable(&d, memo)
            }
        });
        memo.insert(x.clone(), found);
        found
    }

    fn leading(x: &Elem) -> Option<usize> {
        x.iter().position(|&v| v > 0)
    }
}

impl Monoid for PresentedMonoid {
    fn atoms(&self) -> &[Elem] {
        &self.atoms
    }

    fn identity(&self) -> Elem {
        vec![0; self.dim]
    }

    fn combine(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn quotient(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        let d: Elem = b.iter().zip(a).map(|(x, y)| x - y).collect();
        if d.iter().any(|&v| v < 0) {
            return None;
        }
        match self.mode {
            DivisibilityMode::Saturated => Some(d),
            DivisibilityMode::Solver => self.factorable(&d, &mut HashMap::new()).then_some(d),
        }
    }

    fn level(&self, x: &Elem) -> u64 {
        x.iter().map(|&v| v.max(0) as u64).sum()
    }

    fn cover_deficit(&self, u: &Elem, x: &Elem) -> Option<u64> {
        // Each atom of a minimal cover supplies a coordinate unit still missing.
        match self.mode {
            DivisibilityMode::Saturated => Some(u.iter().zip(x).map(|(&a, &b)| (a - b).max(0) as u64).sum()),
            DivisibilityMode::Solver => None,
        }
    }

    fn candidate_atoms(&self, x: &Elem) -> Vec<usize> {
        let Some(g) = Self::leading(x) else { return Vec::new() };
        (0..self.atoms.len())
            .filter(|&i| self.atoms[i][g] > 0 && self.atoms[i].iter().zip(x).all(|(a, b)| a <= b))
            .collect()
    }
}
