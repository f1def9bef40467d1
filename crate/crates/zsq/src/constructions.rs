//! Hypercube ground sets, the Fibonacci lower-bound construction, and the
//! extremal atoms of rank three.

use crate::{is_atom, sigma_int, GroundSet, Sequence, ZsqError};
use std::collections::HashSet;

/// Largest rank for which the Fibonacci atom is verified by default.
pub const FIB_VERIFY_LIMIT: usize = 6;

/// Nonzero vertices of the `r`-dimensional hypercube, in lexicographic order.
pub fn hypercube_plus_vectors(r: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> =
        (1u64..(1 << r)).map(|mask| (0..r).map(|i| ((mask >> (r - 1 - i)) & 1) as i64).collect()).collect();
    out.sort();
    out
}

/// `G_r+`.
pub fn hypercube_plus(r: usize) -> Result<GroundSet, ZsqError> {
    if r == 0 {
        return Err(ZsqError::Invalid("hypercube rank must be at least 1".into()));
    }
    GroundSet::new(r, hypercube_plus_vectors(r))
}

/// `G_r+ ∪ -G_r+`: the vertices of `G_r+` followed by their negatives.
pub fn hypercube_pm(r: usize) -> Result<GroundSet, ZsqError> {
    if r == 0 {
        return Err(ZsqError::Invalid("hypercube rank must be at least 1".into()));
    }
    let plus = hypercube_plus_vectors(r);
    let mut all = plus.clone();
    all.extend(plus.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
    GroundSet::new(r, all)
}

/// `F_0, ..., F_n`.
pub fn fibonacci_table(n: usize) -> Vec<u64> {
    let mut f = vec![0u64, 1];
    while f.len() <= n {
        let k = f.len();
        f.push(f[k - 1] + f[k - 2]);
    }
    f.truncate(n + 1);
    f
}

/// The Fibonacci construction at rank `r`, as sequences over `G_r±`.
#[derive(Clone, Debug)]
pub struct FibWitness {
    pub r: usize,
    pub ground: GroundSet,
    /// `S_r`, supported on `G_r+`.
    pub s_r: Sequence,
    /// `U = S_r·(-e_1-...-e_r)^{F_r}`.
    pub u: Sequence,
    pub fib: Vec<u64>,
    /// Subset sums of proper subsequences of `S_r` avoid the diagonal `H_r`.
    pub diagonal_free: Option<bool>,
    /// `U` has no proper nonempty zero-sum subsequence; `None` when not verified.
    pub atom_verified: Option<bool>,
}

/// Multiset of `S_r` as vectors in `Z^r`, built by the flip recursion.
fn fib_terms(r: usize, fib: &[u64]) -> Vec<(Vec<i64>, u64)> {
    let mut terms: Vec<(Vec<i64>, u64)> = vec![(vec![1], 1)];
    for k in 2..=r {
        let mut next: Vec<(Vec<i64>, u64)> = terms
            .into_iter()
            .map(|(mut v, m)| {
                v.push(0);
                (v, m)
            })
            .collect();
        let mut ek = vec![0i64; k];
        ek[k - 1] = 1;
        next.push((ek, fib[k - 1]));
        terms = next.into_iter().map(|(v, m)| (v.iter().map(|x| 1 - x).collect(), m)).collect();
    }
    terms
}

/// Whether some nonempty proper subsequence of the multiset has all coordinates of its sum equal.
fn hits_diagonal(terms: &[(Vec<i64>, u64)], r: usize) -> bool {
    let full: Vec<i64> = (0..r).map(|c| terms.iter().map(|(v, m)| v[c] * *m as i64).sum()).collect();
    let mut sums: HashSet<Vec<i64>> = HashSet::from([vec![0; r]]);
    for (v, m) in terms {
        let mut next = HashSet::with_capacity(sums.len() * (*m as usize + 1));
        for s in &sums {
            for k in 0..=*m as i64 {
                next.insert(s.iter().zip(v).map(|(a, b)| a + k * b).collect::<Vec<_>>());
            }
        }
        sums = next;
    }
    // All terms are nonzero 0/1 vectors, so only the full subsequence reaches `full`.
    sums.iter().any(|s| s != &full && s.iter().any(|&x| x != 0) && s.iter().all(|&x| x == s[0]))
}

pub fn fibonacci_witness(r: usize, verify: bool) -> Result<FibWitness, ZsqError> {
    let ground = hypercube_pm(r)?;
    let fib = fibonacci_table(r + 2);
    let terms = fib_terms(r, &fib);
    let mut s_r = Sequence::empty(ground.len());
    for (v, m) in &terms {
        let i = ground.index_of(v).expect("flip keeps terms inside G_r+");
        s_r.mult[i] += m;
    }
    let ones: Vec<i64> = vec![-1; r];
    let mut u = s_r.clone();
    u.mult[ground.index_of(&ones).expect("-(1,...,1) lies in G_r±")] += fib[r];
    let verify = verify || r <= FIB_VERIFY_LIMIT;
    let (diagonal_free, atom_verified) =
        if verify { (Some(!hits_diagonal(&terms, r)), Some(is_atom(&ground, &u))) } else { (None, None) };
    Ok(FibWitness { r, ground, s_r, u, fib, diagonal_free, atom_verified })
}

impl FibWitness {
    /// Checks the length and sum identities of the construction.
    pub fn identities_hold(&self) -> bool {
        let r = self.r;
        let sigma = sigma_int(&self.ground, &self.s_r).expect("same ground");
        self.s_r.length() == self.fib[r + 1]
            && sigma.iter().all(|&x| x == self.fib[r] as i64)
            && self.s_r.support().len() == r
            && self.u.length() == self.fib[r + 2]
            && sigma_int(&self.ground, &self.u).expect("same ground").iter().all(|&x| x == 0)
    }
}

/// `V_1, ..., V_4` over `G_3±` as ordered by [`hypercube_pm`].
pub fn r3_extremal_atoms() -> (GroundSet, Vec<Sequence>) {
    let g = hypercube_pm(3).expect("rank 3");
    let build = |terms: &[(&[i64], u64)]| {
        let mut s = Sequence::empty(g.len());
        for (v, m) in terms {
            s.mult[g.index_of(v).expect("hypercube vertex")] += m;
        }
        s
    };
    let v = vec![
        build(&[(&[1, 1, 0], 1), (&[1, 0, 1], 1), (&[0, 1, 1], 1), (&[-1, -1, -1], 2)]),
        build(&[(&[1, 1, 0], 1), (&[1, 0, 1], 1), (&[0, -1, -1], 1), (&[-1, 0, 0], 2)]),
        build(&[(&[-1, 0, -1], 1), (&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[0, -1, 0], 2)]),
        build(&[(&[-1, -1, 0], 1), (&[1, 0, 1], 1), (&[0, 1, 1], 1), (&[0, 0, -1], 2)]),
    ];
    (g, v)
}

/// Every atom `U` with `|U| ≥ 3` satisfies `2·v_g(U) < |U|` for all `g`.
/// Returns the first violating atom.
pub fn special_observation_violation<'a>(atoms: impl IntoIterator<Item = &'a Sequence>) -> Option<&'a Sequence> {
    atoms.into_iter().find(|u| {
        let len = u.length();
        len >= 3 && u.mult.iter().any(|&m| 2 * m >= len)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypercube_sizes() {
        for (r, n) in [(1, 1), (2, 3), (3, 7)] {
            assert_eq!(hypercube_plus(r).unwrap().len(), n);
            assert_eq!(hypercube_pm(r).unwrap().len(), 2 * n);
        }
        assert!(hypercube_plus(0).is_err());
        assert_eq!(hypercube_plus(1).unwrap().elements(), &[vec![1]]);
    }

    #[test]
    fn fibonacci_numbers() {
        assert_eq!(fibonacci_table(8), vec![0, 1, 1, 2, 3, 5, 8, 13, 21]);
    }

    #[test]
    fn base_cases() {
        let w = fibonacci_witness(1, false).unwrap();
        assert_eq!(w.s_r, Sequence::new(vec![1, 0]));
        assert_eq!(w.u.length(), 2);
        assert!(w.identities_hold());
        let w = fibonacci_witness(3, false).unwrap();
        assert_eq!(w.u.length(), 5);
        assert_eq!(w.atom_verified, Some(true));
    }

    #[test]
    fn flip_stays_in_hypercube() {
        for r in 2..=5 {
            let ones = vec![1i64; r];
            for v in hypercube_plus_vectors(r).into_iter().filter(|v| *v != ones) {
                let f: Vec<i64> = v.iter().map(|x| 1 - x).collect();
                assert!(hypercube_plus_vectors(r).contains(&f));
            }
        }
    }
}
