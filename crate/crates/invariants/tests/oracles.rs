//! Factorizations, catenary degrees and ω checked against straightforward oracles.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use zsl_invariants::*;
use zsl_zsq::{enumerate_atoms, GroundSet};

/// All count vectors `c` with `Σ c_i a_i = x`, by bounding each count separately.
fn factorization_oracle(atoms: &[Elem], x: &Elem) -> BTreeSet<Vec<u32>> {
    fn go(atoms: &[Elem], i: usize, rest: Elem, cur: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
        if i == atoms.len() {
            if rest.iter().all(|&v| v == 0) {
                out.insert(cur.clone());
            }
            return;
        }
        let mut r = rest;
        let mut c = 0;
        loop {
            cur[i] = c;
            go(atoms, i + 1, r.clone(), cur, out);
            r = r.iter().zip(&atoms[i]).map(|(p, q)| p - q).collect();
            if r.iter().any(|&v| v < 0) {
                break;
            }
            c += 1;
        }
        cur[i] = 0;
    }
    let mut out = BTreeSet::new();
    go(atoms, 0, x.clone(), &mut vec![0; atoms.len()], &mut out);
    out
}

/// Smallest threshold for which the distance graph is connected, by trying thresholds upward.
fn catenary_oracle(zs: &[Factorization]) -> u64 {
    if zs.len() < 2 {
        return 0;
    }
    for n in 0.. {
        let mut seen = vec![false; zs.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..zs.len() {
                if !seen[j] && distance(&zs[i], &zs[j]) <= n {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            return n;
        }
    }
    unreachable!()
}

fn random_ground(rng: &mut ChaCha8Rng) -> Option<GroundSet> {
    let r = rng.gen_range(1..=3);
    let cap = 8usize.min(3usize.pow(r as u32) - 1);
    let n = rng.gen_range(2..=cap);
    let mut set = BTreeSet::new();
    while set.len() < n {
        let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-1i64..=1)).collect();
        if v.iter().any(|&x| x != 0) || rng.gen_bool(0.2) {
            set.insert(v);
        }
    }
    let g = GroundSet::new(r, set.into_iter().collect()).unwrap();
    let a = enumerate_atoms(&g, Some(8));
    (a.complete && !a.atoms.is_empty()).then_some(g)
}

#[test]
fn factorizations_and_catenary_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 20 {
        let Some(g) = random_ground(&mut rng) else { continue };
        let m = block_monoid(&g);
        for x in elements_up_to(&m, 3) {
            let zs = factorizations(&m, &x);
            let got: BTreeSet<Vec<u32>> = zs.iter().map(|z| z.counts.clone()).collect();
            assert_eq!(got, factorization_oracle(m.atoms(), &x));
            assert_eq!(catenary_element(&m, &x).unwrap().value, catenary_oracle(&zs));
        }
        done += 1;
    }
}

#[test]
fn omega_strategies_agree_when_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut compared = 0;
    let mut tries = 0;
    while compared < 60 && tries < 200 {
        tries += 1;
        let Some(g) = random_ground(&mut rng) else { continue };
        let m = block_monoid(&g);
        for a in 0..m.atoms().len() {
            let mc = omega(&m, a, "minimal-cover", None).unwrap();
            let db = omega(&m, a, "definition-budget", Some(6)).unwrap();
            assert!(mc.complete);
            if db.complete {
                assert_eq!(mc.covers, db.covers, "{:?}", g.elements());
                assert_eq!(tau_from_covers(&m, &mc), tau_from_covers(&m, &db));
                compared += 1;
            }
        }
    }
    assert!(compared >= 60);
}

#[test]
fn half_factorial_example() {
    // {(a, b) : a + b even} in N0^2.
    let m = PresentedMonoid::new(2, vec![vec![2, 0], vec![1, 1], vec![0, 2]], DivisibilityMode::Saturated).unwrap();
    assert!(half_factorial_probe(&m, 5).half_factorial);
    for a in 0..3 {
        let t = tame_degree(&m, a, "minimal-cover", None).unwrap();
        assert_eq!(t.omega, t.tau + 1);
    }
    assert_eq!(catenary_element(&m, &vec![2, 2]).unwrap().value, 2);
    let free = PresentedMonoid::new(2, vec![vec![1, 0], vec![0, 1]], DivisibilityMode::Saturated).unwrap();
    assert!(half_factorial_probe(&free, 4).half_factorial);
    let t = tame_degree(&free, 0, "minimal-cover", None).unwrap();
    assert!(t.prime);
    assert_eq!(t.value, 0);
}

#[test]
fn solver_mode_numerical_semigroup() {
    // <3, 5> inside N0: 8 = 3 + 5 but 5 - 3 = 2 is not in the monoid.
    let m = PresentedMonoid::new(1, vec![vec![3], vec![5]], DivisibilityMode::Solver).unwrap();
    assert!(!m.divides(&vec![3], &vec![5]));
    assert!(m.contains(&vec![8]));
    assert!(!m.contains(&vec![7]));
    assert_eq!(set_of_lengths(&m, &vec![15]), BTreeSet::from([3, 5]));
    assert_eq!(catenary_element(&m, &vec![15]).unwrap().value, 5);
    assert!(matches!(catenary_element(&m, &vec![7]), Err(InvariantError::NotInMonoid)));
    assert!(omega(&m, 0, "minimal-cover", None).is_err());
    let o = omega(&m, 0, "definition-budget", Some(6)).unwrap();
    assert!(!o.complete);
    // Minimal covers of 3 are {3} and {5, 5, 5}: 15 - 3 = 12 lies in the monoid, 10 - 3 = 7 does not.
    assert_eq!(o.value, 3);
}

#[test]
fn invalid_presentations() {
    assert!(PresentedMonoid::new(1, vec![vec![0]], DivisibilityMode::Saturated).is_err());
    assert!(PresentedMonoid::new(1, vec![vec![1], vec![2]], DivisibilityMode::Saturated).is_err());
    assert!(PresentedMonoid::new(2, vec![vec![1]], DivisibilityMode::Saturated).is_err());
}

fn small_monoid() -> PresentedMonoid {
    let (_, m) = hypercube(2);
    m
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in proptest::collection::vec(0u32..3, 5), b in proptest::collection::vec(0u32..3, 5), c in proptest::collection::vec(0u32..3, 5)) {
        let (a, b, c) = (Factorization { counts: a }, Factorization { counts: b }, Factorization { counts: c });
        prop_assert_eq!(distance(&a, &b), distance(&b, &a));
        prop_assert_eq!(distance(&a, &b) == 0, a == b);
        prop_assert!(distance(&a, &c) <= distance(&a, &b) + distance(&b, &c));
    }

    #[test]
    fn lengths_bracket_every_factorization(counts in proptest::collection::vec(0u32..3, 5)) {
        let m = small_monoid();
        let z = Factorization { counts };
        let x = z.eval(&m);
        let l = set_of_lengths(&m, &x);
        prop_assert!(l.contains(&z.len()));
        prop_assert!(factorizations(&m, &x).contains(&z));
        for d in delta_set(&l) {
            prop_assert!(d > 0);
        }
    }
}
