//! Hypercube constructions: Fibonacci witnesses and the rank-three extremal atoms.

use zsl_zsq::constructions::*;
use zsl_zsq::*;

/// Visits every sub-multiset; true when none but the empty one and `s` itself sums to zero.
fn atom_oracle(g: &GroundSet, s: &Sequence) -> bool {
    let supp = s.support();
    let mut y = vec![0u64; supp.len()];
    loop {
        let mut k = 0;
        while k < y.len() && y[k] == s.mult[supp[k]] {
            y[k] = 0;
            k += 1;
        }
        if k == y.len() {
            return true;
        }
        y[k] += 1;
        let full = y.iter().zip(&supp).all(|(&m, &i)| m == s.mult[i]);
        let zero =
            (0..g.rank()).all(|c| y.iter().zip(&supp).map(|(&m, &i)| m as i64 * g.element(i)[c]).sum::<i64>() == 0);
        if zero && !full {
            return false;
        }
    }
}

#[test]
fn fibonacci_witnesses_up_to_rank_six() {
    let f = fibonacci_table(8);
    for r in 1..=6 {
        let w = fibonacci_witness(r, false).unwrap();
        assert!(w.identities_hold(), "rank {r}");
        assert_eq!(w.s_r.length(), f[r + 1]);
        assert!(sigma_int(&w.ground, &w.s_r).unwrap().iter().all(|&x| x == f[r] as i64));
        assert_eq!(w.u.length(), f[r + 2]);
        assert_eq!(w.diagonal_free, Some(true));
        assert_eq!(w.atom_verified, Some(true));
        assert!(atom_oracle(&w.ground, &w.u), "rank {r}");
    }
}

#[test]
fn fibonacci_lower_bound_is_attained_for_small_rank() {
    for r in 1..=3 {
        let w = fibonacci_witness(r, false).unwrap();
        let d = davenport(&w.ground, None);
        assert!(d.exact);
        assert_eq!(d.value, w.u.length());
    }
}

#[test]
fn verification_is_skipped_beyond_the_limit() {
    let w = fibonacci_witness(FIB_VERIFY_LIMIT + 1, false).unwrap();
    assert_eq!((w.diagonal_free, w.atom_verified), (None, None));
    assert!(w.identities_hold());
}

#[test]
fn long_atoms_have_no_dominant_element() {
    for r in [2, 3] {
        let g = hypercube_pm(r).unwrap();
        let atoms = enumerate_atoms(&g, None);
        assert!(atoms.complete);
        assert!(special_observation_violation(&atoms.atoms).is_none());
        for u in atoms.atoms.iter().filter(|u| u.length() >= 3) {
            assert!(u.mult.iter().all(|&m| 2 * m < u.length()));
        }
    }
    let bad = Sequence::new(vec![2, 1]);
    assert_eq!(special_observation_violation([&bad]), Some(&bad));
}

#[test]
fn extremal_atoms_are_exactly_the_longest() {
    let (g, v) = r3_extremal_atoms();
    for s in &v {
        assert!(atom_oracle(&g, s));
        assert!(is_elementary(&g, s).unwrap());
    }
    let longest = enumerate_atoms(&g, None).of_length(5).into_iter().cloned().collect::<Vec<_>>();
    assert_eq!(longest.len(), 8);
    for s in &v {
        assert!(longest.contains(s));
        assert!(longest.contains(&negate(&g, s).unwrap().unwrap()));
    }
}
