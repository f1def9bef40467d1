use proptest::prelude::*;
use zsl_invariants::{elements_up_to, factorizations, omega, DivisibilityMode, Monoid, PresentedMonoid};
use zsl_models::{
    associativity_check, block_monoid, free_omega_growth, monext_catenary, monext_invariants, monext_theta_check,
    non_saturation_witness, units_check, CatenaryCase, DPart, FiniteAbelianGroup, Monext,
};
use zsl_zsq::constructions::hypercube_pm;

fn b_g2() -> PresentedMonoid {
    block_monoid(&hypercube_pm(2).unwrap(), None).unwrap().0
}

fn n0() -> PresentedMonoid {
    PresentedMonoid::new(1, vec![vec![1]], DivisibilityMode::Saturated).unwrap()
}

fn z2() -> DPart {
    DPart::Group(FiniteAbelianGroup::cyclic(2).unwrap())
}

#[test]
fn theta_is_a_transfer_homomorphism() {
    let m = Monext::new(Box::new(b_g2()), z2()).unwrap();
    let r = monext_theta_check(&m, 200, 2024, 3);
    assert!(r.passed(), "{r:?}");
    let trivial = Monext::new(Box::new(b_g2()), DPart::Group(FiniteAbelianGroup::trivial())).unwrap();
    assert!(monext_theta_check(&trivial, 50, 1, 3).passed());
    let fp = Monext::new(Box::new(n0()), z2()).unwrap();
    assert!(monext_theta_check(&fp, 100, 3, 4).passed());
    let free = Monext::new(Box::new(b_g2()), DPart::Free { rank: 1, truncation: 3 }).unwrap();
    assert!(monext_theta_check(&free, 100, 4, 3).passed());
}

#[test]
fn omega_tau_tame_formulas_on_every_atom() {
    let h0 = b_g2();
    let m = Monext::new(Box::new(h0.clone()), z2()).unwrap();
    for u in 0..h0.atoms().len() {
        for d in [vec![0], vec![1]] {
            let r = monext_invariants(&m, u, &d, "minimal-cover", None).unwrap();
            assert!(r.oracle_complete);
            assert!(r.agrees(), "atom {u} d {d:?}: {r:?}");
            let brute = monext_invariants(&m, u, &d, "definition-budget", Some(7)).unwrap();
            assert!(brute.oracle_complete);
            assert_eq!(
                (brute.omega_oracle, brute.tau_oracle, brute.tame_oracle),
                (r.omega_oracle, r.tau_oracle, r.tame_oracle)
            );
        }
    }
}

#[test]
fn prime_atoms_become_non_prime() {
    let m = Monext::new(Box::new(n0()), DPart::Group(FiniteAbelianGroup::cyclic(3).unwrap())).unwrap();
    for d in 0..3 {
        let r = monext_invariants(&m, 0, &[d], "minimal-cover", None).unwrap();
        assert!(r.h0_prime);
        assert_eq!((r.omega_oracle, r.tau_oracle, r.tame_oracle), (2, Some(1), Some(2)));
        assert!(r.agrees());
    }
}

#[test]
fn minimal_cover_agrees_with_definition_on_nested_and_free() {
    let inner = Monext::new(Box::new(n0()), z2()).unwrap();
    let nested = Monext::new(Box::new(inner), z2()).unwrap();
    let free = Monext::new(Box::new(b_g2()), DPart::Free { rank: 1, truncation: 1 }).unwrap();
    for m in [&nested as &dyn Monoid, &free] {
        for a in 0..m.atoms().len() {
            let x = omega(m, a, "minimal-cover", None).unwrap();
            let y = omega(m, a, "definition-budget", Some(m.cover_length_bound(&m.atoms()[a]).unwrap())).unwrap();
            assert!(x.complete && y.complete);
            assert_eq!(x.value, y.value, "atom {a}");
            assert_eq!(x.covers, y.covers, "atom {a}");
        }
    }
}

#[test]
fn catenary_classification_matches_explicit_factorizations() {
    let h0 = b_g2();
    let m = Monext::new(Box::new(h0.clone()), z2()).unwrap();
    let non_atoms: Vec<_> =
        elements_up_to(&h0, 3).into_iter().filter(|a| factorizations(&h0, a).iter().any(|z| z.len() >= 2)).collect();
    let mut checked = 0;
    let mut zero_cases = 0;
    'outer: for a in &non_atoms {
        for d in [vec![0], vec![1]] {
            let c = monext_catenary(&m, a, &d).unwrap();
            assert_eq!(c.formula, c.oracle, "a {a:?} d {d:?}: {c:?}");
            zero_cases += usize::from(c.case == CatenaryCase::UnitPairSquare);
            checked += 1;
            if checked == 50 {
                break 'outer;
            }
        }
    }
    assert_eq!(checked, 50);
    assert!(zero_cases > 0);
}

#[test]
fn catenary_zero_cases_for_reduced_d() {
    let h0 = b_g2();
    let m = Monext::new(Box::new(h0.clone()), DPart::Free { rank: 1, truncation: 3 }).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for a in elements_up_to(&h0, 2).iter().filter(|a| factorizations(&h0, a).iter().any(|z| z.len() >= 2)) {
        for d in 0..=2 {
            let c = monext_catenary(&m, a, &[d]).unwrap();
            assert_eq!(c.formula, c.oracle, "a {a:?} d {d}");
            seen.insert(format!("{:?}", c.case));
        }
    }
    assert!(
        seen.contains("ReducedIdentity") && seen.contains("ReducedAtomPower") && seen.contains("General"),
        "{seen:?}"
    );
    // An atom is rejected.
    assert!(monext_catenary(&m, &h0.atoms()[0].clone(), &[0]).is_err());
}

#[test]
fn free_extension_omega_grows() {
    // In N0 ⋉ N0 the minimal covers of (1, k) have length at most max{2, k}, attained.
    let growth = free_omega_growth(&n0(), 0, 5).unwrap();
    assert_eq!(growth.iter().map(|g| g.1).collect::<Vec<_>>(), vec![2, 2, 2, 3, 4, 5]);
    let m = Monext::new(Box::new(b_g2()), DPart::Free { rank: 1, truncation: 3 }).unwrap();
    for u in 0..5 {
        for d in 0..=2 {
            let r = monext_invariants(&m, u, &[d], "minimal-cover", None).unwrap();
            assert!(r.unbounded);
            assert!(r.agrees(), "{r:?}");
        }
    }
}

#[test]
fn units_and_non_saturation() {
    let m = Monext::new(Box::new(b_g2()), z2()).unwrap();
    assert!(units_check(&m));
    let w = non_saturation_witness(&m).expect("nontrivial D");
    assert!(!m.contains(&w.quotient));
    let free = Monext::new(Box::new(n0()), DPart::Free { rank: 2, truncation: 2 }).unwrap();
    assert!(units_check(&free));
    assert!(non_saturation_witness(&free).is_some());
    let trivial = Monext::new(Box::new(n0()), DPart::Group(FiniteAbelianGroup::trivial())).unwrap();
    assert!(non_saturation_witness(&trivial).is_none());
}

#[test]
fn nested_extension_equals_product() {
    let z2 = FiniteAbelianGroup::cyclic(2).unwrap();
    let z3 = FiniteAbelianGroup::cyclic(3).unwrap();
    assert!(associativity_check(&n0(), &z2, &z3, 3).unwrap());
    assert!(associativity_check(&b_g2(), &z2, &z2, 2).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_inverts_combine(i in 0usize..10, j in 0usize..10, k in 0usize..10) {
        let m = Monext::new(Box::new(b_g2()), z2()).unwrap();
        let a = m.atoms();
        let x = m.combine(&a[i], &a[j]);
        let y = m.combine(&x, &a[k]);
        prop_assert_eq!(m.quotient(&y, &x), Some(a[k].clone()));
        prop_assert_eq!(m.quotient(&y, &a[k]), Some(x.clone()));
        prop_assert_eq!(m.level(&y), m.level(&x) + m.level(&a[k]));
        prop_assert!(m.contains(&y));
    }

    #[test]
    fn group_laws(x in proptest::collection::vec(0i64..6, 2), y in proptest::collection::vec(0i64..6, 2)) {
        let g = FiniteAbelianGroup::new(&[2, 6]).unwrap();
        let (x, y) = (g.reduce(&x), g.reduce(&y));
        prop_assert_eq!(g.add(&x, &y), g.add(&y, &x));
        prop_assert_eq!(g.add(&x, &g.neg(&x)), g.zero());
        prop_assert_eq!(g.sub(&g.add(&x, &y), &y), x);
    }
}
