use std::collections::HashMap;
use zsl_invariants::{catenary_element, elements_up_to, Monoid};
use zsl_models::{fp_rank1_invariants, FiniteAbelianGroup, FinitelyPrimaryRank1};

/// Number of multisets of `n` group elements with sum `g`, by a DP over the
/// elements in order (independent of the factorization search).
fn multiset_sum_count(group: &FiniteAbelianGroup, n: usize, g: &[i64]) -> u64 {
    let elems = group.elements();
    // state: (elements used, running sum) -> count
    let mut table: HashMap<(usize, Vec<i64>), u64> = HashMap::from([((0, group.zero()), 1)]);
    for h in &elems {
        let mut next: HashMap<(usize, Vec<i64>), u64> = HashMap::new();
        for ((k, s), c) in &table {
            let mut sum = s.clone();
            for j in 0..=(n - k) {
                *next.entry((k + j, sum.clone())).or_default() += c;
                sum = group.add(&sum, h);
            }
        }
        table = next;
    }
    table.get(&(n, g.to_vec())).copied().unwrap_or(0)
}

fn groups() -> Vec<FiniteAbelianGroup> {
    vec![
        FiniteAbelianGroup::trivial(),
        FiniteAbelianGroup::cyclic(2).unwrap(),
        FiniteAbelianGroup::cyclic(3).unwrap(),
        FiniteAbelianGroup::new(&[2, 2]).unwrap(),
    ]
}

#[test]
fn factorization_counts_match_group_sum_oracle() {
    for g in groups() {
        let m = FinitelyPrimaryRank1::new(g.clone());
        for x in elements_up_to(&m, 5) {
            let zs = catenary_element(&m, &x).unwrap().factorizations;
            assert_eq!(zs.len() as u64, multiset_sum_count(&g, x[0] as usize, &x[1..]), "{x:?}");
            assert!(zs.iter().all(|z| z.len() == x[0] as u64));
        }
    }
}

#[test]
fn rank_one_reports() {
    for g in groups() {
        let r = fp_rank1_invariants(&g, 6).unwrap();
        assert!(r.half_factorial, "{g:?}");
        assert!(r.agrees_with_extension, "{g:?}");
        assert_eq!(r.factorial, g.is_trivial(), "{g:?}");
        if g.is_trivial() {
            assert_eq!((r.catenary, r.tame_max, r.omega_max), (0, 0, 1));
        } else {
            assert_eq!((r.catenary, r.tame_max, r.omega_max), (2, 2, 2), "{g:?}");
            assert_eq!(r.catenary_nonunique.iter().copied().collect::<Vec<_>>(), vec![2]);
        }
    }
}

#[test]
fn unique_factorizations_above_level_one() {
    // Over Z/2 only (1, 2) = (1,1)(0,1) factors uniquely; larger groups have none.
    let r = fp_rank1_invariants(&FiniteAbelianGroup::cyclic(2).unwrap(), 6).unwrap();
    assert_eq!(r.unique_factorization_elements, vec![vec![2, 1]]);
    for g in [FiniteAbelianGroup::cyclic(3).unwrap(), FiniteAbelianGroup::new(&[2, 2]).unwrap()] {
        assert!(fp_rank1_invariants(&g, 5).unwrap().unique_factorization_elements.is_empty());
    }
}

#[test]
fn small_budget_rejected() {
    assert!(fp_rank1_invariants(&FiniteAbelianGroup::trivial(), 2).is_err());
}

#[test]
fn divisibility_rule() {
    let m = FinitelyPrimaryRank1::new(FiniteAbelianGroup::cyclic(3).unwrap());
    assert!(m.divides(&vec![1, 2], &vec![1, 2]));
    assert!(!m.divides(&vec![1, 2], &vec![1, 1]));
    assert!(m.divides(&vec![1, 2], &vec![2, 0]));
    assert!(!m.contains(&vec![0, 1]));
}
