//! Properties of sums, supports, φ and R-stripping.

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use zsl_zsq::constructions::{fibonacci_witness, hypercube_pm, r3_extremal_atoms};
use zsl_zsq::*;

fn ground() -> GroundSet {
    GroundSet::new(2, vec![vec![0, 0], vec![1, 0], vec![-1, 0], vec![0, 1], vec![1, 1], vec![-1, -1], vec![2, -1]])
        .unwrap()
}

fn seq(n: usize) -> impl Strategy<Value = Sequence> {
    proptest::collection::vec(0u64..4, n).prop_map(Sequence::new)
}

proptest! {
    #[test]
    fn varphi_is_additive(s in seq(7), t in seq(7)) {
        let g = ground();
        let lhs = varphi(&g, &s.product(&t)).unwrap();
        let rhs: Vec<BigRational> = varphi(&g, &s).unwrap().into_iter().zip(varphi(&g, &t).unwrap()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn stripping_keeps_signed_support(s in seq(7)) {
        let g = ground();
        let (r, rest) = strip_r(&g, &s).unwrap();
        prop_assert_eq!(r.product(&rest), s.clone());
        prop_assert_eq!(signed_support(&g, &rest).unwrap(), signed_support(&g, &s).unwrap());
        prop_assert!(varphi(&g, &r).unwrap().iter().all(Zero::is_zero));
        prop_assert!(is_zero_sum(&g, &r).unwrap());
        for i in rest.support() {
            if let Some(j) = g.neg_index(i) {
                prop_assert_eq!(rest.mult[j], 0);
            }
            prop_assert!(g.side(i) != Side::Zero);
        }
    }

    #[test]
    fn signed_support_is_symmetric_under_negation(s in seq(4)) {
        let g = GroundSet::new(1, vec![vec![1], vec![-1], vec![2], vec![-2]]).unwrap();
        let neg = negate(&g, &s).unwrap().unwrap();
        prop_assert_eq!(signed_support(&g, &s).unwrap(), signed_support(&g, &neg).unwrap());
        let vs = signed_support(&g, &s).unwrap().vectors(&g);
        for v in &vs {
            let m: Vec<i64> = v.iter().map(|x| -x).collect();
            prop_assert!(vs.contains(&m));
        }
    }

    #[test]
    fn zero_sum_divisibility_is_componentwise(s in seq(7), t in seq(7)) {
        let g = ground();
        let st = s.product(&t);
        if is_zero_sum(&g, &st).unwrap() && is_zero_sum(&g, &t).unwrap() {
            prop_assert!(is_subsequence(&g, &t, &st).unwrap());
            prop_assert!(is_zero_sum(&g, &st.quotient(&t).unwrap()).unwrap());
        }
    }
}

#[test]
fn small_examples() {
    let g = GroundSet::new(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
    assert!(sigma_int(&g, &Sequence::empty(3)).unwrap().iter().all(|&x| x == 0));
    assert!(is_zero_sum(&g, &Sequence::new(vec![1, 1, 0])).unwrap());
    assert!(!is_zero_sum(&g, &Sequence::new(vec![1, 0, 0])).unwrap());
    assert!(signed_support(&g, &Sequence::new(vec![1, 1, 0])).unwrap().is_empty());
    let x = signed_support(&g, &Sequence::new(vec![2, 1, 0])).unwrap();
    assert_eq!(x.vectors(&g), vec![vec![-1, 0], vec![1, 0]]);
    let (r, rest) = strip_r(&g, &Sequence::new(vec![1, 1, 1])).unwrap();
    assert_eq!((r, rest), (Sequence::new(vec![1, 1, 0]), Sequence::new(vec![0, 0, 1])));
    let z = GroundSet::new(1, vec![vec![0]]).unwrap();
    let (r, rest) = strip_r(&z, &Sequence::new(vec![3])).unwrap();
    assert_eq!((r.mult, rest.is_empty()), (vec![3], true));
    assert!(signed_support(&z, &Sequence::new(vec![3])).unwrap().is_empty());
    let phi = varphi(&g, &Sequence::new(vec![0, 0, 2])).unwrap();
    assert_eq!(phi[g.plus_indices().iter().position(|&i| i == 2).unwrap()], BigRational::from_integer(2.into()));
    assert!(matches!(is_zero_sum(&g, &Sequence::new(vec![1])), Err(ZsqError::GroundMismatch { .. })));
}

#[test]
fn partition_is_maximal() {
    let g = GroundSet::new(1, vec![vec![-3], vec![2], vec![-2], vec![0]]).unwrap();
    assert_eq!(g.side(0), Side::Plus);
    assert_eq!(g.side(1), Side::Plus);
    assert_eq!(g.side(2), Side::Minus);
    assert_eq!(g.side(3), Side::Zero);
    for i in 0..g.len() {
        if g.side(i) == Side::Minus {
            assert_eq!(g.side(g.neg_index(i).unwrap()), Side::Plus);
        }
    }
    assert!(GroundSet::new(1, vec![vec![1], vec![1]]).is_err());
}

#[test]
fn known_sums() {
    let w = fibonacci_witness(3, false).unwrap();
    assert_eq!(sigma_int(&w.ground, &w.s_r).unwrap(), vec![2, 2, 2]);
    let (g, v) = r3_extremal_atoms();
    assert!(v.iter().all(|s| is_zero_sum(&g, s).unwrap()));
}

/// |G0+| = rank<G0> + dim φ(B(G0)), with the right side spanned by small zero-sums.
#[test]
fn dimension_equation() {
    use zsl_linalg::{rank_over_q, IntMatrix};
    let grounds = vec![
        ground(),
        hypercube_pm(2).unwrap(),
        hypercube_pm(3).unwrap(),
        GroundSet::new(1, vec![vec![2], vec![-3], vec![5]]).unwrap(),
    ];
    for g in grounds {
        let atoms = enumerate_atoms(&g, None);
        let rows: Vec<Vec<i64>> = atoms
            .atoms
            .iter()
            .map(|a| varphi(&g, a).unwrap().iter().map(|q| q.to_integer().try_into().unwrap()).collect())
            .collect();
        let dim = if rows.is_empty() { 0 } else { rank_over_q(&IntMatrix::from_rows(&rows).unwrap()) };
        assert_eq!(g.plus_indices().len(), g.lattice_rank() + dim, "{:?}", g.elements());
    }
}
