//! Elementary atoms, the determinant formula, and the rational decomposition.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use zsl_zsq::constructions::{hypercube_plus, hypercube_pm};
use zsl_zsq::*;

/// Cofactor expansion, independent of the library determinant.
fn det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Σ|det ĝ_i| / gcd, with vectors as columns.
fn delta_oracle(v: &[Vec<i64>]) -> i64 {
    let r = v.len() - 1;
    let dets: Vec<i64> = (0..=r)
        .map(|drop| {
            let cols: Vec<&Vec<i64>> = v.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, c)| c).collect();
            let m: Vec<Vec<i64>> = (0..r).map(|row| cols.iter().map(|c| c[row]).collect()).collect();
            det(&m)
        })
        .collect();
    let g = dets.iter().fold(0, |a, &d| gcd(a, d));
    if g == 0 {
        0
    } else {
        dets.iter().map(|d| d.abs()).sum::<i64>() / g
    }
}

/// Searches every zero-sum `T` with `|T| ≤ max_len` for `∅ ≠ supp⁺(T) ⊊ supp⁺(S)`.
fn elementary_oracle(g: &GroundSet, s: &Sequence, max_len: u64) -> bool {
    let x = signed_support(g, s).unwrap();
    if x.is_empty() {
        return false;
    }
    let n = g.len();
    let mut stack = vec![(0usize, vec![0u64; n], 0u64)];
    while let Some((i, t, len)) = stack.pop() {
        if i == n {
            let t = Sequence::new(t);
            if is_zero_sum(g, &t).unwrap() {
                let y = signed_support(g, &t).unwrap();
                if !y.is_empty() && y.plus.is_subset(&x.plus) && y.plus != x.plus {
                    return false;
                }
            }
            continue;
        }
        for m in 0..=(max_len - len) {
            let mut t2 = t.clone();
            t2[i] = m;
            stack.push((i + 1, t2, len + m));
        }
    }
    true
}

fn random_full_rank(rng: &mut ChaCha8Rng, r: usize, n: usize, amp: i64) -> GroundSet {
    let n = n.min((2 * amp as usize + 1).pow(r as u32) - 1);
    loop {
        let mut set = BTreeSet::new();
        while set.len() < n {
            let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-amp..=amp)).collect();
            if v.iter().any(|&x| x != 0) {
                set.insert(v);
            }
        }
        let g = GroundSet::new(r, set.into_iter().collect()).unwrap();
        if g.lattice_rank() == r {
            return g;
        }
    }
}

#[test]
fn circuit_test_matches_direct_search_on_hypercube_atoms() {
    for r in [2, 3] {
        let g = hypercube_pm(r).unwrap();
        for a in enumerate_atoms(&g, None).atoms {
            let expected = elementary_oracle(&g, &a, 4);
            assert_eq!(is_elementary(&g, &a).unwrap(), expected, "{}", format_sequence(&g, &a));
            assert_eq!(is_elementary_direct(&g, &a, 4).unwrap(), expected);
        }
    }
}

#[test]
fn circuit_test_matches_direct_search_on_products() {
    let g = hypercube_pm(2).unwrap();
    let atoms = enumerate_atoms(&g, None).atoms;
    for a in &atoms {
        for b in &atoms {
            let s = a.product(b);
            assert_eq!(is_elementary(&g, &s).unwrap(), elementary_oracle(&g, &s, 3));
        }
    }
    assert!(matches!(is_elementary(&g, &Sequence::unit(g.len(), 0)), Err(ZsqError::NotZeroSum)));
}

#[test]
fn elementary_atoms_are_determined_by_signed_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut grounds = vec![hypercube_pm(2).unwrap(), hypercube_pm(3).unwrap(), hypercube_plus(3).unwrap()];
    for _ in 0..10 {
        let r = rng.gen_range(2..=3);
        let n = rng.gen_range(r + 1..=6);
        grounds.push(random_full_rank(&mut rng, r, n, 2));
    }
    for g in grounds {
        let atoms = enumerate_atoms(&g, Some(12));
        let mut by_support: BTreeMap<Vec<usize>, Vec<Sequence>> = BTreeMap::new();
        for u in elementary_atoms(&g, &atoms) {
            let x = signed_support(&g, &u).unwrap();
            by_support.entry(x.plus.iter().copied().collect()).or_default().push(u);
        }
        for (key, us) in by_support {
            assert!(us.len() <= 2);
            if us.len() == 2 {
                assert_eq!(negate(&g, &us[0]).unwrap().as_ref(), Some(&us[1]));
            }
            let x = signed_support(&g, &us[0]).unwrap();
            let unique = unique_elementary_atom(&g, &x).expect("elementary support");
            assert!(us.contains(&unique) || negate(&g, &unique).unwrap().is_some_and(|n| us.contains(&n)), "{key:?}");
            // Disjoint from its negative means the support has at most r+1 elements.
            for u in &us {
                let disjoint = u.support().iter().all(|&i| g.neg_index(i).is_none_or(|j| u.mult[j] == 0));
                if disjoint {
                    assert!(u.support().len() <= g.rank() + 1);
                }
            }
        }
    }
}

#[test]
fn elementary_sequences_are_powers_of_their_atom() {
    let g = hypercube_pm(3).unwrap();
    let atoms = enumerate_atoms(&g, None);
    for u in elementary_atoms(&g, &atoms) {
        let disjoint = u.support().iter().all(|&i| g.neg_index(i).is_none_or(|j| u.mult[j] == 0));
        if !disjoint {
            continue;
        }
        for k in 1..=3 {
            let s = u.power(k);
            assert!(is_elementary(&g, &s).unwrap());
            let x = signed_support(&g, &s).unwrap();
            let v = unique_elementary_atom(&g, &x).unwrap();
            let v = if v == u { v } else { negate(&g, &v).unwrap().unwrap() };
            assert_eq!(v.power(k), s);
        }
    }
}

#[test]
fn delta_matches_cofactor_oracle_and_atom_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let r = rng.gen_range(1..=4);
        let v: Vec<Vec<i64>> = (0..=r).map(|_| (0..r).map(|_| rng.gen_range(-4i64..=4)).collect()).collect();
        assert_eq!(delta_tuple(&v).unwrap(), BigInt::from(delta_oracle(&v)));
    }
    // On a symmetric set, an (r+1)-circuit of G0+ carries an elementary atom of length Δ.
    for r in [2, 3] {
        let g = hypercube_pm(r).unwrap();
        let plus = g.plus_indices().to_vec();
        for combo in subsets(plus.len(), r + 1) {
            let idx: Vec<usize> = combo.iter().map(|&k| plus[k]).collect();
            let vecs: Vec<Vec<i64>> = idx.iter().map(|&i| g.element(i).to_vec()).collect();
            let x = SignedSupport::from_vectors(
                &g,
                &vecs.iter().flat_map(|v| [v.clone(), v.iter().map(|c| -c).collect()]).collect::<Vec<_>>(),
            )
            .unwrap();
            if let Some(u) = unique_elementary_atom(&g, &x) {
                if u.support().len() == r + 1 {
                    assert_eq!(u.length() as i64, delta_oracle(&vecs));
                }
            }
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

#[test]
fn both_methods_agree_and_d3_characterization() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut grounds = vec![hypercube_pm(2).unwrap(), hypercube_pm(3).unwrap()];
    for k in 0..40 {
        let r = rng.gen_range(1..=3);
        let n = rng.gen_range(r + 1..=6);
        let mut g = random_full_rank(&mut rng, r, n, if k % 4 == 0 { 2 } else { 1 });
        if rng.gen_bool(0.5) {
            let mut els = g.elements().to_vec();
            for v in g.elements() {
                let m: Vec<i64> = v.iter().map(|x| -x).collect();
                if !els.contains(&m) {
                    els.push(m);
                }
            }
            g = GroundSet::new(r, els).unwrap();
        }
        grounds.push(g);
    }
    let mut checked = 0;
    for g in grounds {
        let atoms = enumerate_atoms(&g, Some(12));
        if !atoms.complete {
            continue;
        }
        checked += 1;
        let d = atoms.davenport().value;
        let by_enum = ByEnumeration.compute(&g, Some(&atoms)).unwrap();
        let by_formula = ByFormula.compute(&g, Some(&atoms)).unwrap();
        assert_eq!(by_enum.value, by_formula.value, "{:?}", g.elements());
        let has_elementary = !elementary_atoms(&g, &atoms).is_empty();
        assert_eq!(d >= 3, has_elementary, "{:?}", g.elements());
        assert_eq!(d >= 3, by_enum.value >= BigInt::from(3));
        assert!(by_enum.value <= BigInt::from(d));
    }
    assert!(checked >= 30, "only {checked} ground sets completed");
    let pair = GroundSet::new(1, vec![vec![1], vec![-1]]).unwrap();
    assert!(elementary_davenport(&pair, "enumerate").unwrap().value.is_zero());
    assert!(elementary_davenport(&pair, "formula").unwrap().value.is_zero());
    assert!(elementary_davenport_method("other").is_err());
}

fn random_rational_zero_sum(rng: &mut ChaCha8Rng, g: &GroundSet, atoms: &[Sequence]) -> RationalSequence {
    let mut s = RationalSequence::empty(g.len());
    for _ in 0..rng.gen_range(1..=4) {
        let u = &atoms[rng.gen_range(0..atoms.len())];
        let q = BigRational::new(rng.gen_range(1..=7).into(), rng.gen_range(1..=5).into());
        s = s.product(&u.to_rational().scale(&q));
    }
    s
}

#[test]
fn decomposition_reconstructs_and_respects_length_bound() {
    for r in [2, 3] {
        let g = hypercube_pm(r).unwrap();
        let atoms = enumerate_atoms(&g, None);
        let mut rng = ChaCha8Rng::seed_from_u64(r as u64);
        for _ in 0..100 {
            let s = random_rational_zero_sum(&mut rng, &g, &atoms.atoms);
            let dec = rational_elementary_decomposition(&g, &s, &atoms).unwrap();
            assert_eq!(dec.reconstruct(), s);
            assert!(dec.ell() <= ell_bound(&g, &s).unwrap());
            assert!(dec.parts.iter().all(|(u, a)| a.is_positive() && is_elementary(&g, u).unwrap()));
            assert!(is_zero_sum(&g, &dec.r).unwrap());
        }
    }
}

#[test]
fn decomposition_rejects_bad_input() {
    let g = hypercube_pm(2).unwrap();
    let atoms = enumerate_atoms(&g, None);
    let one = Sequence::unit(g.len(), 0).to_rational();
    assert!(matches!(rational_elementary_decomposition(&g, &one, &atoms), Err(ZsqError::NotZeroSum)));
}

#[test]
fn bounds_dominate_davenport() {
    for r in [2, 3] {
        let g = hypercube_pm(r).unwrap();
        let atoms = enumerate_atoms(&g, None);
        let d = BigInt::from(atoms.davenport().value);
        let report = davenport_upper_bounds(&g, &atoms).unwrap();
        assert_eq!(report.values().len(), 5);
        for (name, b) in report.values() {
            assert!(b >= d, "{name}: {b} < {d}");
        }
        assert!(!report.elm_product_conditional);
    }
    let skew = GroundSet::new(1, vec![vec![1], vec![-1]]).unwrap();
    let report = davenport_upper_bounds(&skew, &enumerate_atoms(&skew, None)).unwrap();
    assert!(report.snf_g0.is_none() && report.hadamard.is_none());
    assert_eq!(report.notes.len(), 2);
}
