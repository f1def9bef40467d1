use proptest::prelude::*;
use zsl_models::{block_monoid_of_vectors, hnp_report, some_zss_atoms, SomeZss, TowerData};

fn towers(json: &str) -> TowerData {
    serde_json::from_str(json).unwrap()
}

#[test]
fn two_cycle_towers() {
    let td = towers(
        r#"{"udim": 1, "cycle_towers": [{"ranks":[1,1]},{"ranks":[2,1]}], "faithful_towers": [], "class_group": []}"#,
    );
    let r = hnp_report(&td, 4).unwrap();
    assert!(!r.factorial && r.half_factorial && r.catenary_at_most_two);
    assert_eq!((r.tame, r.omega), (Some(5), Some(5)));
    assert_eq!((r.core_tame, r.core_omega), (5, 5));
}

#[test]
fn factorial_cases() {
    let dedekind = towers(r#"{"udim": 1}"#);
    let r = hnp_report(&dedekind, 4).unwrap();
    assert!(r.factorial && r.half_factorial);
    assert_eq!((r.tame, r.core_tame), (Some(0), 0));
    // A single cycle tower whose rank equals udim.
    let single = towers(r#"{"udim": 2, "cycle_towers": [{"ranks":[1,1]}]}"#);
    let r = hnp_report(&single, 4).unwrap();
    assert!(r.factorial);
    assert_eq!(r.core_tame, 0);
}

#[test]
fn class_group_alone_gives_tame_degree_two() {
    let td = towers(r#"{"udim": 1, "class_group": [2]}"#);
    let r = hnp_report(&td, 4).unwrap();
    assert!(!r.factorial && r.half_factorial);
    assert_eq!((r.tame, r.core_tame, r.catenary_max), (Some(2), 2, 2));
    let td = towers(r#"{"udim": 1, "cycle_towers": [{"ranks":[1,1]}], "class_group": [3]}"#);
    let r = hnp_report(&td, 4).unwrap();
    assert_eq!((r.tame, r.core_tame), (Some(2), 2));
    let td = towers(r#"{"udim": 1, "cycle_towers": [{"ranks":[1,2]}], "class_group": [2]}"#);
    let r = hnp_report(&td, 3).unwrap();
    assert_eq!((r.tame, r.core_tame), (Some(3), 3));
}

#[test]
fn faithful_tower_is_infinite() {
    let td = towers(r#"{"udim": 1, "cycle_towers": [{"ranks":[1,1]}], "faithful_towers": [{"ranks":[1,1]}]}"#);
    let r = hnp_report(&td, 3).unwrap();
    assert_eq!((r.tame, r.omega), (None, None));
    assert!(!r.factorial && r.half_factorial);
}

#[test]
fn invalid_tower_data() {
    assert!(hnp_report(&towers(r#"{"udim": 0}"#), 3).is_err());
    assert!(hnp_report(&towers(r#"{"udim": 2, "cycle_towers": [{"ranks":[1,2]}]}"#), 3).is_err());
    assert!(hnp_report(&towers(r#"{"udim": 1, "cycle_towers": [{"ranks":[0,2]}]}"#), 3).is_err());
}

#[test]
fn single_atom_ground_sets() {
    let t = some_zss_atoms(&SomeZss::Torsion { order: 4 }).unwrap();
    assert_eq!((t.exponents.clone(), t.factorial), (vec![4], true));
    let u = some_zss_atoms(&SomeZss::Independent { a: vec![2], b: vec![3] }).unwrap();
    assert_eq!(u.ground, vec![vec![2], vec![-3]]);
    assert_eq!(u.exponents, vec![3, 2]);
    assert_eq!(u.length(), 5);
    let v = some_zss_atoms(&SomeZss::Independent { a: vec![1, 1], b: vec![1, 1] }).unwrap();
    assert_eq!(v.exponents, vec![1, 1, 1]);
    assert!(some_zss_atoms(&SomeZss::Independent { a: vec![2], b: vec![4] }).is_err());
    assert!(some_zss_atoms(&SomeZss::Independent { a: vec![2, 1], b: vec![1] }).is_err());
    assert!(some_zss_atoms(&SomeZss::Torsion { order: 0 }).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn formula_is_the_unique_enumerated_atom(
        ab in proptest::collection::vec((1u64..5, 1u64..5), 1..3)
            .prop_filter("coprime", |v| v.iter().all(|&(a, b)| num_integer::gcd(a, b) == 1))
    ) {
        let (a, b): (Vec<u64>, Vec<u64>) = ab.into_iter().unzip();
        let f = some_zss_atoms(&SomeZss::Independent { a: a.clone(), b }).unwrap();
        let atoms = block_monoid_of_vectors(a.len(), &f.ground, Some(f.length() as usize + 1)).unwrap();
        prop_assert_eq!(atoms.atoms.len(), 1);
        prop_assert_eq!(&atoms.atoms[0].mult, &f.exponents);
    }
}
