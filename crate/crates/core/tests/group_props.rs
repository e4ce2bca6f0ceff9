mod common;

use std::collections::BTreeMap;

use hypermirror::group::{builtin_catalog, identify, is_isomorphic, GroupElement, Subgroup};
use hypermirror::invariants::{invariant_report, REFERENCE_TABLE};
use proptest::prelude::*;

use common::{b4, b4_element, classes, context};

#[test]
fn enumerated_subgroups_are_groups() {
    let mut total = 0;
    for class in classes() {
        for member in class.members(b4()) {
            let rebuilt = Subgroup::from_elements(member.elements().to_vec()).unwrap();
            assert_eq!(rebuilt.order(), 16);
            assert!(member.contains(&GroupElement::identity()));
            assert!(member.elements().iter().all(|x| member.contains(&x.inverse())));
            total += 1;
        }
        assert_eq!(class.members(b4()).len(), class.class_size);
    }
    assert_eq!(total, 271);
}

#[test]
fn label_multiset_matches_the_reference_table() {
    let mut computed = BTreeMap::new();
    for class in classes() {
        *computed.entry(identify(&class.representative).unwrap().gap_id).or_insert(0) += 1;
    }
    let mut expected = BTreeMap::new();
    for (gap, _) in REFERENCE_TABLE {
        *expected.entry(gap).or_insert(0) += 1;
    }
    assert_eq!(computed, expected);
}

#[test]
fn fingerprints_agree_with_catalog_isomorphisms() {
    let catalog = builtin_catalog();
    for class in classes() {
        let table = class.representative.cayley_table();
        for entry in catalog.entries().iter().filter(|e| e.order == 16) {
            if entry.fingerprint != table.fingerprint() {
                assert!(!is_isomorphic(&table, &entry.table), "fingerprint pruned an isomorphic entry");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conjugates_share_label_and_report(i in 0..37usize, z in b4_element()) {
        let (seq, kernel) = context();
        let h = &classes()[i].representative;
        let c = h.conjugate(&z);
        prop_assert_eq!(identify(&c).unwrap(), identify(h).unwrap());
        let (a, b) = (invariant_report(h, seq, kernel).unwrap(), invariant_report(&c, seq, kernel).unwrap());
        prop_assert_eq!(a.dims, b.dims);
        prop_assert_eq!(a.label, b.label);
    }

    #[test]
    fn identification_agrees_with_isomorphism_search(i in 0..37usize, j in 0..37usize) {
        let (a, b) = (&classes()[i].representative, &classes()[j].representative);
        let same_label = identify(a).unwrap().gap_id == identify(b).unwrap().gap_id;
        let (ta, tb) = (a.cayley_table(), b.cayley_table());
        prop_assert_eq!(same_label, is_isomorphic(&ta, &tb));
        prop_assert_eq!(same_label, is_isomorphic(&tb, &ta));
    }
}
