mod common;

use std::collections::BTreeMap;

use hypermirror::fan::orbits;
use hypermirror::group::{GroupElement, SignedPerm, Subgroup};
use hypermirror::invariants::{
    cyclic_mirror_target, free_quotient_hodge, invariant_h21_poly, invariant_report, EULER_CHARACTERISTIC,
};
use hypermirror::linalg::IntMatrix;
use num_bigint::BigInt;
use hypermirror::sections::{freeness_certificate, generic_invariant_section, lifts, MonomialAutomorphism};
use num_rational::BigRational;
use proptest::prelude::*;

use common::{b4_subgroup, classes, context, flag_fan};

/// Trace average of the permutation matrices of `k` acting on the rays.
fn ray_trace_average(k: &Subgroup<SignedPerm>) -> BigRational {
    let rays = context().0.rays();
    let index: BTreeMap<&Vec<i64>, usize> = rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let total: BigInt = k
        .elements()
        .iter()
        .map(|w| {
            let mut rows = vec![vec![0i64; rays.len()]; rays.len()];
            for (j, r) in rays.iter().enumerate() {
                rows[index[&w.apply(r)]][j] = 1;
            }
            IntMatrix::from_i64_rows(&rows).unwrap().trace().unwrap()
        })
        .sum();
    BigRational::new(total, BigInt::from(k.order()))
}

#[test]
fn ray_orbits_match_trace_average_for_every_class() {
    let (seq, kernel) = context();
    for class in classes() {
        let k = &class.representative;
        let report = invariant_report(k, seq, kernel).unwrap();
        let by_orbits = orbits(seq.rays(), k.elements(), |w, r| w.apply(r)).unwrap().len() as i64;
        assert_eq!(report.dims.q80, by_orbits);
        assert_eq!(BigRational::from_integer(report.dims.q80.into()), ray_trace_average(k));
    }
}

#[test]
fn exactness_over_all_classes() {
    let (seq, kernel) = context();
    for class in classes() {
        let d = invariant_report(&class.representative, seq, kernel).unwrap().dims;
        assert_eq!(d.pic, d.q80 - d.q4);
        assert_eq!(d.pic_y, d.pic - d.ker);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exactness_for_arbitrary_subgroups(k in b4_subgroup()) {
        let (seq, kernel) = context();
        let d = invariant_report(&k, seq, kernel).unwrap().dims;
        prop_assert_eq!(d.pic, d.q80 - d.q4);
        prop_assert_eq!(d.pic_y, d.pic - d.ker);
        prop_assert_eq!(BigRational::from_integer(d.q80.into()), ray_trace_average(&k));
    }
}

fn cyclic(power: i64) -> Subgroup<MonomialAutomorphism> {
    Subgroup::generate(&[lifts::g().pow(power)])
}

#[test]
fn both_h12_routes_agree_for_free_quotients() {
    let (seq, kernel) = context();
    let s = generic_invariant_section();
    for (power, expected) in [(1, (9, 1)), (2, (18, 2)), (4, (36, 4))] {
        let k = cyclic(power);
        let lattice = Subgroup::generate(&[*lifts::g().pow(power).lattice_part()]);
        let report = invariant_report(&lattice, seq, kernel).unwrap();
        let verdicts = freeness_certificate(&s, &k, flag_fan()).unwrap();
        let pair = free_quotient_hodge(&k, &verdicts, &report).unwrap();
        let poly = invariant_h21_poly(&k).unwrap();
        assert_eq!(pair.h12, pair.h11 - EULER_CHARACTERISTIC / (2 * k.order() as i64));
        assert_eq!(poly, pair.h12, "invariant sections route for <g^{power}>");
        assert_eq!((pair.h11, pair.h12), expected);
        assert_eq!(pair.euler(), EULER_CHARACTERISTIC / k.order() as i64);
        assert_eq!(Some(pair.mirror()), cyclic_mirror_target(k.order()));
    }
}
