mod common;

use std::collections::BTreeSet;

use hypermirror::fan::{burnside_orbit_count, common_face, fan_invariant_under, orbits, Cone};
use hypermirror::group::GroupElement;
use num_bigint::BigInt;
use proptest::prelude::*;

use common::{b4, b4_subgroup, flag_fan};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// A nonnegative combination of one cone's generators lies in the other
    /// cone exactly when it only uses the shared generators.
    #[test]
    fn common_face_is_the_intersection(i in 0..384usize, j in 0..384usize, coeffs in prop::collection::vec(0i64..3, 4)) {
        let fan = flag_fan();
        let (sigma, tau) = (&fan.cones()[i], &fan.cones()[j]);
        let face = common_face(sigma, tau, fan).unwrap();
        let shared: BTreeSet<&Vec<i64>> = face.generators().iter().collect();
        let mut point = vec![0i64; 4];
        for (g, c) in sigma.generators().iter().zip(&coeffs) {
            for k in 0..4 {
                point[k] += c * g[k];
            }
        }
        let uses_only_shared = sigma.generators().iter().zip(&coeffs).all(|(g, &c)| c == 0 || shared.contains(g));
        prop_assert_eq!(tau.contains(&point).unwrap(), uses_only_shared);
        for g in face.generators() {
            prop_assert!(sigma.contains(g).unwrap() && tau.contains(g).unwrap());
        }
    }

    #[test]
    fn orbit_partition_matches_burnside(k in b4_subgroup()) {
        let fan = flag_fan();
        let act_ray = |w: &hypermirror::group::SignedPerm, r: &Vec<i64>| w.apply(r);
        let ray_orbits = orbits(fan.rays(), k.elements(), act_ray).unwrap();
        prop_assert_eq!(ray_orbits.len(), burnside_orbit_count(fan.rays(), k.elements(), act_ray).unwrap());
        let act_cone = |w: &hypermirror::group::SignedPerm, c: &Cone| c.image(w);
        let cone_orbits = orbits(fan.cones(), k.elements(), act_cone).unwrap();
        prop_assert_eq!(cone_orbits.len(), burnside_orbit_count(fan.cones(), k.elements(), act_cone).unwrap());
    }
}

#[test]
fn determinant_volume_accounts_for_every_cone() {
    let fan = flag_fan();
    assert_eq!(fan.determinant_volume().unwrap(), BigInt::from(384));
    assert!(fan.cones().iter().all(|c| c.determinant().unwrap() == BigInt::from(1) || c.determinant().unwrap() == BigInt::from(-1)));
}

#[test]
fn invariant_under_all_of_b4() {
    let fan = flag_fan();
    assert!(b4().elements().iter().all(|w| fan_invariant_under(fan, w)));
    assert!(b4().elements().iter().filter(|w| !w.is_identity()).all(|w| fan.cones().iter().any(|c| c.image(w) != *c)));
}
