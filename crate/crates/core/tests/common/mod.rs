#![allow(dead_code)]

use std::sync::OnceLock;

use hypermirror::fan::{flag_subdivision, Fan};
use hypermirror::group::{generate_b4, subgroups_of_order_16_up_to_conjugacy, SignedPerm, Subgroup, SubgroupClass};
use hypermirror::invariants::{flag_context, DivisorSequence};
use hypermirror::polytope::Point;
use proptest::prelude::*;

pub fn b4() -> &'static Subgroup<SignedPerm> {
    static B4: OnceLock<Subgroup<SignedPerm>> = OnceLock::new();
    B4.get_or_init(generate_b4)
}

pub fn flag_fan() -> &'static Fan {
    static FAN: OnceLock<Fan> = OnceLock::new();
    FAN.get_or_init(flag_subdivision)
}

pub fn classes() -> &'static [SubgroupClass] {
    static CLASSES: OnceLock<Vec<SubgroupClass>> = OnceLock::new();
    CLASSES.get_or_init(|| subgroups_of_order_16_up_to_conjugacy(b4()).unwrap())
}

pub fn context() -> &'static (DivisorSequence, Vec<Point>) {
    static CTX: OnceLock<(DivisorSequence, Vec<Point>)> = OnceLock::new();
    CTX.get_or_init(|| flag_context().unwrap())
}

pub fn b4_element() -> impl Strategy<Value = SignedPerm> {
    (0..384usize).prop_map(|i| b4().elements()[i])
}

/// Subgroups of B4 generated by one to three random elements.
pub fn b4_subgroup() -> impl Strategy<Value = Subgroup<SignedPerm>> {
    prop::collection::vec(b4_element(), 1..=3).prop_map(|gens| Subgroup::generate(&gens))
}
