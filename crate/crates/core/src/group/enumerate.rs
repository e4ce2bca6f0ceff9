use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{identify, GroupElement, SignedPerm, Subgroup};
use crate::error::{Error, Result};

/// One conjugacy class of subgroups inside an ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    /// Member whose sorted element list is lexicographically smallest.
    pub representative: Subgroup<SignedPerm>,
    pub class_size: usize,
    pub normalizer_order: usize,
    members: Vec<Vec<u16>>,
}

/// The ambient group with elements indexed in sorted order.
struct Indexed {
    elems: Vec<SignedPerm>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    id: u16,
}

impl Indexed {
    fn new(g: &Subgroup<SignedPerm>) -> Self {
        let elems = g.elements().to_vec();
        let n = elems.len();
        let idx = |x: &SignedPerm| elems.binary_search(x).expect("closed") as u16;
        let mut mul = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                mul.push(idx(&a.mul(b)));
            }
        }
        let inv = elems.iter().map(|a| idx(&a.inverse())).collect();
        let id = idx(&SignedPerm::identity());
        Self { elems, mul, inv, id }
    }

    fn n(&self) -> usize {
        self.elems.len()
    }

    fn m(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.n() + b as usize]
    }

    fn conj(&self, x: u16, z: u16) -> u16 {
        self.m(self.m(z, x), self.inv[z as usize])
    }

    fn conjugate_set(&self, h: &[u16], z: u16) -> Vec<u16> {
        let mut v: Vec<u16> = h.iter().map(|&x| self.conj(x, z)).collect();
        v.sort_unstable();
        v
    }

    fn to_subgroup(&self, h: &[u16]) -> Subgroup<SignedPerm> {
        Subgroup::from_sorted_unchecked(h.iter().map(|&i| self.elems[i as usize]).collect())
    }

    /// Doubling `H` by `x`, when `x` normalizes `H` and squares into it.
    fn extend(&self, h: &[u16], member: &[bool], x: u16) -> Option<Vec<u16>> {
        if member[x as usize] || !member[self.m(x, x) as usize] {
            return None;
        }
        if !h.iter().all(|&y| member[self.conj(y, x) as usize]) {
            return None;
        }
        let mut v = h.to_vec();
        v.extend(h.iter().map(|&y| self.m(x, y)));
        v.sort_unstable();
        Some(v)
    }
}

fn membership(n: usize, h: &[u16]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &x in h {
        m[x as usize] = true;
    }
    m
}

fn two_part(n: usize) -> usize {
    1 << n.trailing_zeros()
}

/// A Sylow 2-subgroup, grown one index-2 step at a time by elements of the
/// normalizer whose square lies in the current subgroup.
pub fn sylow_2_subgroup(g: &Subgroup<SignedPerm>) -> Subgroup<SignedPerm> {
    let ix = Indexed::new(g);
    let target = two_part(ix.n());
    let mut p = vec![ix.id];
    while p.len() < target {
        let member = membership(ix.n(), &p);
        let next = (0..ix.n() as u16)
            .find_map(|x| ix.extend(&p, &member, x))
            .expect("a p-subgroup below Sylow order has a proper extension in its normalizer");
        p = next;
    }
    ix.to_subgroup(&p)
}

/// Subgroups of the given 2-power order inside `p`, by repeated index-2 extension.
fn two_subgroups_in(ix: &Indexed, p: &[u16], order: usize) -> Vec<Vec<u16>> {
    let mut layer: BTreeSet<Vec<u16>> = BTreeSet::from([vec![ix.id]]);
    while layer.iter().next().is_some_and(|h| h.len() < order) {
        let next: BTreeSet<Vec<u16>> = layer
            .par_iter()
            .flat_map_iter(|h| {
                let member = membership(ix.n(), h);
                p.iter().filter_map(move |&x| ix.extend(h, &member, x)).collect::<Vec<_>>()
            })
            .collect();
        layer = next;
    }
    layer.into_iter().collect()
}

/// Conjugacy classes of subgroups of a given 2-power order, sorted by
/// canonical representative.
pub fn subgroups_up_to_conjugacy(g: &Subgroup<SignedPerm>, order: usize) -> Result<Vec<SubgroupClass>> {
    if !order.is_power_of_two() {
        return Err(Error::Unsupported(format!("subgroup order {order} is not a power of two")));
    }
    if g.order() % order != 0 {
        return Ok(Vec::new());
    }
    let ix = Indexed::new(g);
    let sylow = sylow_2_subgroup(g);
    let p: Vec<u16> = sylow.elements().iter().map(|x| ix.elems.binary_search(x).unwrap() as u16).collect();
    let candidates = two_subgroups_in(&ix, &p, order);

    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    let mut classes = Vec::new();
    for h in candidates {
        if seen.contains(&h) {
            continue;
        }
        let orbit: BTreeSet<Vec<u16>> = (0..ix.n() as u16).map(|z| ix.conjugate_set(&h, z)).collect();
        let normalizer_order = (0..ix.n() as u16).filter(|&z| ix.conjugate_set(&h, z) == h).count();
        if orbit.len() * normalizer_order != ix.n() {
            return Err(Error::Invariant(format!(
                "orbit {} times normalizer {normalizer_order} differs from {}",
                orbit.len(),
                ix.n()
            )));
        }
        let rep = orbit.iter().next().expect("nonempty orbit").clone();
        seen.extend(orbit.iter().cloned());
        classes.push(SubgroupClass {
            representative: ix.to_subgroup(&rep),
            class_size: orbit.len(),
            normalizer_order,
            members: orbit.into_iter().collect(),
        });
    }
    classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    Ok(classes)
}

pub fn subgroups_of_order_16_up_to_conjugacy(b4: &Subgroup<SignedPerm>) -> Result<Vec<SubgroupClass>> {
    subgroups_up_to_conjugacy(b4, 16)
}

impl SubgroupClass {
    pub fn members(&self, g: &Subgroup<SignedPerm>) -> Vec<Subgroup<SignedPerm>> {
        let elems = g.elements();
        self.members
            .iter()
            .map(|h| Subgroup::from_sorted_unchecked(h.iter().map(|&i| elems[i as usize]).collect()))
            .collect()
    }
}

/// Every subgroup of the given 2-power order.
pub fn all_subgroups_of_order(g: &Subgroup<SignedPerm>, order: usize) -> Result<Vec<Subgroup<SignedPerm>>> {
    let mut out: Vec<Subgroup<SignedPerm>> =
        subgroups_up_to_conjugacy(g, order)?.iter().flat_map(|c| c.members(g)).collect();
    out.sort();
    Ok(out)
}

/// Number of subgroups isomorphic to the modular group of order 16 and
/// whether they form a single conjugacy class.
pub fn count_m16_subgroups(b4: &Subgroup<SignedPerm>) -> Result<(usize, bool)> {
    let classes = subgroups_up_to_conjugacy(b4, 16)?;
    let labels: Vec<Result<usize>> =
        classes.par_iter().map(|c| identify(&c.representative).map(|l| l.gap_id)).collect();
    let mut count = 0;
    let mut m16_classes = 0;
    for (c, l) in classes.iter().zip(labels) {
        if l? == 6 {
            count += c.class_size;
            m16_classes += 1;
        }
    }
    Ok((count, m16_classes == 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{generate_b4, named};

    #[test]
    fn sylow_has_order_128() {
        let b4 = generate_b4();
        let p = sylow_2_subgroup(&b4);
        assert_eq!(p.order(), 128);
        assert!(p.is_subgroup_of(&b4));
    }

    #[test]
    fn thirty_seven_classes_of_order_16() {
        let b4 = generate_b4();
        let classes = subgroups_of_order_16_up_to_conjugacy(&b4).unwrap();
        assert_eq!(classes.len(), 37);
        let total: usize = classes.iter().map(|c| c.class_size).sum();
        assert_eq!(total, 271);
        for c in &classes {
            assert_eq!(c.class_size * c.normalizer_order, 384);
        }
        let m16 = named::m16();
        let hits = classes.iter().filter(|c| c.members(&b4).contains(&m16)).count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn two_subgroup_counts_by_order() {
        let b4 = generate_b4();
        let counts: Vec<usize> =
            [2, 4, 8].iter().map(|&o| all_subgroups_of_order(&b4, o).unwrap().len()).collect();
        assert_eq!(counts, vec![75, 343, 487]);
    }

    #[test]
    fn representative_is_lexicographically_minimal() {
        let b4 = generate_b4();
        for c in subgroups_up_to_conjugacy(&b4, 4).unwrap() {
            let min = c.members(&b4).into_iter().map(|s| s.elements().to_vec()).min().unwrap();
            assert_eq!(c.representative.elements(), min.as_slice());
        }
    }

    #[test]
    fn six_conjugate_m16_subgroups() {
        let b4 = generate_b4();
        assert_eq!(count_m16_subgroups(&b4).unwrap(), (6, true));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(subgroups_up_to_conjugacy(&generate_b4(), 3).is_err());
    }
}
