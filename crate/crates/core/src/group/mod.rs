//! Signed permutation matrices, finite subgroups, and small-group labels.

mod catalog;
mod enumerate;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

pub use catalog::{
    builtin_catalog, identify, identify_table, is_isomorphic, parse_catalog, CayleyTable, Catalog,
    CatalogEntry, Fingerprint, IsoLabel,
};
pub use enumerate::{
    all_subgroups_of_order, count_m16_subgroups, subgroups_of_order_16_up_to_conjugacy,
    subgroups_up_to_conjugacy, sylow_2_subgroup, SubgroupClass,
};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

pub trait GroupElement: Clone + Ord + fmt::Debug + Send + Sync {
    fn identity() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;

    fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Order by repeated multiplication, `None` if it exceeds `cap`.
    fn order_up_to(&self, cap: usize) -> Option<usize> {
        let mut x = self.clone();
        for k in 1..=cap {
            if x.is_identity() {
                return Some(k);
            }
            x = x.mul(self);
        }
        None
    }

    fn conjugate_by(&self, z: &Self) -> Self {
        z.mul(self).mul(&z.inverse())
    }
}

/// A 4x4 matrix with one entry `+-1` in each row and column.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    m: [[i8; 4]; 4],
}

impl SignedPerm {
    pub fn from_rows(rows: [[i64; 4]; 4]) -> Result<Self> {
        let mut m = [[0i8; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let v = rows[i][j];
                if !(-1..=1).contains(&v) {
                    return Err(Error::InvalidInput(format!("entry {v} is not 0 or +-1")));
                }
                m[i][j] = v as i8;
            }
        }
        let ok = (0..4).all(|i| (0..4).filter(|&j| m[i][j] != 0).count() == 1)
            && (0..4).all(|j| (0..4).filter(|&i| m[i][j] != 0).count() == 1);
        if !ok {
            return Err(Error::InvalidInput("not a signed permutation matrix".into()));
        }
        Ok(Self { m })
    }

    pub fn from_vec_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(Error::InvalidInput("expected a 4x4 matrix".into()));
        }
        let mut a = [[0i64; 4]; 4];
        for i in 0..4 {
            a[i].copy_from_slice(&rows[i]);
        }
        Self::from_rows(a)
    }

    /// Row `i` has sign `signs[i]` in column `perm[i]`.
    pub fn from_perm_signs(perm: [usize; 4], signs: [i8; 4]) -> Self {
        let mut m = [[0i8; 4]; 4];
        for i in 0..4 {
            m[i][perm[i]] = signs[i];
        }
        Self { m }
    }

    pub fn diagonal(signs: [i8; 4]) -> Self {
        Self::from_perm_signs([0, 1, 2, 3], signs)
    }

    pub fn minus_identity() -> Self {
        Self::diagonal([-1; 4])
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m[i][j] as i64
    }

    pub fn rows(&self) -> [[i64; 4]; 4] {
        let mut r = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                r[i][j] = self.m[i][j] as i64;
            }
        }
        r
    }

    pub fn to_vec_rows(&self) -> Vec<Vec<i64>> {
        self.rows().iter().map(|r| r.to_vec()).collect()
    }

    /// Column of the nonzero entry in row `i`, with its sign.
    pub fn row_entry(&self, i: usize) -> (usize, i64) {
        let j = (0..4).find(|&j| self.m[i][j] != 0).expect("signed permutation row");
        (j, self.m[i][j] as i64)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..4).map(|i| (0..4).map(|j| self.m[i][j] as i64 * v[j]).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0i8; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[j][i] = self.m[i][j];
            }
        }
        Self { m }
    }

    pub fn trace(&self) -> i64 {
        (0..4).map(|i| self.m[i][i] as i64).sum()
    }

    pub fn order(&self) -> usize {
        self.order_up_to(384).expect("finite order")
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::new(4, 4, self.m.iter().flatten().map(|&v| BigInt::from(v)).collect())
            .expect("4x4")
    }
}

impl GroupElement for SignedPerm {
    fn identity() -> Self {
        Self::diagonal([1; 4])
    }

    fn mul(&self, o: &Self) -> Self {
        let mut m = [[0i8; 4]; 4];
        for i in 0..4 {
            let (k, s) = self.row_entry(i);
            for j in 0..4 {
                m[i][j] = s as i8 * o.m[k][j];
            }
        }
        Self { m }
    }

    fn inverse(&self) -> Self {
        self.transpose()
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for SignedPerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// The order-8 and order-2 generators of the modular group used throughout.
pub mod named {
    use super::{GroupElement, SignedPerm, Subgroup};

    pub fn g() -> SignedPerm {
        SignedPerm::from_rows([[0, -1, 0, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 0, 1, 0]])
            .expect("valid")
    }

    pub fn h() -> SignedPerm {
        SignedPerm::diagonal([1, -1, -1, 1])
    }

    pub fn g_pow(k: i64) -> SignedPerm {
        g().pow(k)
    }

    /// `<g, h>`.
    pub fn m16() -> Subgroup<SignedPerm> {
        Subgroup::generate(&[g(), h()])
    }
}

/// A finite subgroup stored as its sorted element list. Equality and
/// ordering ignore the generating set.
#[derive(Clone, Debug)]
pub struct Subgroup<T> {
    elements: Vec<T>,
    generators: Vec<T>,
}

impl<T: PartialEq> PartialEq for Subgroup<T> {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl<T: Eq> Eq for Subgroup<T> {}

impl<T: Ord> PartialOrd for Subgroup<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord> Ord for Subgroup<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl<T: std::hash::Hash> std::hash::Hash for Subgroup<T> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl<T: GroupElement> Subgroup<T> {
    pub fn trivial() -> Self {
        Self { elements: vec![T::identity()], generators: Vec::new() }
    }

    /// Closure of the generators. Loops forever on an infinite group; use
    /// [`Subgroup::generate_capped`] when finiteness is not known.
    pub fn generate(gens: &[T]) -> Self {
        Self::generate_capped(gens, usize::MAX).expect("uncapped")
    }

    pub fn generate_capped(gens: &[T], cap: usize) -> Option<Self> {
        let mut seen: BTreeSet<T> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(T::identity());
        queue.push_back(T::identity());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.mul(g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        let gens: Vec<T> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        Some(Self { elements: seen.into_iter().collect(), generators: gens })
    }

    /// Validates closure, identity and inverses, then finds a small generating set.
    pub fn from_elements(elements: Vec<T>) -> Result<Self> {
        let elements: Vec<T> = elements.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let set: BTreeSet<&T> = elements.iter().collect();
        if !set.contains(&T::identity()) {
            return Err(Error::NotClosed);
        }
        for a in &elements {
            if !set.contains(&a.inverse()) {
                return Err(Error::NotClosed);
            }
            for b in &elements {
                if !set.contains(&a.mul(b)) {
                    return Err(Error::NotClosed);
                }
            }
        }
        let mut s = Self { elements, generators: Vec::new() };
        s.generators = s.minimal_generators();
        Ok(s)
    }

    /// Trusted constructor for element lists already known to form a group.
    pub(crate) fn from_sorted_unchecked(elements: Vec<T>) -> Self {
        let mut s = Self { elements, generators: Vec::new() };
        s.generators = s.minimal_generators();
        s
    }

    /// Smallest generating set, taking the lexicographically first among
    /// those of minimal size. Greedy above order 64.
    fn minimal_generators(&self) -> Vec<T> {
        let n = self.order();
        if n == 1 {
            return Vec::new();
        }
        let nontrivial: Vec<&T> = self.elements.iter().filter(|x| !x.is_identity()).collect();
        if n <= 64 {
            for k in 1..=6 {
                for combo in crate::linalg::combinations(nontrivial.len(), k) {
                    let gens: Vec<T> = combo.iter().map(|&i| nontrivial[i].clone()).collect();
                    if Self::generate(&gens).order() == n {
                        return gens;
                    }
                }
            }
        }
        let mut gens: Vec<T> = Vec::new();
        let mut span = Self::trivial();
        let mut by_order: Vec<&T> = nontrivial.clone();
        by_order.sort_by_key(|x| std::cmp::Reverse(x.order_up_to(n).unwrap_or(0)));
        for x in by_order {
            if !span.contains(x) {
                gens.push(x.clone());
                span = Self::generate(&gens);
                if span.order() == n {
                    break;
                }
            }
        }
        gens
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn generators(&self) -> &[T] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| self.generators.iter().all(|b| a.mul(b) == b.mul(a)))
    }

    pub fn involutions(&self) -> Vec<T> {
        self.elements.iter().filter(|x| !x.is_identity() && x.mul(x).is_identity()).cloned().collect()
    }

    pub fn square_roots(&self, x: &T) -> Result<Vec<T>> {
        self.require(x)?;
        Ok(self.elements.iter().filter(|y| y.mul(y) == *x).cloned().collect())
    }

    pub fn centralizer(&self, x: &T) -> Result<Self> {
        self.require(x)?;
        let c = self.elements.iter().filter(|y| y.mul(x) == x.mul(y)).cloned().collect();
        Ok(Self::from_sorted_unchecked(c))
    }

    pub fn are_conjugate(&self, x: &T, y: &T) -> Result<bool> {
        self.require(x)?;
        self.require(y)?;
        Ok(self.elements.iter().any(|z| x.conjugate_by(z) == *y))
    }

    pub fn conjugacy_class(&self, x: &T) -> Result<Vec<T>> {
        self.require(x)?;
        let c: BTreeSet<T> = self.elements.iter().map(|z| x.conjugate_by(z)).collect();
        Ok(c.into_iter().collect())
    }

    /// `z H z^-1`.
    pub fn conjugate(&self, z: &T) -> Self {
        let mut e: Vec<T> = self.elements.iter().map(|x| x.conjugate_by(z)).collect();
        e.sort();
        let gens = self.generators.iter().map(|x| x.conjugate_by(z)).collect();
        Self { elements: e, generators: gens }
    }

    pub fn is_normal_in(&self, g: &Subgroup<T>) -> bool {
        g.generators.iter().all(|z| self.elements.iter().all(|x| self.contains(&x.conjugate_by(z))))
    }

    /// Smallest normal subgroup of `self` containing the given elements.
    pub fn normal_closure(&self, xs: &[T]) -> Result<Self> {
        for x in xs {
            self.require(x)?;
        }
        let mut gens: BTreeSet<T> = BTreeSet::new();
        for x in xs {
            for z in &self.elements {
                gens.insert(x.conjugate_by(z));
            }
        }
        let gens: Vec<T> = gens.into_iter().collect();
        Ok(Self::generate(&gens))
    }

    pub fn cayley_table(&self) -> CayleyTable {
        CayleyTable::from_elements(&self.elements)
    }

    fn require(&self, x: &T) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotMember)
        }
    }
}

/// All 384 signed permutation matrices.
pub fn generate_b4() -> Subgroup<SignedPerm> {
    let mut elements = Vec::with_capacity(384);
    for perm in permutations4() {
        for mask in 0..16u8 {
            let signs = [0, 1, 2, 3].map(|i| if mask >> i & 1 == 1 { -1 } else { 1 });
            elements.push(SignedPerm::from_perm_signs(perm, signs));
        }
    }
    elements.sort();
    // A 4-cycle, a transposition and one sign change generate.
    let gens = vec![
        SignedPerm::from_perm_signs([1, 2, 3, 0], [1; 4]),
        SignedPerm::from_perm_signs([1, 0, 2, 3], [1; 4]),
        SignedPerm::diagonal([-1, 1, 1, 1]),
    ];
    Subgroup { elements, generators: gens }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// True iff `a^8 = b^2 = 1`, `b^-1 a b = a^5` and `<a, b>` has order 16.
pub fn verify_m16_presentation<T: GroupElement>(a: &T, b: &T) -> bool {
    if !a.pow(8).is_identity() || !b.pow(2).is_identity() {
        return false;
    }
    if b.inverse().mul(a).mul(b) != a.pow(5) {
        return false;
    }
    Subgroup::generate_capped(&[a.clone(), b.clone()], 16).is_some_and(|s| s.order() == 16)
}
