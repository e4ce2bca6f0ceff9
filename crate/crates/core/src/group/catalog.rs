use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::{GroupElement, Subgroup};
use crate::error::{Error, Result};

const CATALOG_DATA: &str = include_str!("../../data/small_groups.txt");

/// Multiplication table on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    n: usize,
    mul: Vec<usize>,
    identity: usize,
}

/// Isomorphism invariants used to prune the brute-force search.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    /// `(element order, count)` pairs in increasing order.
    pub element_orders: Vec<(usize, usize)>,
    pub abelianization: Vec<usize>,
    pub center_order: usize,
    pub derived_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IsoLabel {
    pub order: usize,
    pub gap_id: usize,
    pub fingerprint: Fingerprint,
}

impl fmt::Display for IsoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.order, self.gap_id)
    }
}

impl CayleyTable {
    pub fn from_elements<T: GroupElement>(elements: &[T]) -> Self {
        let mut sorted = elements.to_vec();
        sorted.sort();
        let n = sorted.len();
        let idx = |x: &T| sorted.binary_search(x).expect("closed element list");
        let mut mul = Vec::with_capacity(n * n);
        for a in &sorted {
            for b in &sorted {
                mul.push(idx(&a.mul(b)));
            }
        }
        Self { n, mul, identity: idx(&T::identity()) }
    }

    /// Table of the group generated by square integer matrices.
    pub fn from_matrix_generators(gens: &[Vec<Vec<i64>>]) -> Result<Self> {
        let dim = gens.first().map_or(1, Vec::len);
        if gens.iter().any(|g| g.len() != dim || g.iter().any(|r| r.len() != dim)) {
            return Err(Error::InvalidInput("generators must be square of one size".into()));
        }
        let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..dim).map(|i| (0..dim).map(|j| (0..dim).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
        };
        let id: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        let mut queue = VecDeque::from([id.clone()]);
        seen.insert(id.clone());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = mul(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > 4096 {
                        return Err(Error::InvalidInput("matrix group too large or infinite".into()));
                    }
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Vec<Vec<i64>>> = seen.into_iter().collect();
        let n = elems.len();
        let idx = |x: &Vec<Vec<i64>>| elems.binary_search(x).expect("closed");
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                table.push(idx(&mul(a, b)));
            }
        }
        Ok(Self { n, mul: table, identity: idx(&id) })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n).find(|&b| self.mul(a, b) == self.identity).expect("group table")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by the given elements, as a sorted index list.
    pub fn span(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|&i| seen[i]).collect()
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let comms: BTreeSet<usize> = (0..self.n)
            .flat_map(|a| {
                (0..self.n).map(move |b| (a, b))
            })
            .map(|(a, b)| self.mul(self.mul(self.inverse(a), self.inverse(b)), self.mul(a, b)))
            .collect();
        self.span(&comms.into_iter().collect::<Vec<_>>())
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let set: BTreeSet<usize> = sub.iter().copied().collect();
        (0..self.n).all(|z| {
            let zi = self.inverse(z);
            sub.iter().all(|&x| set.contains(&self.mul(self.mul(z, x), zi)))
        })
    }

    /// Table of `G / N` for a normal subgroup `N`.
    pub fn quotient(&self, normal: &[usize]) -> Result<Self> {
        if !self.is_normal(normal) || !normal.contains(&self.identity) {
            return Err(Error::InvalidInput("quotient by a non-normal subset".into()));
        }
        let mut coset_of = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for a in 0..self.n {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(a);
            for &x in normal {
                coset_of[self.mul(a, x)] = c;
            }
        }
        let m = reps.len();
        let mut mul = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                mul.push(coset_of[self.mul(a, b)]);
            }
        }
        Ok(Self { n: m, mul, identity: coset_of[self.identity] })
    }

    /// Invariant factors of an abelian table, as prime-power orders sorted ascending.
    pub fn abelian_invariants(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for p in prime_factors(self.n) {
            // Number of elements with x^(p^k) = 1, for k = 0, 1, ...
            let mut counts = vec![1usize];
            let mut pk = 1usize;
            loop {
                pk *= p;
                let c = (0..self.n).filter(|&a| self.power(a, pk) == self.identity).count();
                counts.push(c);
                if c == *counts.iter().rev().nth(1).unwrap() {
                    counts.pop();
                    break;
                }
            }
            // counts[k]/counts[k-1] = p^(number of cyclic factors of order >= p^k)
            let ge: Vec<usize> =
                counts.windows(2).map(|w| log_base(w[1] / w[0], p)).collect();
            for k in 0..ge.len() {
                let next = ge.get(k + 1).copied().unwrap_or(0);
                for _ in 0..ge[k] - next {
                    out.push(p.pow(k as u32 + 1));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn power(&self, a: usize, k: usize) -> usize {
        let mut x = self.identity;
        for _ in 0..k {
            x = self.mul(x, a);
        }
        x
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
        for a in 0..self.n {
            *orders.entry(self.element_order(a)).or_default() += 1;
        }
        let derived = self.derived_subgroup();
        let ab = self.quotient(&derived).expect("derived subgroup is normal").abelian_invariants();
        Fingerprint {
            element_orders: orders.into_iter().collect(),
            abelianization: ab,
            center_order: self.center().len(),
            derived_order: derived.len(),
        }
    }

    /// Lexicographically first generating set of minimal size.
    pub fn minimal_generating_set(&self) -> Vec<usize> {
        if self.n == 1 {
            return Vec::new();
        }
        let nontrivial: Vec<usize> = (0..self.n).filter(|&a| a != self.identity).collect();
        for k in 1..=nontrivial.len() {
            for combo in crate::linalg::combinations(nontrivial.len(), k) {
                let gens: Vec<usize> = combo.iter().map(|&i| nontrivial[i]).collect();
                if self.span(&gens).len() == self.n {
                    return gens;
                }
            }
        }
        unreachable!("the whole group generates itself")
    }

    /// Search for an isomorphism `self -> other` by trying every tuple of
    /// images for a minimal generating set of `self`.
    pub fn find_isomorphism(&self, other: &CayleyTable) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        let gens = self.minimal_generating_set();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let candidates: Vec<Vec<usize>> = orders
            .iter()
            .map(|&o| (0..other.n).filter(|&b| other.element_order(b) == o).collect())
            .collect();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if candidates.iter().any(Vec::is_empty) {
                return None;
            }
            let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
            if let Some(map) = self.extend_homomorphism(&gens, &images, other) {
                return Some(map);
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return None;
                }
                choice[k] += 1;
                if choice[k] < candidates[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    fn extend_homomorphism(&self, gens: &[usize], images: &[usize], other: &CayleyTable) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.n];
        map[self.identity] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &im) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = other.mul(map[x], im);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let distinct: BTreeSet<usize> = map.iter().copied().collect();
        if distinct.len() != self.n || distinct.contains(&usize::MAX) {
            return None;
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if map[self.mul(a, b)] != other.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn log_base(mut x: usize, p: usize) -> usize {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

pub fn is_isomorphic(a: &CayleyTable, b: &CayleyTable) -> bool {
    a.find_isomorphism(b).is_some()
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub gap_id: usize,
    pub order: usize,
    pub table: CayleyTable,
    pub fingerprint: Fingerprint,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn orders(&self) -> BTreeSet<usize> {
        self.entries.iter().map(|e| e.order).collect()
    }

    pub fn get(&self, order: usize, gap_id: usize) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.order == order && e.gap_id == gap_id)
    }
}

/// Parse `gap_id;order;generator_matrices_json` records; `#` starts a comment.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: String| Error::Catalog { line: line_no, reason };
        let parts: Vec<&str> = line.splitn(3, ';').collect();
        if parts.len() != 3 {
            return Err(bad("expected three ';'-separated fields".into()));
        }
        let gap_id: usize = parts[0].trim().parse().map_err(|e| bad(format!("gap id: {e}")))?;
        let order: usize = parts[1].trim().parse().map_err(|e| bad(format!("order: {e}")))?;
        let gens: Vec<Vec<Vec<i64>>> =
            serde_json::from_str(parts[2]).map_err(|e| bad(format!("generators: {e}")))?;
        let table = CayleyTable::from_matrix_generators(&gens).map_err(|e| bad(e.to_string()))?;
        if table.order() != order {
            return Err(bad(format!("generators give order {}, record says {order}", table.order())));
        }
        let fingerprint = table.fingerprint();
        entries.push(CatalogEntry { gap_id, order, table, fingerprint });
    }
    Ok(Catalog { entries })
}

pub fn builtin_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(CATALOG_DATA).expect("shipped catalog parses"))
}

pub fn identify<T: GroupElement>(h: &Subgroup<T>) -> Result<IsoLabel> {
    identify_table(&h.cayley_table())
}

/// Label a group by isomorphism search against the catalog entries that
/// share its fingerprint.
pub fn identify_table(t: &CayleyTable) -> Result<IsoLabel> {
    let catalog = builtin_catalog();
    if !catalog.orders().contains(&t.order()) {
        return Err(Error::UnsupportedOrder(t.order()));
    }
    let fp = t.fingerprint();
    for e in catalog.entries() {
        if e.order == t.order() && e.fingerprint == fp && e.table.find_isomorphism(t).is_some() {
            return Ok(IsoLabel { order: e.order, gap_id: e.gap_id, fingerprint: fp });
        }
    }
    Err(Error::NoCatalogMatch(t.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named::{g, h};
    use crate::group::SignedPerm;

    #[test]
    fn catalog_has_expected_entries() {
        let c = builtin_catalog();
        let per_order: BTreeMap<usize, usize> = c.entries().iter().fold(BTreeMap::new(), |mut m, e| {
            *m.entry(e.order).or_default() += 1;
            m
        });
        assert_eq!(per_order, BTreeMap::from([(1, 1), (2, 1), (4, 2), (8, 5), (16, 14)]));
    }

    #[test]
    fn catalog_entries_are_pairwise_non_isomorphic() {
        let c = builtin_catalog();
        for (i, a) in c.entries().iter().enumerate() {
            for b in &c.entries()[i + 1..] {
                if a.order == b.order {
                    assert!(!is_isomorphic(&a.table, &b.table), "{} vs {}", a.gap_id, b.gap_id);
                }
            }
        }
    }

    #[test]
    fn catalog_fingerprints_separate_order_16() {
        let c = builtin_catalog();
        let fps: BTreeSet<&Fingerprint> =
            c.entries().iter().filter(|e| e.order == 16).map(|e| &e.fingerprint).collect();
        assert_eq!(fps.len(), 14);
    }

    #[test]
    fn every_catalog_entry_identifies_as_itself() {
        for e in builtin_catalog().entries() {
            let l = identify_table(&e.table).unwrap();
            assert_eq!((l.order, l.gap_id), (e.order, e.gap_id));
        }
    }

    #[test]
    fn known_labels() {
        let m16 = Subgroup::generate(&[g(), h()]);
        let l = identify(&m16).unwrap();
        assert_eq!((l.order, l.gap_id), (16, 6));
        let c8 = Subgroup::generate(&[g()]);
        let l = identify(&c8).unwrap();
        assert_eq!((l.order, l.gap_id), (8, 1));
        assert_eq!(l.fingerprint.element_orders.last(), Some(&(8, 4)));
        let l = identify(&Subgroup::<SignedPerm>::trivial()).unwrap();
        assert_eq!((l.order, l.gap_id), (1, 1));
    }

    #[test]
    fn unsupported_order_is_named() {
        let s3 = Subgroup::generate(&[
            SignedPerm::from_perm_signs([1, 2, 0, 3], [1; 4]),
            SignedPerm::from_perm_signs([1, 0, 2, 3], [1; 4]),
        ]);
        assert_eq!(identify(&s3), Err(Error::UnsupportedOrder(6)));
    }

    #[test]
    fn malformed_catalog_lines() {
        assert!(matches!(parse_catalog("1;2"), Err(Error::Catalog { line: 1, .. })));
        assert!(matches!(parse_catalog("# c\n1;3;[[[0,1],[1,0]]]"), Err(Error::Catalog { line: 2, .. })));
        assert!(matches!(parse_catalog("x;2;[[[0,1],[1,0]]]"), Err(Error::Catalog { .. })));
    }

    #[test]
    fn abelian_invariants_of_products() {
        let c = builtin_catalog();
        // C4 x C4 and C2^4
        assert_eq!(c.get(16, 2).unwrap().table.abelian_invariants(), vec![4, 4]);
        assert_eq!(c.get(16, 14).unwrap().table.abelian_invariants(), vec![2, 2, 2, 2]);
        assert_eq!(c.get(16, 5).unwrap().table.abelian_invariants(), vec![2, 8]);
    }
}
