//! Invariant Picard ranks for subgroups of the symmetry group of the flag
//! fan, and Hodge numbers of the resulting quotients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{burnside_orbit_count, flag_subdivision, orbits, Fan};
use crate::group::{generate_b4, identify, subgroups_up_to_conjugacy, GroupElement, IsoLabel, SignedPerm, Subgroup};
use crate::linalg::{invariant_dimension, GaussianMatrix, IntMatrix};
use crate::polytope::{LatticePolytope, Point};
use crate::sections::{section_action, ElementVerdict, MonomialAutomorphism};

/// Euler characteristic of the smooth anticanonical hypersurface in the flag
/// resolution. [`euler_characteristic_check`] rederives it.
pub const EULER_CHARACTERISTIC: i64 = 128;

/// `0 -> Q^4 -> Q^rays -> Pic -> 0` for a complete simplicial fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSequence {
    rays: Vec<Point>,
    /// One row per ray: `m -> <v_ray, m>`.
    alpha: IntMatrix,
    picard_dim: usize,
}

impl DivisorSequence {
    pub fn rays(&self) -> &[Point] {
        &self.rays
    }

    pub fn alpha(&self) -> &IntMatrix {
        &self.alpha
    }

    pub fn picard_dim(&self) -> usize {
        self.picard_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.alpha.cols()
    }
}

pub fn build_divisor_sequence(f: &Fan) -> Result<DivisorSequence> {
    let rays = f.rays().to_vec();
    if rays.len() < 4 {
        return Err(Error::InvalidInput(format!("only {} rays", rays.len())));
    }
    let alpha = IntMatrix::from_i64_rows(&rays)?;
    let rank = alpha.to_rational().rank();
    if rank != alpha.cols() {
        return Err(Error::Invariant(format!("ray map has rank {rank}, not {}", alpha.cols())));
    }
    Ok(DivisorSequence { picard_dim: rays.len() - rank, rays, alpha })
}

/// Rays lying in the relative interior of a facet of `p`.
pub fn kernel_ray_classes(f: &Fan, p: &LatticePolytope) -> Vec<Point> {
    f.rays()
        .iter()
        .filter(|r| p.contains(r) && p.carrier(r).is_some_and(|face| face.dim + 1 == p.dim()))
        .cloned()
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InvariantDims {
    pub q4: i64,
    pub q80: i64,
    pub pic: i64,
    pub ker: i64,
    pub pic_y: i64,
}

impl InvariantDims {
    pub fn as_tuple(&self) -> (i64, i64, i64, i64, i64) {
        (self.q4, self.q80, self.pic, self.ker, self.pic_y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub order: usize,
    pub generators: Vec<SignedPerm>,
    pub dims: InvariantDims,
    pub label: Option<IsoLabel>,
}

impl InvariantReport {
    pub fn gap_id(&self) -> Option<usize> {
        self.label.as_ref().map(|l| l.gap_id)
    }
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Invariant("dimension overflow".into()))
}

/// Orbit count of `k` on `points`, cross-checked against the Burnside count.
fn orbit_count(points: &[Point], elements: &[SignedPerm]) -> Result<i64> {
    let n = orbits(points, elements, |w, v| w.apply(v))?.len();
    let b = burnside_orbit_count(points, elements, |w, v| w.apply(v))?;
    if n != b {
        return Err(Error::Invariant(format!("{n} orbits but Burnside count {b}")));
    }
    Ok(n as i64)
}

pub fn invariant_report(k: &Subgroup<SignedPerm>, seq: &DivisorSequence, kernel_rays: &[Point]) -> Result<InvariantReport> {
    let mats: Vec<IntMatrix> = k.elements().iter().map(SignedPerm::to_int_matrix).collect();
    let q4 = invariant_dimension(&mats)?;
    if !q4.is_integer() {
        return Err(Error::Invariant(format!("trace average {q4} is not an integer")));
    }
    let q4 = to_i64(&q4.to_integer())?;
    let q80 = orbit_count(seq.rays(), k.elements())?;
    let ker = orbit_count(kernel_rays, k.elements())?;
    let pic = q80 - q4;
    let label = match identify(k) {
        Ok(l) => Some(l),
        Err(Error::UnsupportedOrder(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(InvariantReport {
        order: k.order(),
        generators: k.generators().to_vec(),
        dims: InvariantDims { q4, q80, pic, ker, pic_y: pic - ker },
        label,
    })
}

/// The divisor sequence and facet-interior rays of the flag resolution.
pub fn flag_context() -> Result<(DivisorSequence, Vec<Point>)> {
    let fan = flag_subdivision();
    let seq = build_divisor_sequence(&fan)?;
    let kernel = kernel_ray_classes(&fan, &LatticePolytope::hypercube(4));
    Ok((seq, kernel))
}

/// One report per conjugacy class of order-16 subgroups of B4, in canonical
/// class order.
pub fn reproduce_table() -> Result<Vec<InvariantReport>> {
    let (seq, kernel) = flag_context()?;
    let b4 = generate_b4();
    let classes = subgroups_up_to_conjugacy(&b4, 16)?;
    classes.par_iter().map(|c| invariant_report(&c.representative, &seq, &kernel)).collect()
}

/// Reference rows `(gap id, q4, q80, pic, ker, picY)` for the 37 classes.
pub const REFERENCE_TABLE: [(usize, [i64; 5]); 37] = [
    (14, [0, 15, 15, 4, 11]),
    (14, [0, 15, 15, 2, 13]),
    (3, [0, 9, 9, 2, 7]),
    (11, [0, 10, 10, 2, 8]),
    (3, [0, 9, 9, 2, 7]),
    (2, [0, 8, 8, 2, 6]),
    (11, [0, 10, 10, 2, 8]),
    (3, [0, 9, 9, 1, 8]),
    (3, [0, 10, 10, 2, 8]),
    (11, [0, 12, 12, 2, 10]),
    (10, [0, 11, 11, 3, 8]),
    (3, [0, 9, 9, 2, 7]),
    (10, [0, 11, 11, 2, 9]),
    (13, [0, 8, 8, 1, 7]),
    (11, [0, 10, 10, 1, 9]),
    (11, [0, 11, 11, 3, 8]),
    (14, [0, 15, 15, 3, 12]),
    (6, [0, 6, 6, 1, 5]),
    (11, [0, 12, 12, 3, 9]),
    (11, [0, 14, 14, 3, 11]),
    (3, [0, 10, 10, 2, 8]),
    (11, [0, 12, 12, 2, 10]),
    (4, [0, 8, 8, 2, 6]),
    (11, [0, 11, 11, 2, 9]),
    (11, [0, 12, 12, 3, 9]),
    (11, [0, 12, 12, 1, 11]),
    (8, [0, 7, 7, 1, 6]),
    (7, [0, 9, 9, 1, 8]),
    (3, [0, 10, 10, 1, 9]),
    (11, [0, 13, 13, 3, 10]),
    (11, [0, 11, 11, 3, 8]),
    (11, [0, 13, 13, 3, 10]),
    (11, [1, 17, 16, 4, 12]),
    (11, [1, 17, 16, 3, 13]),
    (11, [0, 13, 13, 2, 11]),
    (11, [0, 11, 11, 2, 9]),
    (11, [0, 13, 13, 2, 11]),
];

pub type TableRow = (Option<usize>, [i64; 5]);

/// Multiset comparison of computed rows against [`REFERENCE_TABLE`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableComparison {
    pub missing: Vec<TableRow>,
    pub unexpected: Vec<TableRow>,
}

impl TableComparison {
    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

pub fn compare_with_reference(reports: &[InvariantReport]) -> TableComparison {
    compare_rows(reports.iter().map(|r| {
        let d = r.dims;
        (r.gap_id(), [d.q4, d.q80, d.pic, d.ker, d.pic_y])
    }))
}

pub fn compare_rows(rows: impl IntoIterator<Item = TableRow>) -> TableComparison {
    let mut counts: BTreeMap<TableRow, i64> = BTreeMap::new();
    for row in rows {
        *counts.entry(row).or_default() += 1;
    }
    for (id, dims) in REFERENCE_TABLE {
        *counts.entry((Some(id), dims)).or_default() -= 1;
    }
    let mut missing = Vec::new();
    let mut unexpected = Vec::new();
    for (row, c) in counts {
        for _ in 0..c.unsigned_abs() {
            if c > 0 {
                unexpected.push(row);
            } else {
                missing.push(row);
            }
        }
    }
    TableComparison { missing, unexpected }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HodgePair {
    pub h11: i64,
    pub h12: i64,
}

impl HodgePair {
    pub fn new(h11: i64, h12: i64) -> Result<Self> {
        if h11 < 0 || h12 < 0 {
            return Err(Error::Invariant(format!("negative Hodge number in ({h11},{h12})")));
        }
        Ok(Self { h11, h12 })
    }

    pub fn euler(&self) -> i64 {
        2 * (self.h11 - self.h12)
    }

    pub fn height(&self) -> i64 {
        self.h11 + self.h12
    }

    pub fn mirror(&self) -> Self {
        Self { h11: self.h12, h12: self.h11 }
    }
}

/// Dimension of the space of sections fixed by every generator.
fn invariant_section_dim(k: &Subgroup<MonomialAutomorphism>) -> Result<usize> {
    let id = GaussianMatrix::identity(9);
    let mut stacked: Option<GaussianMatrix> = None;
    for x in k.generators() {
        let m = section_action(x).sub(&id)?;
        stacked = Some(match stacked {
            None => m,
            Some(s) => s.stack(&m)?,
        });
    }
    Ok(stacked.map_or(9, |s| s.kernel().dim()))
}

/// Invariant polynomial deformations: invariant sections, minus scaling,
/// minus the invariant part of the torus.
pub fn invariant_h21_poly(k: &Subgroup<MonomialAutomorphism>) -> Result<i64> {
    let defect = LatticePolytope::cross_polytope(4).deformation_defect()?;
    if defect != 0 {
        return Err(Error::NonzeroDefect(defect));
    }
    let sections = invariant_section_dim(k)? as i64;
    let mats: Vec<IntMatrix> = k.elements().iter().map(|x| x.lattice_part().to_int_matrix()).collect();
    let q4 = invariant_dimension(&mats)?;
    if !q4.is_integer() {
        return Err(Error::Invariant(format!("trace average {q4} is not an integer")));
    }
    Ok(sections - 1 - to_i64(&q4.to_integer())?)
}

/// Hodge pair of the quotient by a group acting freely: `h11` is the
/// invariant Picard rank and `h12` follows from `chi / |k|`.
pub fn free_quotient_hodge(
    k: &Subgroup<MonomialAutomorphism>,
    verdicts: &[ElementVerdict],
    report: &InvariantReport,
) -> Result<HodgePair> {
    for x in k.elements().iter().filter(|x| !x.is_identity()) {
        let v = verdicts
            .iter()
            .find(|v| &v.element == x)
            .ok_or_else(|| Error::NotFree(format!("no certificate for {x:?}")))?;
        if !v.free {
            return Err(Error::NotFree(format!("{x:?} has fixed points")));
        }
    }
    let denom = 2 * k.order() as i64;
    if EULER_CHARACTERISTIC % denom != 0 {
        return Err(Error::Invariant(format!("{EULER_CHARACTERISTIC} is not divisible by {denom}")));
    }
    HodgePair::new(report.dims.pic_y, report.dims.pic_y - EULER_CHARACTERISTIC / denom)
}

/// Rederives [`EULER_CHARACTERISTIC`] as `2 * (h11 - h21)` of the cover
/// itself, from the trivial-group Picard rank and polynomial deformations.
pub fn euler_characteristic_check() -> Result<i64> {
    let (seq, kernel) = flag_context()?;
    let h11 = invariant_report(&Subgroup::trivial(), &seq, &kernel)?.dims.pic_y;
    let h21 = invariant_h21_poly(&Subgroup::trivial())?;
    let chi = HodgePair::new(h11, h21)?.euler();
    if chi != EULER_CHARACTERISTIC {
        return Err(Error::Invariant(format!("Euler characteristic {chi}, expected {EULER_CHARACTERISTIC}")));
    }
    Ok(chi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorTarget {
    pub name: &'static str,
    pub hodge: HodgePair,
}

/// Known Hodge pairs of quotients on the other side of the mirror.
pub fn mirror_targets() -> Vec<MirrorTarget> {
    let t = |name, h11, h12| MirrorTarget { name, hodge: HodgePair { h11, h12 } };
    vec![
        t("Z8 quotient of the bidegree-(2,2,2,2) threefold", 1, 9),
        t("Z4 quotient of the bidegree-(2,2,2,2) threefold", 2, 18),
        t("Z2 quotient of the bidegree-(2,2,2,2) threefold", 4, 36),
        t("maximal admissible quotient", 1, 5),
        t("Z4 quotient of a product of quartic del Pezzo surfaces", 4, 8),
    ]
}

/// The mirror target for the free quotient by the cyclic group of the
/// given order.
pub fn cyclic_mirror_target(order: usize) -> Option<HodgePair> {
    let name = format!("Z{order} quotient");
    mirror_targets().into_iter().find(|t| t.name.starts_with(&name)).map(|t| t.hodge)
}
