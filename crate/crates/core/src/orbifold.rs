//! Quotient-side arithmetic for a non-free action: how the centralizer of
//! an involution permutes its fixed curves, the genus constraints coming
//! from free quotients of those curves, the age-1 orbifold Hodge numbers,
//! and fundamental groups of quotients of a simply connected cover.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::flag_subdivision;
use crate::group::{identify_table, GroupElement, IsoLabel, Subgroup};
use crate::invariants::{flag_context, invariant_h21_poly, invariant_report, HodgePair};
use crate::linalg::GaussianRational;
use crate::sections::{
    fixed_locus_on_torus, freeness_certificate, generic_invariant_section, lifts, CoordinateValue,
    MonomialAutomorphism, RootOfUnity, SubtorusComponent, TorusPoint,
};

/// Sum of the genera of the four fixed curves of the involution, from the
/// Riemann-Hurwitz relation for the branched cover of the quotient.
pub const FIXED_CURVE_GENUS_TOTAL: u64 = 4;

/// Fixed curves of an involution together with the action of its
/// centralizer on them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedCurveSystem {
    labels: Vec<String>,
    genera: Vec<Option<u64>>,
    /// Permutations of the label indices, one per centralizer element or
    /// generator.
    action: Vec<Vec<usize>>,
    centralizer_order: usize,
    kernel_order: usize,
}

impl FixedCurveSystem {
    pub fn new(labels: Vec<String>, action: Vec<Vec<usize>>, centralizer_order: usize, kernel_order: usize) -> Result<Self> {
        let n = labels.len();
        for p in &action {
            let image: BTreeSet<usize> = p.iter().copied().collect();
            if p.len() != n || image.len() != n || image.iter().any(|&i| i >= n) {
                return Err(Error::InvalidInput(format!("{p:?} is not a permutation of {n} labels")));
            }
        }
        if kernel_order == 0 || centralizer_order % kernel_order != 0 {
            return Err(Error::InvalidInput(format!(
                "kernel order {kernel_order} does not divide centralizer order {centralizer_order}"
            )));
        }
        Ok(Self { genera: vec![None; n], labels, action, centralizer_order, kernel_order })
    }

    /// The system for the positive-dimensional torus fixed components of
    /// `involution`, acted on by its centralizer in `group`.
    pub fn from_involution(involution: &MonomialAutomorphism, group: &Subgroup<MonomialAutomorphism>) -> Result<Self> {
        if involution.is_identity() || !involution.pow(2).is_identity() {
            return Err(Error::NotInvolution);
        }
        let components: Vec<SubtorusComponent> =
            fixed_locus_on_torus(involution)?.into_iter().filter(|c| c.dimension() > 0).collect();
        let centralizer = group.centralizer(involution)?;
        let samples = components.iter().map(sample_points).collect::<Result<Vec<_>>>()?;
        let mut action = Vec::new();
        let mut kernel = 0;
        for z in centralizer.elements() {
            let mut perm = Vec::with_capacity(components.len());
            let mut pointwise = true;
            for pts in &samples {
                let images = pts.iter().map(|p| z.apply(p)).collect::<Result<Vec<_>>>()?;
                pointwise &= &images == pts;
                let target = components
                    .iter()
                    .position(|c| contains_point(c, &images[0]))
                    .ok_or_else(|| Error::Invariant(format!("{z:?} does not preserve the fixed locus")))?;
                perm.push(target);
            }
            if pointwise {
                kernel += 1;
            }
            action.push(perm);
        }
        Self::new(components.iter().map(component_label).collect(), action, centralizer.order(), kernel)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn centralizer_order(&self) -> usize {
        self.centralizer_order
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel_order
    }

    pub fn genera(&self) -> &[Option<u64>] {
        &self.genera
    }

    pub fn with_genera(mut self, genera: &[u64]) -> Result<Self> {
        if genera.len() != self.labels.len() {
            return Err(Error::DimensionMismatch { expected: self.labels.len(), got: genera.len() });
        }
        self.genera = genera.iter().map(|&g| Some(g)).collect();
        Ok(self)
    }

    /// The label index reached from `i` by the permutation `k`.
    pub fn image(&self, k: usize, i: usize) -> usize {
        self.action[k][i]
    }
}

/// Label from the fixed coordinate values: `+` for 1, `-` for -1.
fn component_label(c: &SubtorusComponent) -> String {
    let signs: String = c
        .fixed_coordinates()
        .values()
        .map(|r| match r.exponent() {
            0 => "+".to_string(),
            4 => "-".to_string(),
            e => format!("[z^{e}]"),
        })
        .collect();
    format!("C{signs}")
}

/// Points of the component whose parameters run over the fourth roots of
/// unity.
fn sample_points(c: &SubtorusComponent) -> Result<Vec<TorusPoint>> {
    let d = c.dimension();
    let mut out = Vec::new();
    for k in 0..4usize.pow(d as u32) {
        let params: Vec<_> = (0..d).map(|j| RootOfUnity::new(2 * ((k >> (2 * j)) % 4) as i64)).collect();
        let p = c.point_at(&params);
        let coords = p
            .iter()
            .map(|r| r.to_gaussian().ok_or_else(|| Error::Unsupported("component outside Q(i)".into())))
            .collect::<Result<Vec<GaussianRational>>>()?;
        out.push(std::array::from_fn(|i| coords[i].clone()));
    }
    Ok(out)
}

fn contains_point(c: &SubtorusComponent, p: &TorusPoint) -> bool {
    c.coordinates().iter().zip(p).all(|(coord, x)| match coord {
        CoordinateValue::Fixed(r) => r.to_gaussian().as_ref() == Some(x),
        CoordinateValue::Free { .. } => true,
    })
}

/// One component of the quotient of the fixed curves: an orbit of labels
/// and the order of the group acting on each member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientComponent {
    pub orbit: Vec<usize>,
    pub stabilizer_order: usize,
}

pub fn quotient_component_structure(sys: &FixedCurveSystem) -> Result<Vec<QuotientComponent>> {
    let effective = sys.centralizer_order / sys.kernel_order;
    let n = sys.labels.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            for p in &sys.action {
                let y = p[orbit[i]];
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        if effective % orbit.len() != 0 {
            return Err(Error::Invariant(format!(
                "orbit of size {} under an effective group of order {effective}",
                orbit.len()
            )));
        }
        orbit.sort_unstable();
        out.push(QuotientComponent { stabilizer_order: effective / orbit.len(), orbit });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientGenus {
    #[serde(serialize_with = "ratio")]
    pub value: Rational64,
    pub integral: bool,
}

fn ratio<S: serde::Serializer>(v: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Genus of the quotient of a genus-`genus` curve by a free action of a
/// group of order `n`.
pub fn riemann_hurwitz_free(genus: i64, n: i64) -> Result<QuotientGenus> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("group order {n}")));
    }
    let value = Rational64::new(genus - 1, n) + 1;
    Ok(QuotientGenus { value, integral: value.is_integer() })
}

/// All genus assignments for the fixed curves with the given total such
/// that curves in one orbit share a genus and every free quotient has an
/// integral genus.
pub fn solve_genus_constraints(structure: &[QuotientComponent], total: u64) -> Result<Vec<Vec<u64>>> {
    let n = structure.iter().map(|c| c.orbit.len()).sum::<usize>();
    let mut solutions = Vec::new();
    let mut per_orbit = vec![0u64; structure.len()];
    search(structure, total, 0, &mut per_orbit, &mut solutions)?;
    let expanded: Vec<Vec<u64>> = solutions
        .into_iter()
        .map(|gs: Vec<u64>| {
            let mut v = vec![0; n];
            for (c, g) in structure.iter().zip(&gs) {
                for &i in &c.orbit {
                    v[i] = *g;
                }
            }
            v
        })
        .collect();
    if expanded.is_empty() {
        return Err(Error::Infeasible(format!("no genus assignment with total {total}")));
    }
    Ok(expanded)
}

fn search(
    structure: &[QuotientComponent],
    remaining: u64,
    k: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) -> Result<()> {
    if k == structure.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return Ok(());
    }
    let size = structure[k].orbit.len() as u64;
    for g in 0..=remaining / size {
        if riemann_hurwitz_free(g as i64, structure[k].stabilizer_order as i64)?.integral {
            current[k] = g;
            search(structure, remaining - g * size, k + 1, current, out)?;
        }
    }
    Ok(())
}

/// Genera of the quotient components for a genus assignment of the curves.
pub fn quotient_genera(structure: &[QuotientComponent], genera: &[u64]) -> Result<Vec<QuotientGenus>> {
    structure
        .iter()
        .map(|c| riemann_hurwitz_free(genera[c.orbit[0]] as i64, c.stabilizer_order as i64))
        .collect()
}

/// Fixed locus of one conjugacy class of elements, already divided by the
/// centralizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedSector {
    pub age: u32,
    pub component_genera: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbifoldHodge {
    pub h11: i64,
    pub h12: i64,
    pub invariant: HodgePair,
    pub twisted_components: i64,
    pub twisted_genus_sum: i64,
}

impl OrbifoldHodge {
    pub fn pair(&self) -> HodgePair {
        HodgePair { h11: self.h11, h12: self.h12 }
    }
}

/// Orbifold Hodge numbers when at most one twisted sector is present and
/// it has age 1 with curve components.
pub fn orbifold_hodge(invariant: HodgePair, sectors: &[TwistedSector]) -> Result<OrbifoldHodge> {
    let (components, genus_sum) = match sectors {
        [] => (0, 0),
        [s] if s.age == 1 => (s.component_genera.len() as i64, s.component_genera.iter().sum::<u64>() as i64),
        [s] => return Err(Error::Unsupported(format!("twisted sector of age {}", s.age))),
        _ => return Err(Error::Unsupported(format!("{} twisted sectors", sectors.len()))),
    };
    Ok(OrbifoldHodge {
        h11: invariant.h11 + components,
        h12: invariant.h12 + genus_sum,
        invariant,
        twisted_components: components,
        twisted_genus_sum: genus_sum,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FundamentalGroup {
    pub label: IsoLabel,
    pub divisor_order: usize,
    /// The subgroup generated by the given elements was already normal.
    pub generated_is_normal: bool,
}

/// `gq / <fixed>` for a group acting on a simply connected space, where
/// `fixed` lists the elements with fixed points.
pub fn quotient_fundamental_group<T: GroupElement>(gq: &Subgroup<T>, fixed: &[T]) -> Result<FundamentalGroup> {
    if fixed.iter().any(|x| !gq.contains(x)) {
        return Err(Error::NotMember);
    }
    let generated = Subgroup::generate(fixed);
    let generated_is_normal = generated.is_normal_in(gq);
    let normal = gq.normal_closure(fixed)?;
    let idx: Vec<usize> = normal
        .elements()
        .iter()
        .map(|x| gq.index_of(x).ok_or(Error::NotMember))
        .collect::<Result<_>>()?;
    let quotient = gq.cayley_table().quotient(&idx)?;
    Ok(FundamentalGroup { label: identify_table(&quotient)?, divisor_order: normal.order(), generated_is_normal })
}

/// The full chain for the quotient of the generic invariant section by the
/// untwisted lift group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorOrbifoldReport {
    pub fixed_point_elements: Vec<MonomialAutomorphism>,
    pub system: FixedCurveSystem,
    pub structure: Vec<QuotientComponent>,
    pub genus_solutions: Vec<Vec<u64>>,
    pub quotient_genera: Vec<QuotientGenus>,
    pub hodge: OrbifoldHodge,
    pub fundamental_group: FundamentalGroup,
}

pub fn mirror_orbifold_report() -> Result<MirrorOrbifoldReport> {
    let group = lifts::l1();
    let verdicts = freeness_certificate(&generic_invariant_section(), &group, &flag_subdivision())?;
    let fixed: Vec<MonomialAutomorphism> = verdicts.iter().filter(|v| !v.free).map(|v| v.element.clone()).collect();
    let first = fixed.first().ok_or_else(|| Error::Invariant("action is free".into()))?;
    for x in &fixed {
        if !group.are_conjugate(first, x)? {
            return Err(Error::Unsupported("fixed-point elements form several conjugacy classes".into()));
        }
    }
    let involution = fixed
        .iter()
        .find(|x| x.pow(2).is_identity() && fixed_locus_on_torus(x).is_ok_and(|c| c.iter().any(|c| c.dimension() > 0)))
        .ok_or_else(|| Error::Unsupported("no involution with fixed surfaces".into()))?;
    let system = FixedCurveSystem::from_involution(involution, &group)?;
    let structure = quotient_component_structure(&system)?;
    let genus_solutions = solve_genus_constraints(&structure, FIXED_CURVE_GENUS_TOTAL)?;
    let [genera] = genus_solutions.as_slice() else {
        return Err(Error::Infeasible(format!("{} genus assignments", genus_solutions.len())));
    };
    let system = system.with_genera(genera)?;
    let quotient_genera = quotient_genera(&structure, genera)?;
    let component_genera = quotient_genera
        .iter()
        .map(|q| if q.integral { Ok(q.value.to_integer() as u64) } else { Err(Error::Invariant("non-integral genus".into())) })
        .collect::<Result<Vec<_>>>()?;

    // Fixed surfaces of the involution on the torus meet the threefold in
    // curves, so the normal eigenvalues are (-1, -1) and the age is 1.
    let surface_dim = fixed_locus_on_torus(involution)?.iter().map(|c| c.dimension()).max().unwrap_or(0);
    let age = (3 - (surface_dim - 1)) as u32 / 2;

    let (seq, kernel) = flag_context()?;
    let lattice = Subgroup::generate(&group.generators().iter().map(|x| x.lattice_part().clone()).collect::<Vec<_>>());
    let h11 = invariant_report(&lattice, &seq, &kernel)?.dims.pic_y;
    let invariant = HodgePair::new(h11, invariant_h21_poly(&group)?)?;
    let hodge = orbifold_hodge(invariant, &[TwistedSector { age, component_genera }])?;
    let fundamental_group = quotient_fundamental_group(&group, &fixed)?;
    Ok(MirrorOrbifoldReport { fixed_point_elements: fixed, system, structure, genus_solutions, quotient_genera, hodge, fundamental_group })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("C{i}")).collect()
    }

    fn h1_system() -> FixedCurveSystem {
        FixedCurveSystem::from_involution(&lifts::h1(), &lifts::l1()).unwrap()
    }

    #[test]
    fn derived_system_for_h1() {
        let sys = h1_system();
        assert_eq!(sys.labels(), ["C++", "C+-", "C-+", "C--"]);
        assert_eq!(sys.centralizer_order(), 8);
        assert_eq!(sys.kernel_order(), 2);
        let g2 = sys
            .action()
            .iter()
            .zip(lifts::l1().centralizer(&lifts::h1()).unwrap().elements())
            .find(|(_, z)| **z == lifts::g().pow(2))
            .map(|(p, _)| p.clone())
            .unwrap();
        // g^2 fixes C++ and C-- and swaps the mixed pair.
        assert_eq!(g2, vec![0, 2, 1, 3]);
    }

    #[test]
    fn component_structure() {
        let s = quotient_component_structure(&h1_system()).unwrap();
        let mut stabs: Vec<usize> = s.iter().map(|c| c.stabilizer_order).collect();
        stabs.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(stabs, vec![4, 4, 2]);

        let trivial = FixedCurveSystem::new(labels(4), vec![vec![0, 1, 2, 3]], 1, 1).unwrap();
        let s = quotient_component_structure(&trivial).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|c| c.stabilizer_order == 1));

        let swap = FixedCurveSystem::new(labels(4), vec![vec![1, 0, 3, 2]], 2, 1).unwrap();
        assert_eq!(quotient_component_structure(&swap).unwrap().len(), 2);
    }

    #[test]
    fn inconsistent_input_rejected() {
        let cycle = FixedCurveSystem::new(labels(3), vec![vec![1, 2, 0]], 2, 1).unwrap();
        assert!(quotient_component_structure(&cycle).is_err());
        assert!(FixedCurveSystem::new(labels(2), vec![vec![0, 0]], 2, 1).is_err());
        assert!(FixedCurveSystem::new(labels(2), vec![], 3, 2).is_err());
    }

    #[test]
    fn riemann_hurwitz_examples() {
        assert_eq!(riemann_hurwitz_free(1, 4).unwrap().value, Rational64::from(1));
        assert_eq!(riemann_hurwitz_free(5, 4).unwrap().value, Rational64::from(2));
        let q = riemann_hurwitz_free(2, 4).unwrap();
        assert!(!q.integral);
        assert_eq!(q.value, Rational64::new(5, 4));
        assert!(riemann_hurwitz_free(1, 0).is_err());
    }

    /// The congruences written out directly: the two fixed curves are
    /// 1 mod 4 and the swapped pair has equal odd genus.
    fn by_congruences(total: u64) -> BTreeSet<[u64; 4]> {
        let mut out = BTreeSet::new();
        for a in 0..=total {
            for b in 0..=total - a {
                for c in 0..=total - a - b {
                    let d = total - a - b - c;
                    if a % 4 == 1 && d % 4 == 1 && b == c && b % 2 == 1 {
                        out.insert([a, b, c, d]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn genus_constraints() {
        let s = quotient_component_structure(&h1_system()).unwrap();
        let sols = solve_genus_constraints(&s, 4).unwrap();
        assert_eq!(sols, vec![vec![1, 1, 1, 1]]);
        let eight = solve_genus_constraints(&s, 8).unwrap();
        assert!(eight.len() > 1);
        let as_set: BTreeSet<[u64; 4]> = eight.iter().map(|v| [v[0], v[1], v[2], v[3]]).collect();
        assert_eq!(as_set, by_congruences(8));
        assert!(matches!(solve_genus_constraints(&s, 3), Err(Error::Infeasible(_))));
        let q = quotient_genera(&s, &sols[0]).unwrap();
        assert!(q.iter().all(|g| g.integral && g.value == Rational64::from(1)));
    }

    #[test]
    fn hodge_formula() {
        let inv = HodgePair { h11: 5, h12: 1 };
        let paper = orbifold_hodge(inv, &[TwistedSector { age: 1, component_genera: vec![1, 1, 1] }]).unwrap();
        assert_eq!(paper.pair(), HodgePair { h11: 8, h12: 4 });
        assert_eq!(paper.h11 - paper.h12, inv.h11 - inv.h12 + paper.twisted_components - paper.twisted_genus_sum);
        assert_eq!(orbifold_hodge(inv, &[]).unwrap().pair(), inv);
        let rational = orbifold_hodge(inv, &[TwistedSector { age: 1, component_genera: vec![0, 0, 0] }]).unwrap();
        assert_eq!(rational.pair(), HodgePair { h11: 8, h12: 1 });
        let sector = TwistedSector { age: 1, component_genera: vec![1] };
        assert!(matches!(orbifold_hodge(inv, &[sector.clone(), sector]), Err(Error::Unsupported(_))));
        let aged = TwistedSector { age: 2, component_genera: vec![1] };
        assert!(matches!(orbifold_hodge(inv, &[aged]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn fundamental_groups() {
        let l1 = lifts::l1();
        let h1 = lifts::h1();
        let g4h1 = lifts::g().pow(4).mul(&h1);
        let pi = quotient_fundamental_group(&l1, &[h1.clone(), g4h1]).unwrap();
        assert_eq!((pi.label.order, pi.label.gap_id), (4, 1));
        assert!(pi.generated_is_normal);
        let cyclic = Subgroup::generate(&[lifts::g()]);
        let pi = quotient_fundamental_group(&cyclic, &[]).unwrap();
        assert_eq!((pi.label.order, pi.label.gap_id), (8, 1));
        let all = quotient_fundamental_group(&l1, l1.elements()).unwrap();
        assert_eq!(all.label.order, 1);
        assert!(matches!(quotient_fundamental_group(&cyclic, &[h1]), Err(Error::NotMember)));
    }

    #[test]
    fn full_chain() {
        let r = mirror_orbifold_report().unwrap();
        assert_eq!(r.fixed_point_elements.len(), 2);
        assert_eq!(r.structure.len(), 3);
        assert_eq!(r.hodge.invariant, HodgePair { h11: 5, h12: 1 });
        assert_eq!(r.hodge.pair(), HodgePair { h11: 8, h12: 4 });
        assert_eq!(r.hodge.twisted_components as usize, r.structure.len());
        assert_eq!(r.fundamental_group.label.order, 4);
    }
}
