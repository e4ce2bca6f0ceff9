//! Rational polyhedral cones and fans, including the flag subdivision of
//! the 4-cube's face fan and its regularity certificate.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::SignedPerm;
use crate::linalg::{rat, IntMatrix};
use crate::polytope::{dot, primitive, LatticePolytope, Point};

/// A strictly convex cone, identified by its sorted primitive generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cone {
    generators: Vec<Point>,
}

impl Cone {
    /// Generators are scaled to primitive vectors and sorted. The empty list
    /// gives the zero cone.
    pub fn new(generators: Vec<Point>) -> Result<Self> {
        if generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidInput("zero generator".into()));
        }
        let gens: BTreeSet<Point> = generators.iter().map(|g| primitive(g)).collect();
        let cone = Self { generators: gens.into_iter().collect() };
        if !cone.strict_convexity_witness() {
            return Err(Error::NotStrictlyConvex);
        }
        Ok(cone)
    }

    /// Independent generators are always pointed; otherwise the sum of the
    /// generators must pair positively with each of them.
    fn strict_convexity_witness(&self) -> bool {
        if self.generators.len() <= 1 || self.is_simplicial() {
            return true;
        }
        let n = self.generators[0].len();
        let sum: Vec<i64> = (0..n).map(|i| self.generators.iter().map(|g| g[i]).sum()).collect();
        self.generators.iter().all(|g| dot(&sum, g) > 0)
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        if self.generators.is_empty() {
            return 0;
        }
        IntMatrix::from_i64_rows(&self.generators).map(|m| m.to_rational().rank()).unwrap_or(0)
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    /// Simplicial with generators extending to a lattice basis.
    pub fn is_smooth(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        if self.generators.is_empty() {
            return true;
        }
        IntMatrix::from_i64_rows(&self.generators)
            .map(|m| m.maximal_minor_gcd() == BigInt::from(1))
            .unwrap_or(false)
    }

    /// Determinant of the generator matrix of a full-dimensional simplicial cone.
    pub fn determinant(&self) -> Result<BigInt> {
        IntMatrix::from_i64_rows(&self.generators)?.determinant()
    }

    /// Coordinates of `x` in the generator basis, if `x` is in their span.
    fn coordinates(&self, x: &[i64]) -> Option<Vec<BigRational>> {
        if self.generators.is_empty() {
            return x.iter().all(|&v| v == 0).then(Vec::new);
        }
        let m = IntMatrix::from_i64_rows(&self.generators).ok()?.to_rational().transpose();
        let b: Vec<BigRational> = x.iter().map(|&v| rat(v)).collect();
        let sol = m.solve(&b).ok()??;
        // Only meaningful for independent generators.
        self.is_simplicial().then_some(sol)
    }

    /// Exact membership test for simplicial cones.
    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        if !self.is_simplicial() {
            return Err(Error::Unsupported("membership for non-simplicial cones".into()));
        }
        Ok(self.coordinates(x).is_some_and(|c| c.iter().all(|v| !v.is_negative())))
    }

    pub fn image(&self, w: &SignedPerm) -> Self {
        let mut gens: Vec<Point> = self.generators.iter().map(|g| w.apply(g)).collect();
        gens.sort();
        Self { generators: gens }
    }

    /// Cone spanned by the generators shared with `other`.
    pub fn shared_face(&self, other: &Cone) -> Cone {
        let gens = self.generators.iter().filter(|g| other.generators.contains(g)).cloned().collect();
        Cone { generators: gens }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan {
    cones: Vec<Cone>,
    rays: Vec<Point>,
}

/// A chain of face barycenters, from the largest proper face down to a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Flag {
    pub centers: Vec<Point>,
}

/// A codimension-one face shared by two maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub cones: (usize, usize),
    pub shared: Vec<Point>,
}

impl Fan {
    pub fn new(cones: Vec<Cone>) -> Result<Self> {
        let n = cones.first().and_then(|c| c.generators.first()).map(Vec::len);
        if cones.iter().flat_map(|c| &c.generators).any(|g| Some(g.len()) != n) {
            return Err(Error::InvalidInput("cones live in different lattices".into()));
        }
        let mut cones = cones;
        cones.sort();
        cones.dedup();
        let rays: BTreeSet<Point> = cones.iter().flat_map(|c| c.generators.iter().cloned()).collect();
        Ok(Self { cones, rays: rays.into_iter().collect() })
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn rays(&self) -> &[Point] {
        &self.rays
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cones.binary_search(c).is_ok()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rays.first().map_or(0, Vec::len)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.par_iter().all(Cone::is_simplicial)
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.par_iter().all(Cone::is_smooth)
    }

    /// Walls of a fan of full-dimensional simplicial cones, with the number
    /// of maximal cones containing each codimension-one face.
    pub fn walls(&self) -> Result<(Vec<Wall>, usize)> {
        let d = self.ambient_dim();
        let mut by_facet: BTreeMap<Vec<Point>, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.cones.iter().enumerate() {
            if c.generators.len() != d || !c.is_simplicial() {
                return Err(Error::Unsupported("walls need full-dimensional simplicial cones".into()));
            }
            for skip in 0..d {
                let facet: Vec<Point> =
                    c.generators.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, g)| g.clone()).collect();
                by_facet.entry(facet).or_default().push(i);
            }
        }
        let mut walls = Vec::new();
        let mut boundary = 0;
        for (shared, cs) in by_facet {
            match cs.as_slice() {
                [a, b] => walls.push(Wall { cones: (*a, *b), shared }),
                [_] => boundary += 1,
                _ => return Err(Error::Invariant(format!("{} cones share one facet", cs.len()))),
            }
        }
        Ok((walls, boundary))
    }

    /// Every facet of every maximal cone lies in exactly two maximal cones,
    /// which sit on opposite sides of it.
    pub fn is_closed_pseudomanifold(&self) -> Result<bool> {
        let (walls, boundary) = self.walls()?;
        if boundary > 0 {
            return Ok(false);
        }
        for w in &walls {
            let a = self.other_generator(w.cones.0, &w.shared);
            let b = self.other_generator(w.cones.1, &w.shared);
            let normal = hyperplane_normal(&w.shared)?;
            if dot(&normal, &a).signum() * dot(&normal, &b).signum() >= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn other_generator(&self, cone: usize, shared: &[Point]) -> Point {
        self.cones[cone].generators.iter().find(|g| !shared.contains(g)).expect("simplicial wall").clone()
    }

    /// Sum of `|det|` over maximal cones.
    pub fn determinant_volume(&self) -> Result<BigInt> {
        self.cones.iter().map(|c| c.determinant().map(|d| d.abs())).sum()
    }
}

/// Normal of the hyperplane spanned by `d - 1` vectors in `Z^d`.
fn hyperplane_normal(vs: &[Point]) -> Result<Point> {
    let k = IntMatrix::from_i64_rows(vs)?.to_rational().kernel();
    if k.dim() != 1 {
        return Err(Error::InvalidInput("wall generators are dependent".into()));
    }
    let v = &k.basis()[0];
    let den = v.iter().fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    Ok(v.iter()
        .map(|x| {
            let y = (x * BigRational::from_integer(den.clone())).to_integer();
            i64::try_from(y).expect("small normal")
        })
        .collect())
}

/// Fan over the facets of a polytope with the origin in its interior.
pub fn face_fan(p: &LatticePolytope) -> Result<Fan> {
    if !p.has_origin_in_interior() {
        return Err(Error::OriginNotInterior);
    }
    let lattice = p.face_lattice();
    let facets = lattice.last().ok_or_else(|| Error::InvalidInput("polytope has no facets".into()))?;
    let cones = facets
        .iter()
        .map(|f| Cone::new(f.vertices.iter().map(|&v| p.vertices()[v].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    Fan::new(cones)
}

/// All maximal chains of proper faces, each face replaced by its
/// barycenter scaled to a primitive lattice vector.
pub fn flags(p: &LatticePolytope) -> Vec<Flag> {
    let lattice = p.face_lattice();
    let center = |f: &crate::polytope::Face| -> Point {
        let n = p.dim();
        let sum: Vec<i64> = (0..n).map(|i| f.vertices.iter().map(|&v| p.vertices()[v][i]).sum()).collect();
        primitive(&sum)
    };
    let top = p.dim() - 1;
    let mut out = Vec::new();
    let mut chain: Vec<&crate::polytope::Face> = Vec::new();
    fn rec<'a>(
        level: usize,
        lattice: &'a [Vec<crate::polytope::Face>],
        chain: &mut Vec<&'a crate::polytope::Face>,
        out: &mut Vec<Vec<&'a crate::polytope::Face>>,
    ) {
        for f in &lattice[level] {
            if let Some(parent) = chain.last() {
                if !f.vertices.iter().all(|v| parent.vertices.contains(v)) {
                    continue;
                }
            }
            chain.push(f);
            if level == 0 {
                out.push(chain.clone());
            } else {
                rec(level - 1, lattice, chain, out);
            }
            chain.pop();
        }
    }
    let mut chains = Vec::new();
    rec(top, &lattice, &mut chain, &mut chains);
    for c in chains {
        out.push(Flag { centers: c.iter().map(|f| center(f)).collect() });
    }
    out.sort();
    out
}

/// Fan whose maximal cones are spanned by the flags of `p`.
pub fn flag_subdivision_of(p: &LatticePolytope) -> Result<Fan> {
    if !p.has_origin_in_interior() {
        return Err(Error::OriginNotInterior);
    }
    let cones = flags(p).into_iter().map(|f| Cone::new(f.centers)).collect::<Result<Vec<_>>>()?;
    Fan::new(cones)
}

/// The 384-cone flag subdivision of the face fan of `[-1,1]^4`.
pub fn flag_subdivision() -> Fan {
    flag_subdivision_of(&LatticePolytope::hypercube(4)).expect("hypercube contains the origin")
}

/// Completeness evidence for a fan refining the face fan of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeAccounting {
    pub cone_volume: BigInt,
    pub polytope_volume: BigInt,
    /// Every maximal cone's generators lie on a single facet of `p`.
    pub cones_in_facets: bool,
}

impl VolumeAccounting {
    pub fn is_complete(&self) -> bool {
        self.cones_in_facets && self.cone_volume == self.polytope_volume
    }
}

/// Compares `sum |det|` over maximal cones with the normalized volume of `p`.
pub fn volume_accounting(fan: &Fan, p: &LatticePolytope) -> Result<VolumeAccounting> {
    let cones_in_facets = fan
        .cones
        .iter()
        .all(|c| p.halfspaces().iter().any(|h| c.generators.iter().all(|g| h.is_tight(g))));
    Ok(VolumeAccounting {
        cone_volume: fan.determinant_volume()?,
        polytope_volume: p.normalized_volume()?,
        cones_in_facets,
    })
}

/// True iff `w` permutes the maximal cones.
pub fn fan_invariant_under(f: &Fan, w: &SignedPerm) -> bool {
    if f.ambient_dim() != 4 {
        return false;
    }
    f.cones.iter().all(|c| f.contains_cone(&c.image(w)))
}

/// The face spanned by the shared generators of two maximal cones.
pub fn common_face(sigma: &Cone, tau: &Cone, fan: &Fan) -> Result<Cone> {
    if !fan.contains_cone(sigma) || !fan.contains_cone(tau) {
        return Err(Error::ConeNotInFan);
    }
    Ok(sigma.shared_face(tau))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    /// Number of maximal cones whose intersection with their image has the given dimension.
    pub counts_by_dim: BTreeMap<usize, usize>,
    /// Distinct nonzero intersection cones, sorted.
    pub distinct: Vec<Cone>,
}

impl IntersectionReport {
    pub fn distinct_of_dim(&self, d: usize) -> Vec<&Cone> {
        self.distinct.iter().filter(|c| c.dim() == d).collect()
    }
}

/// Type of `sigma ∩ w(sigma)` for every maximal cone, for an involution `w`.
pub fn classify_involution_intersections(f: &Fan, w: &SignedPerm) -> Result<IntersectionReport> {
    use crate::group::GroupElement;
    if w.is_identity() || !w.mul(w).is_identity() {
        return Err(Error::NotInvolution);
    }
    if !fan_invariant_under(f, w) {
        return Err(Error::ActionNotClosed("fan is not invariant under the involution".into()));
    }
    let mut counts_by_dim = BTreeMap::new();
    let mut distinct = BTreeSet::new();
    for c in &f.cones {
        let face = common_face(c, &c.image(w), f)?;
        *counts_by_dim.entry(face.dim()).or_insert(0) += 1;
        if face.dim() > 0 {
            distinct.insert(face);
        }
    }
    Ok(IntersectionReport { counts_by_dim, distinct: distinct.into_iter().collect() })
}

/// Orbit partition, each orbit sorted and orbits ordered by their first element.
pub fn orbits<T, G, F>(objects: &[T], group: &[G], action: F) -> Result<Vec<Vec<T>>>
where
    T: Ord + Clone + std::fmt::Debug,
    F: Fn(&G, &T) -> T,
{
    let all: BTreeSet<&T> = objects.iter().collect();
    let mut seen: BTreeSet<T> = BTreeSet::new();
    let mut out = Vec::new();
    let mut sorted: Vec<&T> = all.iter().copied().collect();
    sorted.sort();
    for x in sorted {
        if seen.contains(x) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for g in group {
            let y = action(g, x);
            if !all.contains(&y) {
                return Err(Error::ActionNotClosed(format!("{x:?} maps to {y:?}")));
            }
            orbit.insert(y);
        }
        orbit.insert(x.clone());
        seen.extend(orbit.iter().cloned());
        out.push(orbit.into_iter().collect());
    }
    Ok(out)
}

/// Elements of `group` mapping the object set onto itself, and the orbits of
/// that stabilizer.
pub fn stabilizer_orbits<T, G, F>(objects: &[T], group: &[G], action: F) -> Result<(Vec<G>, Vec<Vec<T>>)>
where
    T: Ord + Clone + std::fmt::Debug,
    G: Clone,
    F: Fn(&G, &T) -> T,
{
    let all: BTreeSet<&T> = objects.iter().collect();
    let stab: Vec<G> = group.iter().filter(|g| objects.iter().all(|x| all.contains(&action(g, x)))).cloned().collect();
    let orbs = orbits(objects, &stab, &action)?;
    Ok((stab, orbs))
}

/// Number of orbits as the average number of fixed objects.
pub fn burnside_orbit_count<T, G, F>(objects: &[T], group: &[G], action: F) -> Result<usize>
where
    T: Ord + Clone + std::fmt::Debug,
    F: Fn(&G, &T) -> T,
{
    let fixed: usize = group.iter().map(|g| objects.iter().filter(|x| action(g, x) == **x).count()).sum();
    if group.is_empty() || fixed % group.len() != 0 {
        return Err(Error::Invariant("fixed-point total is not divisible by the group order".into()));
    }
    Ok(fixed / group.len())
}

/// `sum_j coeff_j * h(ray_j) < 0`, one per side of each wall.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct WallInequality {
    terms: Vec<(usize, BigRational)>,
}

fn wall_inequalities(fan: &Fan) -> Result<Vec<WallInequality>> {
    let (walls, _) = fan.walls()?;
    let ray_index: BTreeMap<&Point, usize> = fan.rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut out = Vec::with_capacity(2 * walls.len());
    for w in &walls {
        for (own, other) in [(w.cones.0, w.cones.1), (w.cones.1, w.cones.0)] {
            let sigma = &fan.cones[own];
            let outside = fan.other_generator(other, &w.shared);
            let basis = IntMatrix::from_i64_rows(&sigma.generators)?.to_rational().transpose();
            let b: Vec<BigRational> = outside.iter().map(|&v| rat(v)).collect();
            let c = basis.solve(&b)?.ok_or_else(|| Error::Invariant("singular cone".into()))?;
            // l_sigma(outside) - h(outside) < 0
            let mut terms: Vec<(usize, BigRational)> =
                sigma.generators.iter().zip(c).map(|(g, cj)| (ray_index[g], cj)).collect();
            terms.push((ray_index[&outside], rat(-1)));
            out.push(WallInequality { terms });
        }
    }
    Ok(out)
}

/// True iff the piecewise-linear function with the given ray heights is
/// strictly convex across every wall.
pub fn regularity_certificate(fan: &Fan, heights: &BTreeMap<Point, BigRational>) -> Result<bool> {
    if let Some(r) = fan.rays.iter().find(|r| !heights.contains_key(*r)) {
        return Err(Error::MissingHeight(r.clone()));
    }
    let hs: Vec<&BigRational> = fan.rays.iter().map(|r| &heights[r]).collect();
    Ok(wall_inequalities(fan)?.iter().all(|ineq| {
        let v: BigRational = ineq.terms.iter().map(|(i, c)| c * hs[*i]).sum();
        v.is_negative()
    }))
}

/// Heights constant on orbits of `group` acting on rays, searched over the
/// integer grid `0..=max_height` per orbit in lexicographic order.
pub fn find_symmetric_heights(
    fan: &Fan,
    group: &[SignedPerm],
    max_height: i64,
) -> Result<Option<BTreeMap<Point, BigRational>>> {
    let ray_orbits = orbits(&fan.rays, group, |w, r| w.apply(r))?;
    let orbit_of: BTreeMap<&Point, usize> =
        ray_orbits.iter().enumerate().flat_map(|(k, o)| o.iter().map(move |r| (r, k))).collect();
    let k = ray_orbits.len();
    let reduced: BTreeSet<Vec<BigRational>> = wall_inequalities(fan)?
        .into_iter()
        .map(|ineq| {
            let mut v = vec![BigRational::zero(); k];
            for (i, c) in ineq.terms {
                v[orbit_of[&fan.rays[i]]] += c;
            }
            v
        })
        .collect();
    let mut h = vec![0i64; k];
    loop {
        let ok = reduced
            .iter()
            .all(|v| v.iter().zip(&h).map(|(c, &x)| c * rat(x)).sum::<BigRational>().is_negative());
        if ok {
            let mut out = BTreeMap::new();
            for (o, &x) in ray_orbits.iter().zip(&h) {
                for r in o {
                    out.insert(r.clone(), rat(x));
                }
            }
            return Ok(Some(out));
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if h[i] < max_height {
                h[i] += 1;
                for x in h.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Heights per ray as a vector indexed like `fan.rays()`.
pub fn heights_by_ray(fan: &Fan, heights: &BTreeMap<Point, BigRational>) -> Vec<BigRational> {
    fan.rays.iter().map(|r| heights.get(r).cloned().unwrap_or_else(BigRational::zero)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{generate_b4, named, GroupElement, Subgroup};

    fn cone(gens: &[[i64; 4]]) -> Cone {
        Cone::new(gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    #[test]
    fn witness_cones() {
        let c = cone(&[[1, 1, 1, 1], [1, 1, 1, -1], [1, 1, -1, 1], [1, 1, -1, -1]]);
        assert_eq!(c.dim(), 3);
        assert!(!c.is_simplicial());
        let flag = cone(&[[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]]);
        assert!(flag.is_smooth());
        assert_eq!(flag.determinant().unwrap(), BigInt::from(1));
        let c2 = Cone::new(vec![vec![1, 0], vec![1, 2]]).unwrap();
        assert!(c2.is_simplicial() && !c2.is_smooth());
    }

    #[test]
    fn generators_become_primitive() {
        let c = Cone::new(vec![vec![2, 0], vec![3, 3]]).unwrap();
        assert_eq!(c.generators(), &[vec![1, 0], vec![1, 1]]);
        assert_eq!(Cone::new(vec![vec![1, 0], vec![-1, 0], vec![0, 1]]), Err(Error::NotStrictlyConvex));
    }

    #[test]
    fn face_fans() {
        let sigma = face_fan(&LatticePolytope::cross_polytope(4)).unwrap();
        assert_eq!(sigma.cones().len(), 16);
        assert!(sigma.is_smooth());
        let dual = face_fan(&LatticePolytope::hypercube(4)).unwrap();
        assert_eq!(dual.cones().len(), 8);
        assert!(!dual.is_simplicial());
        // Cones over the square's edges have determinant 2; the diamond's are unimodular.
        let sq = face_fan(&LatticePolytope::hypercube(2)).unwrap();
        assert_eq!(sq.cones().len(), 4);
        assert!(sq.is_simplicial() && !sq.is_smooth());
        let diamond = face_fan(&LatticePolytope::cross_polytope(2)).unwrap();
        assert_eq!(diamond.cones().len(), 4);
        assert!(diamond.is_smooth());
        let shifted = LatticePolytope::new(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(face_fan(&shifted), Err(Error::OriginNotInterior));
    }

    #[test]
    fn flag_subdivision_counts() {
        let f = flag_subdivision();
        assert_eq!(f.cones().len(), 384);
        assert_eq!(f.rays().len(), 80);
        assert!(f.is_smooth());
        let boundary: BTreeSet<Point> =
            LatticePolytope::hypercube(4).lattice_points().into_iter().filter(|p| p.iter().any(|&x| x != 0)).collect();
        assert_eq!(f.rays().iter().cloned().collect::<BTreeSet<_>>(), boundary);
        let flags = flags(&LatticePolytope::hypercube(4));
        assert!(flags.contains(&Flag {
            centers: vec![vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![1, 1, 1, 0], vec![1, 1, 1, 1]]
        }));
    }

    #[test]
    fn flag_subdivision_is_complete() {
        let f = flag_subdivision();
        let acc = volume_accounting(&f, &LatticePolytope::hypercube(4)).unwrap();
        assert_eq!(acc.cone_volume, BigInt::from(384));
        assert!(acc.is_complete());
        assert!(f.is_closed_pseudomanifold().unwrap());
        assert_eq!(f.walls().unwrap().0.len(), 768);
    }

    #[test]
    fn invariance() {
        let f = flag_subdivision();
        assert!(fan_invariant_under(&f, &named::g()));
        assert!(fan_invariant_under(&f, &named::h()));
        assert!(generate_b4().elements().iter().all(|w| fan_invariant_under(&f, w)));
        let single = Fan::new(vec![cone(&[[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]])]).unwrap();
        assert!(!fan_invariant_under(&single, &SignedPerm::minus_identity()));
    }

    #[test]
    fn common_faces() {
        let f = flag_subdivision();
        let g4 = SignedPerm::minus_identity();
        for c in f.cones() {
            assert_eq!(common_face(c, &c.image(&g4), &f).unwrap().dim(), 0);
        }
        let sigma = cone(&[[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]]);
        let face = common_face(&sigma, &sigma.image(&named::h()), &f).unwrap();
        assert_eq!(face.generators(), &[vec![1, 0, 0, 0]]);
        let e1 = vec![1, 0, 0, 0];
        let e14 = vec![1, 0, 0, 1];
        for c in f.cones().iter().filter(|c| c.generators().contains(&e1) && c.generators().contains(&e14)) {
            let face = common_face(c, &c.image(&named::h()), &f).unwrap();
            assert!(face.generators().contains(&e1) && face.generators().contains(&e14));
        }
        let foreign = cone(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(common_face(&foreign, &sigma, &f), Err(Error::ConeNotInFan));
    }

    #[test]
    fn h_intersections() {
        let f = flag_subdivision();
        let r = classify_involution_intersections(&f, &named::h()).unwrap();
        let rays: Vec<&Cone> = r.distinct_of_dim(1);
        let expected_rays: Vec<Point> =
            vec![vec![-1, 0, 0, 0], vec![0, 0, 0, -1], vec![0, 0, 0, 1], vec![1, 0, 0, 0]];
        let got: Vec<Point> = rays.iter().map(|c| c.generators()[0].clone()).collect();
        assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), expected_rays.into_iter().collect());
        let planes = r.distinct_of_dim(2);
        assert_eq!(planes.len(), 8);
        assert!(r.distinct.iter().all(|c| c.dim() <= 2));
        let k = named::m16();
        let planes: Vec<Cone> = planes.into_iter().cloned().collect();
        // g moves the plane of e1, e4 elsewhere, so only part of the group acts.
        assert!(orbits(&planes, k.elements(), |w, c| c.image(w)).is_err());
        let (stab, orbs) = stabilizer_orbits(&planes, k.elements(), |w, c| c.image(w)).unwrap();
        let centralizer = k.centralizer(&named::h()).unwrap();
        assert_eq!(stab, centralizer.elements());
        assert_eq!(orbs.len(), 2);
        let reps: BTreeSet<Cone> = [cone(&[[1, 0, 0, 0], [1, 0, 0, 1]]), cone(&[[1, 0, 0, 0], [1, 0, 0, -1]])]
            .into_iter()
            .collect();
        let orbit_of = |c: &Cone| orbs.iter().position(|o| o.contains(c)).unwrap();
        assert_eq!(reps.iter().map(orbit_of).collect::<BTreeSet<_>>().len(), 2);
    }

    #[test]
    fn minus_identity_intersections_are_trivial() {
        let f = flag_subdivision();
        let r = classify_involution_intersections(&f, &SignedPerm::minus_identity()).unwrap();
        assert!(r.distinct.is_empty());
        assert_eq!(r.counts_by_dim, BTreeMap::from([(0, 384)]));
        assert_eq!(classify_involution_intersections(&f, &named::g()), Err(Error::NotInvolution));
    }

    #[test]
    fn orbit_counts() {
        let f = flag_subdivision();
        let k = named::m16();
        let o = orbits(f.rays(), k.elements(), |w, r| w.apply(r)).unwrap();
        assert_eq!(o.len(), 6);
        assert_eq!(burnside_orbit_count(f.rays(), k.elements(), |w, r| w.apply(r)).unwrap(), 6);
        let centers: Vec<Point> = f.rays().iter().filter(|r| r.iter().filter(|&&x| x != 0).count() == 1).cloned().collect();
        assert_eq!(orbits(&centers, k.elements(), |w, r| w.apply(r)).unwrap().len(), 1);
        let trivial = Subgroup::<SignedPerm>::trivial();
        assert_eq!(orbits(f.rays(), trivial.elements(), |w, r| w.apply(r)).unwrap().len(), 80);
        let bad = orbits(&centers[..1], k.elements(), |w, r| w.apply(r));
        assert!(matches!(bad, Err(Error::ActionNotClosed(_))));
    }

    #[test]
    fn regularity() {
        let f = flag_subdivision();
        let b4 = generate_b4();
        let heights = find_symmetric_heights(&f, b4.elements(), 12).unwrap().expect("feasible");
        assert!(regularity_certificate(&f, &heights).unwrap());
        // Frozen from the search: one height per number of nonzero coordinates.
        let by_support: BTreeMap<usize, BigRational> = heights
            .iter()
            .map(|(r, h)| (r.iter().filter(|&&x| x != 0).count(), h.clone()))
            .collect();
        let frozen: BTreeMap<usize, BigRational> = [(1, 4), (2, 7), (3, 9), (4, 10)].map(|(k, v)| (k, rat(v))).into();
        assert_eq!(by_support, frozen);
        assert_eq!(heights.len(), 80);
        let flat: BTreeMap<Point, BigRational> = f.rays().iter().map(|r| (r.clone(), rat(1))).collect();
        assert!(!regularity_certificate(&f, &flat).unwrap());
        let mut missing = flat.clone();
        missing.remove(&vec![1, 0, 0, 0]);
        assert_eq!(regularity_certificate(&f, &missing), Err(Error::MissingHeight(vec![1, 0, 0, 0])));
        let sigma = face_fan(&LatticePolytope::cross_polytope(4)).unwrap();
        let ones: BTreeMap<Point, BigRational> = sigma.rays().iter().map(|r| (r.clone(), rat(1))).collect();
        assert!(regularity_certificate(&sigma, &ones).unwrap());
    }

    #[test]
    fn g_power_is_identity_after_eight() {
        assert!(named::g().pow(8).is_identity());
    }
}
