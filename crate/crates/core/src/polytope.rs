//! Lattice polytopes: facets, duality, face lattices and point censuses.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{combinations, IntMatrix};

pub type Point = Vec<i64>;

/// Inequality `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: i64,
}

impl Halfspace {
    pub fn value(&self, x: &[i64]) -> i64 {
        dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.value(x) <= self.offset
    }

    pub fn is_tight(&self, x: &[i64]) -> bool {
        self.value(x) == self.offset
    }
}

/// A full-dimensional lattice polytope (or a single point), stored by its
/// vertices in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Point>,
    halfspaces: Vec<Halfspace>,
}

/// A proper face, described by vertex and facet indices of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCensus {
    /// `by_dim[d]` counts lattice points whose smallest face has dimension `d`;
    /// the last entry counts interior points.
    pub by_dim: Vec<usize>,
}

impl PointCensus {
    pub fn total(&self) -> usize {
        self.by_dim.iter().sum()
    }

    pub fn vertices(&self) -> usize {
        self.by_dim[0]
    }

    pub fn interior(&self) -> usize {
        *self.by_dim.last().unwrap_or(&0)
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn primitive(v: &[i64]) -> Point {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

fn affine_rank(points: &[&Point]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let rows: Vec<Vec<i64>> =
        points[1..].iter().map(|p| p.iter().zip(base.iter()).map(|(a, b)| a - b).collect()).collect();
    if rows.is_empty() {
        return 0;
    }
    IntMatrix::from_i64_rows(&rows).map(|m| m.to_rational().rank()).unwrap_or(0)
}

impl LatticePolytope {
    /// Convex hull of the given points. Non-vertex points are discarded.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or_else(|| Error::InvalidInput("no points".into()))?;
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput("points of mixed dimension".into()));
        }
        let pts: Vec<Point> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.len() == 1 {
            return Ok(Self { dim, vertices: pts, halfspaces: Vec::new() });
        }
        let refs: Vec<&Point> = pts.iter().collect();
        if affine_rank(&refs) != dim {
            return Err(Error::InvalidInput("polytope must be full-dimensional or a single point".into()));
        }
        let halfspaces = facet_search(&pts, dim)?;
        let vertices: Vec<Point> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<&Halfspace> = halfspaces.iter().filter(|h| h.is_tight(p)).collect();
                tight.len() >= dim && {
                    let normals: Vec<Vec<i64>> = tight.iter().map(|h| h.normal.clone()).collect();
                    IntMatrix::from_i64_rows(&normals).map(|m| m.to_rational().rank()).unwrap_or(0) == dim
                }
            })
            .collect();
        Ok(Self { dim, vertices, halfspaces })
    }

    pub fn hypercube(dim: usize) -> Self {
        let vertices = (0..1usize << dim)
            .map(|mask| (0..dim).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect())
            .collect();
        Self::new(vertices).expect("hypercube is full-dimensional")
    }

    pub fn cross_polytope(dim: usize) -> Self {
        let mut vertices = Vec::new();
        for i in 0..dim {
            for s in [1, -1] {
                let mut v = vec![0; dim];
                v[i] = s;
                vertices.push(v);
            }
        }
        Self::new(vertices).expect("cross-polytope is full-dimensional")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Facet normals with the origin strictly inside, all offsets equal to one.
    pub fn is_reflexive(&self) -> bool {
        !self.halfspaces.is_empty() && self.halfspaces.iter().all(|h| h.offset == 1)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if self.halfspaces.is_empty() {
            return self.vertices[0] == x;
        }
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn has_origin_in_interior(&self) -> bool {
        !self.halfspaces.is_empty() && self.halfspaces.iter().all(|h| h.offset > 0)
    }

    /// Polar dual `{y : <x, y> <= 1 for x in P}`.
    pub fn dual(&self) -> Result<Self> {
        if !self.has_origin_in_interior() {
            return Err(Error::OriginNotInterior);
        }
        if let Some(h) = self.halfspaces.iter().find(|h| h.offset != 1) {
            return Err(Error::NotReflexive(format!(
                "facet with primitive normal {:?} sits at lattice distance {}, so the dual vertex {:?}/{} is not integral",
                h.normal, h.offset, h.normal, h.offset
            )));
        }
        Self::new(self.halfspaces.iter().map(|h| h.normal.clone()).collect())
    }

    /// All lattice points, lexicographically ordered.
    pub fn lattice_points(&self) -> Vec<Point> {
        let lo: Vec<i64> = (0..self.dim).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..self.dim).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains(&cur) {
                out.push(cur.clone());
            }
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    for j in k + 1..self.dim {
                        cur[j] = lo[j];
                    }
                    break;
                }
            }
        }
    }

    /// Indices of facets tight at `x`.
    fn tight_facets(&self, x: &[i64]) -> Vec<usize> {
        (0..self.halfspaces.len()).filter(|&i| self.halfspaces[i].is_tight(x)).collect()
    }

    /// The smallest face containing the given vertex indices, or `None` when
    /// that is the whole polytope.
    pub fn face_from_vertices(&self, verts: &[usize]) -> Option<Face> {
        let facets: Vec<usize> = (0..self.halfspaces.len())
            .filter(|&f| verts.iter().all(|&v| self.halfspaces[f].is_tight(&self.vertices[v])))
            .collect();
        self.face_from_facets(&facets)
    }

    fn face_from_facets(&self, facets: &[usize]) -> Option<Face> {
        if facets.is_empty() {
            return None;
        }
        let vertices: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| facets.iter().all(|&f| self.halfspaces[f].is_tight(&self.vertices[v])))
            .collect();
        if vertices.is_empty() {
            return None;
        }
        // Close the facet set: every facet tight on all these vertices.
        let facets: Vec<usize> = (0..self.halfspaces.len())
            .filter(|&f| vertices.iter().all(|&v| self.halfspaces[f].is_tight(&self.vertices[v])))
            .collect();
        let refs: Vec<&Point> = vertices.iter().map(|&v| &self.vertices[v]).collect();
        Some(Face { dim: affine_rank(&refs), vertices, facets })
    }

    /// All proper faces, grouped by dimension `0..dim`, each group sorted.
    pub fn face_lattice(&self) -> Vec<Vec<Face>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut faces: Vec<Face> = Vec::new();
        let mut frontier: Vec<Face> = (0..self.halfspaces.len()).filter_map(|f| self.face_from_facets(&[f])).collect();
        while let Some(face) = frontier.pop() {
            if !seen.insert(face.vertices.clone()) {
                continue;
            }
            for f in 0..self.halfspaces.len() {
                if face.facets.contains(&f) {
                    continue;
                }
                let mut fs = face.facets.clone();
                fs.push(f);
                if let Some(sub) = self.face_from_facets(&fs) {
                    if !seen.contains(&sub.vertices) {
                        frontier.push(sub);
                    }
                }
            }
            faces.push(face);
        }
        let mut graded = vec![Vec::new(); self.dim];
        for f in faces {
            graded[f.dim].push(f);
        }
        for g in &mut graded {
            g.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        }
        graded
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.face_lattice().iter().map(Vec::len).collect()
    }

    /// Smallest face containing a lattice point; `None` for interior points.
    pub fn carrier(&self, x: &[i64]) -> Option<Face> {
        self.face_from_facets(&self.tight_facets(x))
    }

    pub fn census(&self) -> PointCensus {
        let mut by_dim = vec![0; self.dim + 1];
        for p in self.lattice_points() {
            match self.carrier(&p) {
                Some(f) => by_dim[f.dim] += 1,
                None => by_dim[self.dim] += 1,
            }
        }
        PointCensus { by_dim }
    }

    /// Lattice points in the relative interior of a face.
    pub fn interior_point_count(&self, face: &Face) -> usize {
        self.lattice_points()
            .iter()
            .filter(|p| self.carrier(p).is_some_and(|c| c.vertices == face.vertices))
            .count()
    }

    /// The face of `dual` cut out by the facets of `self` containing `face`.
    pub fn dual_face(&self, face: &Face, dual: &LatticePolytope) -> Result<Face> {
        if face.vertices.is_empty() || face.vertices.len() == self.vertices.len() {
            return Err(Error::ImproperFace("empty face or whole polytope".into()));
        }
        if !self.is_reflexive() {
            return Err(Error::NotReflexive("dual faces need a reflexive polytope".into()));
        }
        let verts: Vec<usize> = face
            .facets
            .iter()
            .map(|&f| {
                dual.vertices
                    .iter()
                    .position(|v| *v == self.halfspaces[f].normal)
                    .ok_or_else(|| Error::InvalidInput("second polytope is not the dual".into()))
            })
            .collect::<Result<_>>()?;
        dual.face_from_vertices(&verts)
            .ok_or_else(|| Error::ImproperFace("dual face is the whole polytope".into()))
    }

    /// Simplices (vertex index lists) of the pulling triangulation that
    /// always cones from the smallest vertex.
    pub fn pulling_triangulation(&self) -> Vec<Vec<usize>> {
        let lattice = self.face_lattice();
        let whole = Face { dim: self.dim, vertices: (0..self.vertices.len()).collect(), facets: Vec::new() };
        pull(&whole, &lattice)
    }

    /// `dim! * volume`, from the pulling triangulation.
    pub fn normalized_volume(&self) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for s in self.pulling_triangulation() {
            let base = &self.vertices[s[0]];
            let rows: Vec<Vec<i64>> = s[1..]
                .iter()
                .map(|&i| self.vertices[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let d = IntMatrix::from_i64_rows(&rows)?.determinant()?;
            total += num_traits::Signed::abs(&d);
        }
        Ok(total)
    }

    /// Sum of facet-interior lattice point counts.
    pub fn root_count(&self) -> usize {
        self.census().by_dim.get(self.dim.wrapping_sub(1)).copied().unwrap_or(0)
    }

    /// Sum over codimension-2 faces of `l*(face) * l*(dual face)`; zero below
    /// dimension 3.
    pub fn deformation_defect(&self) -> Result<i64> {
        if self.dim < 3 {
            return Ok(0);
        }
        let dual = self.dual()?;
        let lattice = self.face_lattice();
        let mut total = 0i64;
        for face in &lattice[self.dim - 2] {
            let a = self.interior_point_count(face);
            if a == 0 {
                continue;
            }
            let df = self.dual_face(face, &dual)?;
            total += (a * dual.interior_point_count(&df)) as i64;
        }
        Ok(total)
    }
}

fn pull(face: &Face, lattice: &[Vec<Face>]) -> Vec<Vec<usize>> {
    if face.dim == 0 {
        return vec![face.vertices.clone()];
    }
    let apex = face.vertices[0];
    let mut out = Vec::new();
    for sub in &lattice[face.dim - 1] {
        if sub.vertices.contains(&apex) || !sub.vertices.iter().all(|v| face.vertices.contains(v)) {
            continue;
        }
        for mut s in pull(sub, lattice) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

/// Facets by trying every affinely independent `dim`-subset of the points.
fn facet_search(pts: &[Point], dim: usize) -> Result<Vec<Halfspace>> {
    let mut found = BTreeSet::new();
    for subset in combinations(pts.len(), dim) {
        // Solve <n, p> - c = 0 for the subset via the kernel of [p | -1].
        let rows: Vec<Vec<i64>> = subset
            .iter()
            .map(|&i| {
                let mut r = pts[i].clone();
                r.push(-1);
                r
            })
            .collect();
        let m = IntMatrix::from_i64_rows(&rows)?.to_rational();
        let ker = m.kernel();
        if ker.dim() != 1 {
            continue;
        }
        let v = &ker.basis()[0];
        let den = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let scale = num_rational::BigRational::from_integer(den);
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &scale).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let ints: Vec<i64> = ints.iter().map(|x| (x / &g).to_i64().expect("small coordinates")).collect();
        let (normal, offset) = (ints[..dim].to_vec(), ints[dim]);
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        let vals: Vec<i64> = pts.iter().map(|p| dot(&normal, p) - offset).collect();
        let h = if vals.iter().all(|&x| x <= 0) {
            Halfspace { normal, offset }
        } else if vals.iter().all(|&x| x >= 0) {
            Halfspace { normal: normal.iter().map(|x| -x).collect(), offset: -offset }
        } else {
            continue;
        };
        let g = h.normal.iter().fold(0i64, |g, &x| g.gcd(&x));
        found.insert(Halfspace { normal: h.normal.iter().map(|x| x / g).collect(), offset: h.offset / g });
    }
    Ok(found.into_iter().collect())
}

/// Map from lattice point to the dimension of its carrier face.
pub fn carrier_dimensions(p: &LatticePolytope) -> BTreeMap<Point, usize> {
    p.lattice_points()
        .into_iter()
        .map(|x| {
            let d = p.carrier(&x).map_or(p.dim(), |f| f.dim);
            (x, d)
        })
        .collect()
}
