use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{LaurentPoly, MonomialAutomorphism, ParamPoly, TorusPoint};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::group::{GroupElement, SignedPerm, Subgroup};
use crate::linalg::GaussianRational;
use crate::polytope::Point;

/// `exp(2 pi i k / 8)`, stored as `k` mod 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RootOfUnity {
    exponent: u8,
}

impl RootOfUnity {
    pub fn new(k: i64) -> Self {
        Self { exponent: k.rem_euclid(8) as u8 }
    }

    pub fn one() -> Self {
        Self::new(0)
    }

    pub fn exponent(self) -> u8 {
        self.exponent
    }

    pub fn from_gaussian(z: &GaussianRational) -> Option<Self> {
        z.root_of_unity_exponent().map(|k| Self::new(k as i64))
    }

    /// The value in Q(i); `None` for primitive eighth roots.
    pub fn to_gaussian(self) -> Option<GaussianRational> {
        match self.exponent {
            0 => Some(GaussianRational::from(1)),
            2 => Some(GaussianRational::i()),
            4 => Some(GaussianRational::from(-1)),
            6 => Some(-GaussianRational::i()),
            _ => None,
        }
    }

    pub fn pow(self, e: i64) -> Self {
        Self::new(self.exponent as i64 * e)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.exponent as i64 + o.exponent as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_gaussian() {
            Some(z) => write!(f, "{z}"),
            None => write!(f, "zeta8^{}", self.exponent),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CoordinateValue {
    Fixed(RootOfUnity),
    /// `scale * t^exponent` where `t` is the given parameter.
    Free { parameter: usize, scale: RootOfUnity, exponent: i8 },
}

/// A translated subtorus: each coordinate is a root of unity or a signed
/// power of one of the free parameters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubtorusComponent {
    coordinates: [CoordinateValue; 4],
    /// The coordinate that equals each parameter.
    leaders: Vec<usize>,
}

impl SubtorusComponent {
    pub fn coordinates(&self) -> &[CoordinateValue; 4] {
        &self.coordinates
    }

    pub fn dimension(&self) -> usize {
        self.leaders.len()
    }

    pub fn fixed_coordinates(&self) -> BTreeMap<usize, RootOfUnity> {
        self.coordinates
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c {
                CoordinateValue::Fixed(r) => Some((i, *r)),
                CoordinateValue::Free { .. } => None,
            })
            .collect()
    }

    pub fn free_coordinates(&self) -> &[usize] {
        &self.leaders
    }

    /// Exponents of the point with the given parameter values, all as
    /// eighth roots of unity.
    pub fn point_at(&self, params: &[RootOfUnity]) -> [RootOfUnity; 4] {
        self.coordinates.clone().map(|c| match c {
            CoordinateValue::Fixed(r) => r,
            CoordinateValue::Free { parameter, scale, exponent } => scale.mul(params[parameter].pow(exponent as i64)),
        })
    }

    /// Every point whose coordinates are eighth roots of unity.
    pub fn eighth_root_points(&self) -> BTreeSet<[RootOfUnity; 4]> {
        let d = self.dimension();
        (0..8usize.pow(d as u32))
            .map(|mut k| {
                let params: Vec<RootOfUnity> = (0..d)
                    .map(|_| {
                        let r = RootOfUnity::new((k % 8) as i64);
                        k /= 8;
                        r
                    })
                    .collect();
                self.point_at(&params)
            })
            .collect()
    }

    /// Disjoint when some coordinate is fixed to different values.
    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.coordinates.iter().zip(&other.coordinates).any(|(a, b)| match (a, b) {
            (CoordinateValue::Fixed(x), CoordinateValue::Fixed(y)) => x != y,
            _ => false,
        })
    }

    /// `p` restricted to the component, as a Laurent polynomial in the
    /// parameters (parameter `k` is variable `k`).
    pub fn restrict(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (m, c) in p.terms() {
            let mut scale = RootOfUnity::one();
            let mut e = [0i64; 4];
            for (i, coord) in self.coordinates.iter().enumerate() {
                match coord {
                    CoordinateValue::Fixed(r) => scale = scale.mul(r.pow(m[i])),
                    CoordinateValue::Free { parameter, scale: s, exponent } => {
                        scale = scale.mul(s.pow(m[i]));
                        e[*parameter] += *exponent as i64 * m[i];
                    }
                }
            }
            let factor = scale
                .to_gaussian()
                .ok_or_else(|| Error::Unsupported("values outside Q(i) on the component".into()))?;
            out = &out + &LaurentPoly::monomial(e, c.scale(&factor));
        }
        Ok(out)
    }
}

fn twist_roots(a: &MonomialAutomorphism) -> Result<[RootOfUnity; 4]> {
    let mut out = [RootOfUnity::one(); 4];
    for (o, t) in out.iter_mut().zip(a.twist()) {
        *o = RootOfUnity::from_gaussian(t)
            .ok_or_else(|| Error::Unsupported(format!("twist {t} is not a root of unity")))?;
    }
    Ok(out)
}

enum CycleSolution {
    Empty,
    Free(Vec<(usize, RootOfUnity, i8)>),
    Points(Vec<Vec<(usize, RootOfUnity)>>),
}

/// Follows one signed cycle of the lattice part. Along the cycle the fixed
/// point equations force `x_next = (x_cur / lambda_cur)^s`.
fn solve_cycle(w: &SignedPerm, twist: &[RootOfUnity; 4], start: usize, seen: &mut [bool; 4]) -> Result<CycleSolution> {
    let mut cycle = Vec::new();
    let (mut c, mut e) = (RootOfUnity::one(), 1i64);
    let mut cur = start;
    loop {
        seen[cur] = true;
        cycle.push((cur, c, e));
        let (next, s) = w.row_entry(cur);
        c = c.mul(twist[cur].pow(-1)).pow(s);
        e *= s;
        cur = next;
        if cur == start {
            break;
        }
    }
    if e == 1 {
        if c != RootOfUnity::one() {
            return Ok(CycleSolution::Empty);
        }
        return Ok(CycleSolution::Free(cycle.into_iter().map(|(i, ci, ei)| (i, ci, ei as i8)).collect()));
    }
    // t^2 = c.
    if c.exponent() % 2 == 1 {
        return Err(Error::Unsupported("fixed points need sixteenth roots of unity".into()));
    }
    let half = c.exponent() as i64 / 2;
    let points = [half, half + 4]
        .iter()
        .map(|&r| {
            let t = RootOfUnity::new(r);
            cycle.iter().map(|&(i, ci, ei)| (i, ci.mul(t.pow(ei)))).collect()
        })
        .collect();
    Ok(CycleSolution::Points(points))
}

/// Fixed locus of the point map on the torus, for twists that are roots of
/// unity. Components come out sorted.
pub fn fixed_locus_on_torus(a: &MonomialAutomorphism) -> Result<Vec<SubtorusComponent>> {
    let twist = twist_roots(a)?;
    let w = a.lattice_part();
    let mut seen = [false; 4];
    let mut partial = vec![(
        [CoordinateValue::Fixed(RootOfUnity::one()), CoordinateValue::Fixed(RootOfUnity::one()),
         CoordinateValue::Fixed(RootOfUnity::one()), CoordinateValue::Fixed(RootOfUnity::one())],
        Vec::new(),
    )];
    for start in 0..4 {
        if seen[start] {
            continue;
        }
        match solve_cycle(w, &twist, start, &mut seen)? {
            CycleSolution::Empty => return Ok(Vec::new()),
            CycleSolution::Free(coords) => {
                for (values, leaders) in partial.iter_mut() {
                    let parameter = leaders.len();
                    leaders.push(start);
                    for &(i, scale, exponent) in &coords {
                        values[i] = CoordinateValue::Free { parameter, scale, exponent };
                    }
                }
            }
            CycleSolution::Points(options) => {
                partial = partial
                    .into_iter()
                    .flat_map(|(values, leaders)| {
                        options.iter().map(move |opt| {
                            let mut v = values.clone();
                            for &(i, r) in opt {
                                v[i] = CoordinateValue::Fixed(r);
                            }
                            (v, leaders.clone())
                        })
                    })
                    .collect();
            }
        }
    }
    let mut out: Vec<SubtorusComponent> =
        partial.into_iter().map(|(coordinates, leaders)| SubtorusComponent { coordinates, leaders }).collect();
    out.sort();
    Ok(out)
}

/// All 256 points with coordinates in `{1, i, -1, -i}`.
pub fn unit_grid() -> Vec<TorusPoint> {
    (0..256)
        .map(|k| std::array::from_fn(|i| RootOfUnity::new(2 * ((k >> (2 * i)) & 3)).to_gaussian().expect("in Q(i)")))
        .collect()
}

/// Candidates where `p` and all its logarithmic partials vanish
/// identically in the parameters.
pub fn singular_points(p: &LaurentPoly, candidates: &[TorusPoint]) -> Result<Vec<TorusPoint>> {
    let mut out = Vec::new();
    for x in candidates {
        let (v, grad) = p.evaluate_with_jacobian(x)?;
        if v.is_zero() && grad.iter().all(ParamPoly::is_zero) {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// The equation cut out by a section on one positive-dimensional fixed
/// component, in the component's parameters, cleared to a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedCurve {
    pub component: SubtorusComponent,
    #[serde(serialize_with = "display")]
    pub equation: LaurentPoly,
    pub clearing: [i64; 4],
}

fn display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn fixed_curve_equations(s: &LaurentPoly, involution: &MonomialAutomorphism) -> Result<Vec<FixedCurve>> {
    fixed_locus_on_torus(involution)?
        .into_iter()
        .filter(|c| c.dimension() > 0)
        .map(|component| {
            let r = component.restrict(s)?;
            let clearing = r.min_exponent().map_or([0; 4], |m| m.map(|e| -e));
            Ok(FixedCurve { equation: r.shift(&clearing), clearing, component })
        })
        .collect()
}

/// Freeness evidence for one group element acting on a generic section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementVerdict {
    pub element: MonomialAutomorphism,
    pub components: Vec<SubtorusComponent>,
    /// Per component: the section vanishes identically there.
    pub vanishes_identically: Vec<bool>,
    /// The section has zeros on some fixed component for generic parameters.
    pub meets_section_on_torus: bool,
    /// A power `j` with `sigma ∩ w^j(sigma) = 0` for every maximal cone, so
    /// fixed points off the torus are ruled out.
    pub torus_exit_power: Option<u32>,
    pub free: bool,
}

/// Smallest `j` such that `w^j` moves every maximal cone to one sharing no
/// ray with it.
pub fn torus_exit_power(w: &SignedPerm, fan: &Fan) -> Option<u32> {
    let order = w.order() as u32;
    (1..order).find(|&j| {
        let wj = w.pow(j as i64);
        fan.cones().iter().all(|c| {
            let gens: BTreeSet<&Point> = c.generators().iter().collect();
            c.generators().iter().all(|v| !gens.contains(&wj.apply(v)))
        })
    })
}

/// Whether the restricted section has a zero on the component for
/// generic parameters: it vanishes identically, or it is a Laurent
/// polynomial with at least two terms in positive dimension.
fn has_generic_zero(restricted: &LaurentPoly, dim: usize) -> bool {
    restricted.is_zero() || (dim > 0 && restricted.len() > 1)
}

pub fn freeness_certificate(
    s: &LaurentPoly,
    group: &Subgroup<MonomialAutomorphism>,
    fan: &Fan,
) -> Result<Vec<ElementVerdict>> {
    for x in group.generators() {
        if &x.push_forward(s) != s {
            return Err(Error::InvalidInput(format!("section is not invariant under {x:?}")));
        }
    }
    group
        .elements()
        .par_iter()
        .filter(|x| !x.is_identity())
        .map(|x| {
            let components = fixed_locus_on_torus(x)?;
            let mut vanishes = Vec::new();
            let mut meets = false;
            for c in &components {
                let r = c.restrict(s)?;
                vanishes.push(r.is_zero());
                meets |= has_generic_zero(&r, c.dimension());
            }
            let exit = torus_exit_power(x.lattice_part(), fan);
            Ok(ElementVerdict {
                element: x.clone(),
                components,
                vanishes_identically: vanishes,
                meets_section_on_torus: meets,
                free: !meets && exit.is_some(),
                torus_exit_power: exit,
            })
        })
        .collect()
}
