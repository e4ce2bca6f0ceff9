//! Torus-twisted monomial automorphisms and their action on anticanonical
//! sections, fixed loci on the torus, patch restrictions, and singularity
//! tests.
//!
//! Point-map convention: `lambda ∘ w` sends `x` to `lambda * w(x)` with
//! `w(x)_i = x_j^s` when row `i` of `w` has the entry `s` in column `j`.
//! Pulling back a monomial `x^m` gives `lambda^m x^(w^T m)`. Sections are
//! acted on by push-forward, so the action is a left action.

mod fixed;
mod laurent;
mod patch;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

pub use fixed::{
    fixed_curve_equations, fixed_locus_on_torus, freeness_certificate, singular_points, torus_exit_power, unit_grid,
    CoordinateValue, ElementVerdict, FixedCurve, RootOfUnity, SubtorusComponent,
};
pub use laurent::{
    constant, generic_invariant_section, i0, pair_sum, twisted_eigen_section, Exponent, LaurentPoly, ParamPoly,
};
pub use patch::{restrict_to_chart, restrict_to_patch, Chart, PatchPolynomial};

use crate::error::{Error, Result};
use crate::group::{named, verify_m16_presentation, GroupElement, SignedPerm, Subgroup};
use crate::linalg::{GaussianMatrix, GaussianRational, Matrix, Subspace};

/// A point of the torus (C*)^4 with Gaussian rational coordinates.
pub type TorusPoint = [GaussianRational; 4];

pub fn unit_point() -> TorusPoint {
    std::array::from_fn(|_| GaussianRational::one())
}

pub fn torus_point(coords: [i64; 4]) -> TorusPoint {
    coords.map(GaussianRational::from)
}

/// `w(x)` for a signed permutation acting on torus points.
fn lattice_on_torus(w: &SignedPerm, x: &TorusPoint) -> Result<TorusPoint> {
    let mut out = unit_point();
    for (i, o) in out.iter_mut().enumerate() {
        let (j, s) = w.row_entry(i);
        *o = x[j].pow(s).ok_or(Error::ZeroCoordinate)?;
    }
    Ok(out)
}

fn torus_mul(x: &TorusPoint, y: &TorusPoint) -> TorusPoint {
    std::array::from_fn(|i| &x[i] * &y[i])
}

fn torus_inv(x: &TorusPoint) -> Result<TorusPoint> {
    let mut out = unit_point();
    for (o, v) in out.iter_mut().zip(x) {
        *o = v.inv().ok_or(Error::ZeroCoordinate)?;
    }
    Ok(out)
}

fn monomial_value(x: &TorusPoint, m: &Exponent) -> GaussianRational {
    (0..4).fold(GaussianRational::one(), |acc, i| &acc * &x[i].pow(m[i]).expect("nonzero torus coordinate"))
}

/// `lambda ∘ w`: a lattice automorphism followed by a torus translation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonomialAutomorphism {
    lattice: SignedPerm,
    twist: TorusPoint,
}

impl MonomialAutomorphism {
    pub fn new(twist: TorusPoint, lattice: SignedPerm) -> Result<Self> {
        if twist.iter().any(|t| t.is_zero()) {
            return Err(Error::ZeroCoordinate);
        }
        Ok(Self { lattice, twist })
    }

    pub fn lattice(w: SignedPerm) -> Self {
        Self { lattice: w, twist: unit_point() }
    }

    pub fn translation(twist: TorusPoint) -> Result<Self> {
        Self::new(twist, SignedPerm::identity())
    }

    pub fn lattice_part(&self) -> &SignedPerm {
        &self.lattice
    }

    pub fn twist(&self) -> &TorusPoint {
        &self.twist
    }

    /// The point map.
    pub fn apply(&self, x: &TorusPoint) -> Result<TorusPoint> {
        Ok(torus_mul(&self.twist, &lattice_on_torus(&self.lattice, x)?))
    }

    /// `f ∘ self`.
    pub fn pullback(&self, p: &LaurentPoly) -> LaurentPoly {
        let wt = self.lattice.transpose();
        p.transform(|m| exponent(&wt.apply(m)), |m| monomial_value(&self.twist, m))
    }

    /// `f ∘ self^-1`, the action on sections.
    pub fn push_forward(&self, p: &LaurentPoly) -> LaurentPoly {
        self.inverse().pullback(p)
    }
}

fn exponent(v: &[i64]) -> Exponent {
    std::array::from_fn(|i| v[i])
}

impl GroupElement for MonomialAutomorphism {
    fn identity() -> Self {
        Self::lattice(SignedPerm::identity())
    }

    /// `(lambda ∘ w)(mu ∘ v) = (lambda * w(mu)) ∘ (w v)`.
    fn mul(&self, o: &Self) -> Self {
        let moved = lattice_on_torus(&self.lattice, &o.twist).expect("twists are nonzero");
        Self { lattice: self.lattice.mul(&o.lattice), twist: torus_mul(&self.twist, &moved) }
    }

    fn inverse(&self) -> Self {
        let winv = self.lattice.inverse();
        let inv = torus_inv(&self.twist).expect("twists are nonzero");
        Self { twist: lattice_on_torus(&winv, &inv).expect("nonzero"), lattice: winv }
    }
}

impl fmt::Debug for MonomialAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.twist.iter().map(|c| c.to_string()).collect();
        write!(f, "({}) o {:?}", t.join(","), self.lattice)
    }
}

/// The lifts of the order-8 and order-2 generators.
pub mod lifts {
    use super::*;

    pub fn g() -> MonomialAutomorphism {
        MonomialAutomorphism::lattice(named::g())
    }

    pub fn h1() -> MonomialAutomorphism {
        MonomialAutomorphism::lattice(named::h())
    }

    /// `h` composed with the translation by `(-1,-1,-1,-1)`.
    pub fn h2() -> MonomialAutomorphism {
        MonomialAutomorphism::new(torus_point([-1; 4]), named::h()).expect("nonzero")
    }

    pub fn l1() -> Subgroup<MonomialAutomorphism> {
        Subgroup::generate(&[g(), h1()])
    }

    pub fn l2() -> Subgroup<MonomialAutomorphism> {
        Subgroup::generate(&[g(), h2()])
    }
}

/// `nu^-1 ∘ a ∘ nu` for a translation `nu`.
pub fn conjugate_by_torus(nu: &TorusPoint, a: &MonomialAutomorphism) -> Result<MonomialAutomorphism> {
    let t = MonomialAutomorphism::translation(nu.clone())?;
    Ok(t.inverse().mul(a).mul(&t))
}

/// Whether `<lambda ∘ h, mu ∘ g>` is the modular group of order 16, decided by
/// generating the group (giving up above 64 elements) and checking the
/// presentation.
pub fn m16_twist_check(lambda: &TorusPoint, mu: &TorusPoint) -> Result<bool> {
    let b = MonomialAutomorphism::new(lambda.clone(), named::h())?;
    let a = MonomialAutomorphism::new(mu.clone(), named::g())?;
    let Some(group) = Subgroup::generate_capped(&[a.clone(), b.clone()], 64) else {
        return Ok(false);
    };
    Ok(group.order() == 16 && verify_m16_presentation(&a, &b))
}

/// A fixed point over Q(i) of the point map of `a`, found cycle by cycle:
/// free cycles take the value 1 at their first coordinate and negative
/// cycles take a square root.
pub fn torus_fixed_point(a: &MonomialAutomorphism) -> Option<TorusPoint> {
    let w = a.lattice_part();
    let mut x = unit_point();
    let mut seen = [false; 4];
    for start in 0..4 {
        if seen[start] {
            continue;
        }
        // x_{next} = (x_cur / lambda_cur)^s, tracked as c * t^e with t = x_start.
        let mut cycle = Vec::new();
        let (mut c, mut e) = (GaussianRational::one(), 1i64);
        let mut cur = start;
        loop {
            seen[cur] = true;
            cycle.push((cur, c.clone(), e));
            let (next, s) = w.row_entry(cur);
            c = (&c / &a.twist()[cur]).pow(s)?;
            e *= s;
            cur = next;
            if cur == start {
                break;
            }
        }
        let t = if e == 1 {
            if !c.is_one() {
                return None;
            }
            GaussianRational::one()
        } else {
            c.sqrt()?
        };
        for (i, ci, ei) in cycle {
            x[i] = &ci * &t.pow(ei)?;
        }
    }
    Some(x)
}

/// Which of the two torus-conjugacy classes a lift belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LiftClass {
    Untwisted,
    Twisted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftNormalForm {
    pub normalizer: TorusPoint,
    pub class: LiftClass,
    pub involution: MonomialAutomorphism,
}

/// Conjugates `<lambda ∘ h, mu ∘ g>` by a translation so that the order-8
/// generator becomes `g`. The involution then has twist
/// `(l, l, 1/l, 1/l)` with `l = lambda_1 = ±1`, which names the class.
pub fn normal_form(lambda: &TorusPoint, mu: &TorusPoint) -> Result<LiftNormalForm> {
    if !m16_twist_check(lambda, mu)? {
        return Err(Error::NotM16("twisted generators do not satisfy the presentation".into()));
    }
    let a = MonomialAutomorphism::new(mu.clone(), named::g())?;
    let b = MonomialAutomorphism::new(lambda.clone(), named::h())?;
    let nu = torus_fixed_point(&a)
        .ok_or_else(|| Error::Unsupported("no normalizing translation over Q(i)".into()))?;
    if conjugate_by_torus(&nu, &a)? != lifts::g() {
        return Err(Error::Invariant("normalizer does not fix the order-8 generator".into()));
    }
    let hb = conjugate_by_torus(&nu, &b)?;
    let l = lambda[0].clone();
    let linv = l.inv().ok_or(Error::ZeroCoordinate)?;
    let expected = MonomialAutomorphism::new([l.clone(), l.clone(), linv.clone(), linv], named::h())?;
    if hb != expected {
        return Err(Error::Invariant(format!("conjugated involution {hb:?} is not in normal form")));
    }
    let class = if l.is_one() {
        LiftClass::Untwisted
    } else if l == -GaussianRational::one() {
        LiftClass::Twisted
    } else {
        return Err(Error::Invariant("first twist coordinate is not ±1".into()));
    };
    Ok(LiftNormalForm { normalizer: nu, class, involution: hb })
}

/// The nine lattice points of the 16-cell in lexicographic order.
pub fn section_basis() -> Vec<Exponent> {
    let mut b: Vec<Exponent> = vec![[0; 4]];
    for i in 0..4 {
        for s in [1, -1] {
            let mut m = [0; 4];
            m[i] = s;
            b.push(m);
        }
    }
    b.sort();
    b
}

/// Matrix of the push-forward action on the nine anticanonical sections,
/// columns indexed by [`section_basis`]. Every signed permutation preserves
/// the 16-cell, so no input is rejected.
pub fn section_action(a: &MonomialAutomorphism) -> GaussianMatrix {
    let basis = section_basis();
    let mut m = Matrix::zeros(9, 9);
    for (j, e) in basis.iter().enumerate() {
        let image = a.push_forward(&LaurentPoly::monomial(*e, constant(1)));
        let (img, c) = image.terms().next().expect("a monomial maps to a monomial");
        let i = basis.iter().position(|b| b == img).expect("16-cell is preserved");
        m.set(i, j, c.as_constant().expect("constant coefficient"));
    }
    m
}

/// The four eigenvalue candidates `1, -1, i, -i`.
pub fn fourth_roots() -> [GaussianRational; 4] {
    let i = GaussianRational::i();
    [GaussianRational::one(), -GaussianRational::one(), i.clone(), -i]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eigenspace {
    /// Eigenvalue of the order-8 generator.
    pub rotation: GaussianRational,
    /// Eigenvalue of the involution.
    pub reflection: GaussianRational,
    pub dim: usize,
    pub basis: Vec<Vec<GaussianRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenDecomposition {
    pub spaces: Vec<Eigenspace>,
    /// Where the fourth power of the order-8 generator acts by `-1`.
    pub residual_dim: usize,
    pub residual_basis: Vec<Vec<GaussianRational>>,
    /// The joint eigenspaces and the residual together span all sections.
    pub spans_all: bool,
}

impl EigenDecomposition {
    pub fn dim_of(&self, rotation: &GaussianRational, reflection: &GaussianRational) -> usize {
        self.spaces
            .iter()
            .find(|s| &s.rotation == rotation && &s.reflection == reflection)
            .map_or(0, |s| s.dim)
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(|s| s.dim).sum::<usize>() + self.residual_dim
    }
}

/// Joint eigenspaces of the order-8 generator `a` and involution `b` on the
/// nine sections, with eigenvalues in Q(i), plus the residual space.
pub fn eigen_decomposition(a: &MonomialAutomorphism, b: &MonomialAutomorphism) -> Result<EigenDecomposition> {
    if !verify_m16_presentation(a, b) {
        return Err(Error::NotM16(format!("{a:?}, {b:?}")));
    }
    let ra = section_action(a);
    let rb = section_action(b);
    let id = GaussianMatrix::identity(9);
    let mut spaces = Vec::new();
    let mut total = Subspace::zero(9);
    for alpha in fourth_roots() {
        for beta in [GaussianRational::one(), -GaussianRational::one()] {
            let stacked = ra.sub(&id.scale(&alpha))?.stack(&rb.sub(&id.scale(&beta))?)?;
            let k = stacked.kernel();
            if k.dim() > 0 {
                total = total.sum(&k);
                spaces.push(Eigenspace {
                    rotation: alpha.clone(),
                    reflection: beta,
                    dim: k.dim(),
                    basis: k.basis().to_vec(),
                });
            }
        }
    }
    let residual = ra.pow(4)?.add(&id)?.kernel();
    let joint_dim = total.dim();
    let spans_all = joint_dim + residual.dim() == 9 && total.sum(&residual).dim() == 9;
    Ok(EigenDecomposition {
        spaces,
        residual_dim: residual.dim(),
        residual_basis: residual.basis().to_vec(),
        spans_all,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    fn gr(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn displayed_coordinate_actions() {
        let x = [gr(2, 0), gr(3, 0), gr(5, 0), gr(7, 0)];
        let inv = |v: i64| gr(1, 0) / gr(v, 0);
        assert_eq!(lifts::g().apply(&x).unwrap(), [inv(3), inv(7), inv(2), gr(5, 0)]);
        assert_eq!(lifts::h1().apply(&x).unwrap(), [gr(2, 0), inv(3), inv(5), gr(7, 0)]);
        // The displayed square of g is the inverse square.
        let g6 = lifts::g().pow(6);
        assert_eq!(g6.apply(&x).unwrap(), [inv(7), gr(5, 0), inv(3), gr(2, 0)]);
        assert_eq!(lifts::g().pow(2).apply(&x).unwrap(), [gr(7, 0), inv(5), gr(3, 0), inv(2)]);
    }

    #[test]
    fn composition_laws() {
        let h1 = lifts::h1();
        assert!(h1.mul(&h1).is_identity());
        assert_eq!(h1.inverse().mul(&lifts::g()).mul(&h1), lifts::g().pow(5));
        assert!(lifts::h2().mul(&lifts::h2()).is_identity());
        for (u, v) in [(named::g(), named::h()), (named::h(), named::g_pow(3))] {
            let lhs = MonomialAutomorphism::lattice(u).mul(&MonomialAutomorphism::lattice(v));
            assert_eq!(lhs, MonomialAutomorphism::lattice(u.mul(&v)));
        }
    }

    #[test]
    fn composition_matches_point_maps() {
        let a = MonomialAutomorphism::new([gr(1, 1), gr(2, 0), gr(0, -1), gr(-3, 0)], named::g()).unwrap();
        let b = MonomialAutomorphism::new([gr(5, 0), gr(1, -2), gr(1, 0), gr(0, 2)], named::h()).unwrap();
        let x = [gr(2, 1), gr(-1, 0), gr(3, 0), gr(1, 4)];
        assert_eq!(a.mul(&b).apply(&x).unwrap(), a.apply(&b.apply(&x).unwrap()).unwrap());
        assert_eq!(a.inverse().apply(&a.apply(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn zero_twist_rejected() {
        let t = [gr(0, 0), gr(1, 0), gr(1, 0), gr(1, 0)];
        assert_eq!(MonomialAutomorphism::new(t.clone(), named::h()), Err(Error::ZeroCoordinate));
        assert!(m16_twist_check(&t, &unit_point()).is_err());
    }

    #[test]
    fn twist_check_examples() {
        assert!(m16_twist_check(&unit_point(), &unit_point()).unwrap());
        assert!(m16_twist_check(&torus_point([-1; 4]), &unit_point()).unwrap());
        assert!(!m16_twist_check(&torus_point([1, 1, 1, -1]), &unit_point()).unwrap());
        // Non-torsion twists generate an infinite group.
        assert!(!m16_twist_check(&torus_point([2, 1, 1, 1]), &unit_point()).unwrap());
    }

    #[test]
    fn lifts_have_order_16() {
        assert_eq!(lifts::l1().order(), 16);
        assert_eq!(lifts::l2().order(), 16);
        assert_ne!(lifts::l1(), lifts::l2());
    }

    #[test]
    fn conjugation_keeps_the_lattice_part() {
        let nu = [gr(2, 0), gr(0, 1), gr(1, 1), gr(-3, 0)];
        for a in lifts::l2().elements() {
            let c = conjugate_by_torus(&nu, a).unwrap();
            assert_eq!(c.lattice_part(), a.lattice_part());
        }
    }

    #[test]
    fn normal_form_of_a_twisted_pair() {
        // mu chosen freely; lambda from the admissibility conditions.
        let mu = [gr(4, 0), gr(-1, 0), gr(0, 1), gr(0, -1)];
        for l1 in [1, -1] {
            let l1 = gr(l1, 0);
            let lam2 = &(&l1 * &mu[0]) * &mu[1] / (&mu[2] * &mu[3]);
            let lam3 = &mu[1] * &mu[2] / (&(&l1 * &mu[0]) * &mu[3]);
            let lambda = [l1.clone(), lam2, lam3, l1.clone()];
            let nf = normal_form(&lambda, &mu).unwrap();
            let a = MonomialAutomorphism::new(mu.clone(), named::g()).unwrap();
            assert_eq!(conjugate_by_torus(&nf.normalizer, &a).unwrap(), lifts::g());
            let want = if l1.is_one() { LiftClass::Untwisted } else { LiftClass::Twisted };
            assert_eq!(nf.class, want);
        }
    }

    #[test]
    fn section_action_of_g_is_the_eight_cycle() {
        let m = section_action(&lifts::g());
        let basis = section_basis();
        let idx = |e: Exponent| basis.iter().position(|b| *b == e).unwrap();
        let e = |i: usize, s: i64| {
            let mut v = [0; 4];
            v[i] = s;
            v
        };
        // Push-forward sends x^m to x^(g m).
        let cycle = [e(0, 1), e(2, -1), e(3, -1), e(1, 1), e(0, -1), e(2, 1), e(3, 1), e(1, -1)];
        for k in 0..8 {
            let (from, to) = (idx(cycle[k]), idx(cycle[(k + 1) % 8]));
            assert_eq!(*m.get(to, from), gr(1, 0));
        }
        assert_eq!(*m.get(idx([0; 4]), idx([0; 4])), gr(1, 0));
        let nonzero = (0..9).flat_map(|i| (0..9).map(move |j| (i, j))).filter(|&(i, j)| !m.get(i, j).is_zero());
        assert_eq!(nonzero.count(), 9);
    }

    #[test]
    fn pullback_runs_the_cycle_backwards() {
        let e = |i: usize, s: i64| {
            let mut v = [0; 4];
            v[i] = s;
            v
        };
        let cycle = [e(0, 1), e(1, -1), e(3, 1), e(2, 1), e(0, -1), e(1, 1), e(3, -1), e(2, -1)];
        for k in 0..8 {
            let img = lifts::g().pullback(&LaurentPoly::monomial(cycle[k], constant(1)));
            assert_eq!(img.support(), vec![cycle[(k + 1) % 8]]);
        }
    }

    #[test]
    fn section_action_of_identity_and_h2() {
        assert_eq!(section_action(&MonomialAutomorphism::identity()), GaussianMatrix::identity(9));
        let m = section_action(&lifts::h2());
        let basis = section_basis();
        for (j, e) in basis.iter().enumerate() {
            let col: Vec<GaussianRational> = (0..9).map(|i| m.get(i, j).clone()).collect();
            let sign = if *e == [0; 4] { 1 } else { -1 };
            assert_eq!(col.iter().filter(|c| !c.is_zero()).count(), 1);
            assert!(col.iter().any(|c| *c == gr(sign, 0)));
        }
    }

    #[test]
    fn untwisted_decomposition() {
        let d = eigen_decomposition(&lifts::g(), &lifts::h1()).unwrap();
        let one = gr(1, 0);
        assert_eq!(d.dim_of(&one, &one), 2);
        assert_eq!(d.dim_of(&gr(-1, 0), &one), 1);
        assert_eq!(d.dim_of(&gr(0, 1), &one), 1);
        assert_eq!(d.dim_of(&gr(0, -1), &one), 1);
        assert_eq!(d.spaces.len(), 4);
        assert_eq!(d.residual_dim, 4);
        assert_eq!(d.total_dim(), 9);
        assert!(d.spans_all);
        let basis = section_basis();
        let inv = Subspace::from_vectors(
            9,
            vec![i0().to_vector(&basis).unwrap(), LaurentPoly::one().to_vector(&basis).unwrap()],
        );
        let fixed = d.spaces.iter().find(|s| s.rotation == one && s.reflection == one).unwrap();
        assert_eq!(Subspace::from_vectors(9, fixed.basis.clone()), inv);
    }

    #[test]
    fn twisted_decomposition() {
        let d = eigen_decomposition(&lifts::g(), &lifts::h2()).unwrap();
        let labels: Vec<(GaussianRational, GaussianRational, usize)> =
            d.spaces.iter().map(|s| (s.rotation.clone(), s.reflection.clone(), s.dim)).collect();
        let m1 = gr(-1, 0);
        let want = vec![
            (gr(1, 0), gr(1, 0), 1),
            (gr(1, 0), m1.clone(), 1),
            (m1.clone(), m1.clone(), 1),
            (gr(0, 1), m1.clone(), 1),
            (gr(0, -1), m1, 1),
        ];
        assert_eq!(labels, want);
        assert_eq!(d.residual_dim, 4);
        assert!(d.spans_all);
    }

    #[test]
    fn named_sections_are_eigenvectors() {
        let basis = section_basis();
        let rg = section_action(&lifts::g());
        let rh = section_action(&lifts::h2());
        for k in 0..4u32 {
            let v = twisted_eigen_section(k).to_vector(&basis).unwrap();
            let ev = gr(0, 1).pow(k as i64).unwrap();
            let gv = rg.mul_vec(&v).unwrap();
            assert_eq!(gv, v.iter().map(|c| c * &ev).collect::<Vec<_>>());
            let hv = rh.mul_vec(&v).unwrap();
            assert_eq!(hv, v.iter().map(|c| -c.clone()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn decomposition_rejects_wrong_pairs() {
        assert!(eigen_decomposition(&lifts::h1(), &lifts::g()).is_err());
        assert!(eigen_decomposition(&lifts::g(), &lifts::g().pow(4)).is_err());
    }

    #[test]
    fn generic_section_is_invariant() {
        let s = generic_invariant_section();
        for a in lifts::l1().elements() {
            assert_eq!(a.push_forward(&s), s);
        }
    }
}
