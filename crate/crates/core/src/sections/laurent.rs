use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::GaussianRational;

pub type Exponent = [i64; 4];

/// A polynomial in the two formal parameters `a` and `b` over Q(i).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPoly {
    terms: BTreeMap<(u32, u32), GaussianRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(0, 0, c)
    }

    pub fn a() -> Self {
        Self::term(1, 0, GaussianRational::one())
    }

    pub fn b() -> Self {
        Self::term(0, 1, GaussianRational::one())
    }

    /// `c * a^i * b^j`.
    pub fn term(i: u32, j: u32, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when no parameter occurs.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn evaluate(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        self.terms.iter().fold(GaussianRational::zero(), |acc, ((i, j), c)| {
            let t = c * &a.pow(*i as i64).expect("nonnegative");
            acc + &t * &b.pow(*j as i64).expect("nonnegative")
        })
    }

    fn add_term(&mut self, k: (u32, u32), c: GaussianRational) {
        let v = self.terms.entry(k).or_insert_with(GaussianRational::zero);
        *v = &*v + &c;
        if v.is_zero() {
            self.terms.remove(&k);
        }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, o: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, o: &ParamPoly) -> ParamPoly {
        self + &(-o)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, o: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for ((i, j), c) in &self.terms {
            for ((k, l), d) in &o.terms {
                out.add_term((i + k, j + l), c * d);
            }
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j), c)| {
                let mut vars = Vec::new();
                for (name, e) in [("a", *i), ("b", *j)] {
                    match e {
                        0 => {}
                        1 => vars.push(name.to_string()),
                        _ => vars.push(format!("{name}^{e}")),
                    }
                }
                match (vars.is_empty(), c.is_one()) {
                    (true, _) => format!("({c})"),
                    (false, true) => vars.join("*"),
                    (false, false) => format!("({c})*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A Laurent polynomial in four torus coordinates with [`ParamPoly`]
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponent, ParamPoly>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial([0; 4], ParamPoly::constant(GaussianRational::one()))
    }

    pub fn monomial(m: Exponent, c: ParamPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// `x_i^e` with unit coefficient.
    pub fn variable(i: usize, e: i64) -> Self {
        let mut m = [0; 4];
        m[i] = e;
        Self::monomial(m, ParamPoly::constant(GaussianRational::one()))
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, ParamPoly)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// Constant-coefficient polynomial from a coefficient vector over `basis`.
    pub fn from_vector(basis: &[Exponent], v: &[GaussianRational]) -> Self {
        Self::from_terms(basis.iter().zip(v).map(|(m, c)| (*m, ParamPoly::constant(c.clone()))))
    }

    /// Coefficient vector over `basis`; fails on symbolic coefficients or
    /// exponents outside the basis.
    pub fn to_vector(&self, basis: &[Exponent]) -> Result<Vec<GaussianRational>> {
        let mut v = vec![GaussianRational::zero(); basis.len()];
        for (m, c) in &self.terms {
            let idx = basis
                .iter()
                .position(|b| b == m)
                .ok_or_else(|| Error::InvalidInput(format!("exponent {m:?} outside the basis")))?;
            v[idx] = c
                .as_constant()
                .ok_or_else(|| Error::InvalidInput(format!("symbolic coefficient {c}")))?;
        }
        Ok(v)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Exponent) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().copied().collect()
    }

    /// Componentwise minimum over the support.
    pub fn min_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        Some(it.fold(first, |acc, m| std::array::from_fn(|i| acc[i].min(m[i]))))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e >= 0))
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, v)| (*m, v * c)))
    }

    pub fn shift(&self, by: &Exponent) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (std::array::from_fn(|i| m[i] + by[i]), c.clone())).collect() }
    }

    /// Sends each term `c x^m` to `c * factor(m) x^{map(m)}`, merging collisions.
    pub fn transform<M, F>(&self, map: M, factor: F) -> Self
    where
        M: Fn(&Exponent) -> Exponent,
        F: Fn(&Exponent) -> GaussianRational,
    {
        Self::from_terms(self.terms.iter().map(|(m, c)| (map(m), c.scale(&factor(m)))))
    }

    /// Substitutes the formal parameters.
    pub fn specialize(&self, a: &GaussianRational, b: &GaussianRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, ParamPoly::constant(c.evaluate(a, b)))))
    }

    pub fn evaluate(&self, point: &[GaussianRational; 4]) -> Result<ParamPoly> {
        Ok(self.evaluate_with_jacobian(point)?.0)
    }

    /// Value and the logarithmic partials `x_i d/dx_i` at a point of the torus.
    pub fn evaluate_with_jacobian(&self, point: &[GaussianRational; 4]) -> Result<(ParamPoly, [ParamPoly; 4])> {
        if point.iter().any(|x| x.is_zero()) {
            return Err(Error::ZeroCoordinate);
        }
        let mut value = ParamPoly::zero();
        let mut grad: [ParamPoly; 4] = Default::default();
        for (m, c) in &self.terms {
            let mono = (0..4).fold(GaussianRational::one(), |acc, i| &acc * &point[i].pow(m[i]).expect("nonzero"));
            let t = c.scale(&mono);
            for i in 0..4 {
                if m[i] != 0 {
                    grad[i] = &grad[i] + &t.scale(&GaussianRational::from(m[i]));
                }
            }
            value = &value + &t;
        }
        Ok((value, grad))
    }

    fn add_term(&mut self, m: Exponent, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(m).or_default();
        *v = &*v + &c;
        if v.is_zero() {
            self.terms.remove(&m);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                out.add_term(std::array::from_fn(|i| m[i] + n[i]), c * d);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("[{c}]")
                } else {
                    format!("[{c}]*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The constant coefficient `c` as a [`ParamPoly`].
pub fn constant(c: i64) -> ParamPoly {
    ParamPoly::constant(GaussianRational::from(c))
}

/// `x_i + 1/x_i`.
pub fn pair_sum(i: usize) -> LaurentPoly {
    &LaurentPoly::variable(i, 1) + &LaurentPoly::variable(i, -1)
}

/// The sum of all eight degree-one monomials.
pub fn i0() -> LaurentPoly {
    (0..4).fold(LaurentPoly::zero(), |acc, i| &acc + &pair_sum(i))
}

/// `a + b * I0`, the general section invariant under the untwisted lift.
pub fn generic_invariant_section() -> LaurentPoly {
    &LaurentPoly::monomial([0; 4], ParamPoly::a()) + &i0().scale(&ParamPoly::b())
}

/// The section on which the order-8 generator acts by `i^k` and the
/// twisted involution by `-1`.
pub fn twisted_eigen_section(k: u32) -> LaurentPoly {
    let i = GaussianRational::i();
    let coeffs = [
        GaussianRational::one(),
        i.pow(k as i64).expect("nonzero"),
        i.pow(-(k as i64)).expect("nonzero"),
        i.pow(2 * k as i64).expect("nonzero"),
    ];
    (0..4).fold(LaurentPoly::zero(), |acc, j| &acc + &pair_sum(j).scale(&ParamPoly::constant(coeffs[j].clone())))
}
