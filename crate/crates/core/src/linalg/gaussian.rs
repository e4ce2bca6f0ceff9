use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// An element `re + im*i` of the Gaussian rationals Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn from_rational(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        Some(acc)
    }

    /// The exponent `k` in 0..8 with `self = exp(2 pi i k / 8)`, when `self`
    /// is one of the four roots of unity lying in Q(i).
    pub fn root_of_unity_exponent(&self) -> Option<u8> {
        let one = BigRational::one();
        let zero = BigRational::zero();
        if self.im == zero {
            if self.re == one {
                return Some(0);
            }
            if self.re == -one.clone() {
                return Some(4);
            }
        } else if self.re == zero {
            if self.im == one {
                return Some(2);
            }
            if self.im == -one {
                return Some(6);
            }
        }
        None
    }

    /// A square root inside Q(i), if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.im.is_zero() {
            return if self.re.is_negative() {
                rational_sqrt(&-self.re.clone()).map(|y| Self::new(BigRational::zero(), y))
            } else {
                rational_sqrt(&self.re).map(Self::from_rational)
            };
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(2.into());
        let x = rational_sqrt(&((&self.re + &modulus) / &two))?;
        let y = &self.im / (&two * &x);
        Some(Self::new(x, y))
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
}

impl From<BigInt> for GaussianRational {
    fn from(v: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(v))
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self * &o.inv().expect("division by zero")
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero, like the rational type it wraps.
    fn div(self, o: Self) -> Self {
        let inv = o.inv().expect("division by zero in Q(i)");
        &self * &inv
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = BigRational::zero();
        match (self.re == zero, self.im == zero) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write_imag(f, &self.im, false),
            (false, false) => {
                write!(f, "{}", self.re)?;
                write_imag(f, &self.im, true)
            }
        }
    }
}

fn write_imag(f: &mut fmt::Formatter<'_>, im: &BigRational, signed: bool) -> fmt::Result {
    let neg = im.is_negative();
    let mag = im.abs();
    let sign = match (neg, signed) {
        (true, _) => "-",
        (false, true) => "+",
        (false, false) => "",
    };
    if mag.is_one() {
        write!(f, "{sign}i")
    } else {
        write!(f, "{sign}{mag}*i")
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
