use serde::Serialize;

use super::{Exponent, LaurentPoly};
use crate::error::{Error, Result};
use crate::fan::Cone;
use crate::linalg::{GaussianRational, IntMatrix};
use crate::polytope::{dot, Point};

/// Affine coordinates attached to a lattice basis `v_1..v_4`: the patch
/// coordinate `X_j` is the character of the dual basis vector `u_j`, so
/// `x_i = prod_j X_j^(v_j)_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    basis: Vec<Point>,
    dual: Vec<Point>,
}

impl Chart {
    pub fn from_basis(basis: Vec<Point>) -> Result<Self> {
        if basis.len() != 4 || basis.iter().any(|v| v.len() != 4) {
            return Err(Error::DimensionMismatch { expected: 4, got: basis.len() });
        }
        let m = IntMatrix::from_i64_rows(&basis)?;
        let det = m.determinant()?;
        if det.magnitude() != &1u32.into() {
            return Err(Error::NotSmooth(format!("basis has determinant {det}")));
        }
        // Columns of the inverse are the dual basis.
        let inv = m.to_rational().inverse()?;
        let dual = (0..4)
            .map(|j| {
                (0..4)
                    .map(|i| {
                        let v = inv.get(i, j);
                        i64::try_from(v.to_integer()).expect("unimodular inverse is integral")
                    })
                    .collect()
            })
            .collect();
        Ok(Self { basis, dual })
    }

    /// The chart of a smooth maximal cone, generators in sorted order.
    pub fn from_cone(cone: &Cone) -> Result<Self> {
        if cone.generators().len() != 4 || !cone.is_smooth() {
            return Err(Error::NotSmooth(format!("{:?}", cone.generators())));
        }
        Self::from_basis(cone.generators().to_vec())
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    /// `u_j`, with `X_j = x^(u_j)`.
    pub fn dual_basis(&self) -> &[Point] {
        &self.dual
    }

    /// Patch exponent of the torus monomial `x^m`.
    pub fn to_patch(&self, m: &Exponent) -> Exponent {
        std::array::from_fn(|j| dot(&self.basis[j], m))
    }

    /// Torus exponent of the patch monomial `X^n`.
    pub fn to_torus(&self, n: &Exponent) -> Exponent {
        std::array::from_fn(|i| (0..4).map(|j| n[j] * self.dual[j][i]).sum())
    }
}

/// A section written in patch coordinates after multiplying by the torus
/// monomial `x^clearing`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchPolynomial {
    pub polynomial: LaurentPoly,
    pub clearing: Exponent,
}

/// Substitutes the patch coordinates and clears denominators with the
/// smallest monomial that does so.
pub fn restrict_to_chart(p: &LaurentPoly, chart: &Chart) -> PatchPolynomial {
    let in_patch = p.transform(|m| chart.to_patch(m), |_| GaussianRational::from(1));
    let shift = in_patch.min_exponent().map_or([0; 4], |m| m.map(|e| (-e).max(0)));
    let clearing = chart.to_torus(&shift);
    PatchPolynomial { polynomial: in_patch.shift(&shift), clearing }
}

pub fn restrict_to_patch(p: &LaurentPoly, cone: &Cone) -> Result<PatchPolynomial> {
    Ok(restrict_to_chart(p, &Chart::from_cone(cone)?))
}

impl PatchPolynomial {
    /// Rewrites the polynomial back in torus coordinates; equals the
    /// original section times `x^clearing`.
    pub fn back_substitute(&self, chart: &Chart) -> LaurentPoly {
        self.polynomial.transform(|n| chart.to_torus(n), |_| GaussianRational::from(1))
    }
}
