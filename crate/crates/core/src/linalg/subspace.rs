use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Field, IntMatrix, Matrix, RationalMatrix};
use crate::error::{Error, Result};

/// A linear subspace stored by its reduced row echelon basis, so that two
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Field> Subspace<T> {
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<T>>) -> Self {
        if vectors.is_empty() {
            return Self { ambient, basis: Vec::new() };
        }
        let m = Matrix::from_rows(vectors).expect("vectors of equal length");
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn contains(&self, v: &[T]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).expect("equal lengths").rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::from_vectors(self.ambient, v)
    }
}

/// Trace average `(1/|K|) sum tr(k)` of a finite matrix group.
pub fn invariant_dimension(elements: &[IntMatrix]) -> Result<BigRational> {
    check_group(elements)?;
    let mut total = BigInt::zero();
    for k in elements {
        total += k.trace()?;
    }
    Ok(BigRational::new(total, BigInt::from(elements.len())))
}

/// Fixed subspace of a finite matrix group, computed as the image of the
/// averaging projector. Its dimension is cross-checked against the trace.
pub fn fixed_subspace(elements: &[IntMatrix]) -> Result<Subspace<BigRational>> {
    let n = check_group(elements)?;
    let mut sum = RationalMatrix::zeros(n, n);
    for k in elements {
        sum = sum.add(&k.to_rational())?;
    }
    let proj = sum.scale(&BigRational::new(BigInt::one(), BigInt::from(elements.len())));
    let space = proj.column_space();
    let tr = proj.trace()?;
    if tr != BigRational::from_integer(space.dim().into()) {
        return Err(Error::Invariant(format!(
            "projector trace {tr} differs from image dimension {}",
            space.dim()
        )));
    }
    Ok(space)
}

/// Fixed subspace as the joint kernel of `k - I`.
pub fn fixed_subspace_by_kernels(elements: &[IntMatrix]) -> Result<Subspace<BigRational>> {
    let n = check_group(elements)?;
    let id = RationalMatrix::identity(n);
    let mut stacked = RationalMatrix::zeros(0, n);
    for k in elements {
        stacked = stacked.stack(&k.to_rational().sub(&id)?)?;
    }
    Ok(stacked.kernel())
}

fn check_group(elements: &[IntMatrix]) -> Result<usize> {
    let first = elements.first().ok_or_else(|| Error::InvalidInput("empty group".into()))?;
    let n = first.rows();
    for k in elements {
        if !k.is_square() {
            return Err(Error::NotSquare { rows: k.rows(), cols: k.cols() });
        }
        if k.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: k.rows() });
        }
    }
    let set: BTreeSet<&IntMatrix> = elements.iter().collect();
    if set.len() != elements.len() {
        return Err(Error::InvalidInput("repeated group element".into()));
    }
    for a in elements {
        for b in elements {
            if !set.contains(&a.mul(b)?) {
                return Err(Error::NotClosed);
            }
        }
    }
    Ok(n)
}
