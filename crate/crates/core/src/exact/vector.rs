use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, serde_vec, Rational};
use crate::error::{Error, Result};

/// A coordinate vector with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RVector(#[serde(with = "serde_vec")] Vec<Rational>);

impl RVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard basis vector of dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = super::one();
        v
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| super::int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RVector) -> Result<Rational> {
        self.check_dim(other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn scale(&self, k: &Rational) -> RVector {
        Self(self.0.iter().map(|c| c * k).collect())
    }

    pub fn checked_add(&self, other: &RVector) -> Result<RVector> {
        self.check_dim(other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn checked_sub(&self, other: &RVector) -> Result<RVector> {
        self.check_dim(other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Kronecker product: coordinate `i * b.dim() + j` is `a[i] * b[j]`.
    pub fn tensor(&self, other: &RVector) -> RVector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a * b);
            }
        }
        Self(out)
    }

    /// Sum of a non-empty list of equally sized vectors.
    pub fn sum<'a>(vectors: impl IntoIterator<Item = &'a RVector>, dim: usize) -> Result<RVector> {
        vectors
            .into_iter()
            .try_fold(RVector::zeros(dim), |acc, v| acc.checked_add(v))
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: expected,
            });
        }
        Ok(())
    }
}

/// Free-function form of [`RVector::tensor`].
pub fn tensor(a: &RVector, b: &RVector) -> RVector {
    a.tensor(b)
}

impl Index<usize> for RVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for RVector {
    fn from(v: Vec<Rational>) -> Self {
        Self(v)
    }
}

impl FromIterator<Rational> for RVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

// Operator forms panic on dimension mismatch; use the checked_* methods on
// untrusted input.
impl Add for &RVector {
    type Output = RVector;

    fn add(self, rhs: &RVector) -> RVector {
        self.checked_add(rhs).expect("vector dimensions differ")
    }
}

impl Sub for &RVector {
    type Output = RVector;

    fn sub(self, rhs: &RVector) -> RVector {
        self.checked_sub(rhs).expect("vector dimensions differ")
    }
}

impl Neg for &RVector {
    type Output = RVector;

    fn neg(self) -> RVector {
        RVector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn v(c: &[(i64, i64)]) -> RVector {
        c.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn tensor_with_scalar_identity() {
        let pq = v(&[(2, 7), (5, 7)]);
        assert_eq!(RVector::from_i64(&[1]).tensor(&pq), pq);
    }

    #[test]
    fn tensor_of_basis_vectors() {
        let e0 = RVector::from_i64(&[1, 0]);
        let e1 = RVector::from_i64(&[0, 1]);
        assert_eq!(tensor(&e0, &e1), RVector::from_i64(&[0, 1, 0, 0]));
        assert_eq!(tensor(&e1, &e0), RVector::from_i64(&[0, 0, 1, 0]));
    }

    #[test]
    fn tensor_of_uniform_distributions() {
        let u = v(&[(1, 2), (1, 2)]);
        assert_eq!(u.tensor(&u), v(&[(1, 4), (1, 4), (1, 4), (1, 4)]));
    }

    #[test]
    fn dot_dimension_mismatch() {
        let a = RVector::from_i64(&[1, 2]);
        let b = RVector::from_i64(&[1, 2, 3]);
        assert!(matches!(a.dot(&b), Err(Error::DimensionMismatch { .. })));
        assert_eq!(a.dot(&a).unwrap(), int(5));
    }

    #[test]
    fn display() {
        assert_eq!(v(&[(1, 2), (3, 1)]).to_string(), "(1/2, 3)");
    }
}
