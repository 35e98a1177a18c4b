use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use super::vector::RVector;
use crate::error::{Error, Result};

/// Dense row-major matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<RVector>", into = "Vec<RVector>")]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors, which must all share one length.
    pub fn from_rows(rows: &[RVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, RVector::dim);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.dim(),
                });
            }
            entries.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<RVector> = rows.iter().map(|r| RVector::from_i64(r)).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> RVector {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec().into()
    }

    pub fn row_vectors(&self) -> Vec<RVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &RVector) -> Result<RVector> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        (0..self.rows).map(|r| self.row(r).dot(v)).collect::<Result<Vec<_>>>().map(Into::into)
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = RMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact rank by fraction-free (Bareiss) elimination.
    ///
    /// Each row is first scaled to integers by the lcm of its denominators;
    /// elimination then stays in `BigInt` and every division is exact.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| integer_row(&self.entries[r * self.cols..(r + 1) * self.cols]))
            .collect();
        let mut rank = 0;
        let mut prev_pivot = BigInt::one();
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank][col].clone();
            for r in rank + 1..self.rows {
                let factor = a[r][col].clone();
                for c in col..self.cols {
                    let v = (&pivot * &a[r][c] - &factor * &a[rank][c]) / &prev_pivot;
                    a[r][c] = v;
                }
            }
            prev_pivot = pivot;
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Solves `self · x = b` exactly.
    ///
    /// Returns `Ok(None)` when the system is inconsistent. For an
    /// underdetermined system the free variables are pinned to zero, so the
    /// returned particular solution is deterministic.
    pub fn solve(&self, b: &RVector) -> Result<Option<RVector>> {
        if b.dim() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.dim(),
            });
        }
        let width = self.cols + 1;
        let mut aug: Vec<Vec<Rational>> = (0..self.rows)
            .map(|r| {
                let mut row = self.entries[r * self.cols..(r + 1) * self.cols].to_vec();
                row.push(b[r].clone());
                row
            })
            .collect();

        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !aug[r][col].is_zero()) else {
                continue;
            };
            aug.swap(rank, p);
            let inv = aug[rank][col].recip();
            for c in col..width {
                aug[rank][c] = &aug[rank][c] * &inv;
            }
            for r in 0..self.rows {
                if r == rank || aug[r][col].is_zero() {
                    continue;
                }
                let factor = aug[r][col].clone();
                for c in col..width {
                    let delta = &factor * &aug[rank][c];
                    aug[r][c] -= delta;
                }
            }
            pivots.push(col);
            rank += 1;
        }

        if aug[rank..].iter().any(|row| !row[self.cols].is_zero()) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &col) in pivots.iter().enumerate() {
            x[col] = aug[r][self.cols].clone();
        }
        Ok(Some(x.into()))
    }
}

/// Free-function form of [`RMatrix::rank`].
pub fn rank(m: &RMatrix) -> usize {
    m.rank()
}

/// Free-function form of [`RMatrix::solve`].
pub fn solve_linear(m: &RMatrix, b: &RVector) -> Result<Option<RVector>> {
    m.solve(b)
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect()
}

impl TryFrom<Vec<RVector>> for RMatrix {
    type Error = Error;

    fn try_from(rows: Vec<RVector>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<RMatrix> for Vec<RVector> {
    fn from(m: RMatrix) -> Self {
        m.row_vectors()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(rank(&RMatrix::identity(3)), 3);
        assert_eq!(rank(&RMatrix::zeros(2, 4)), 0);
    }

    #[test]
    fn rank_of_classical_product_states() {
        // point masses (1,0),(0,1) tensored pairwise
        let e0 = RVector::from_i64(&[1, 0]);
        let e1 = RVector::from_i64(&[0, 1]);
        let rows: Vec<RVector> = [&e0, &e1]
            .iter()
            .flat_map(|a| [&e0, &e1].map(|b| a.tensor(b)))
            .collect();
        assert_eq!(RMatrix::from_rows(&rows).unwrap().rank(), 4);
    }

    #[test]
    fn rank_with_fractions_and_dependence() {
        let m = RMatrix::from_rows(&[
            vec![rat(1, 2), rat(1, 3), int(1)].into(),
            vec![int(3), int(2), int(6)].into(),
            vec![rat(1, 7), int(0), int(0)].into(),
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_identity() {
        let b = RVector::from_i64(&[1, 2]);
        assert_eq!(RMatrix::identity(2).solve(&b).unwrap(), Some(b));
    }

    #[test]
    fn solve_underdetermined_pins_free_variables() {
        let m = RMatrix::from_i64(&[&[1, 1]]).unwrap();
        let x = m.solve(&RVector::from_i64(&[1])).unwrap().unwrap();
        assert_eq!(x, RVector::from_i64(&[1, 0]));
    }

    #[test]
    fn solve_inconsistent() {
        let m = RMatrix::from_i64(&[&[1], &[1]]).unwrap();
        assert_eq!(m.solve(&RVector::from_i64(&[0, 1])).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = RMatrix::identity(2);
        assert!(m.solve(&RVector::from_i64(&[1, 2, 3])).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = [RVector::from_i64(&[1, 2]), RVector::from_i64(&[1])];
        assert!(RMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn matrix_product() {
        let a = RMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(a.mul(&a).unwrap(), RMatrix::identity(2));
        let v = RVector::from_i64(&[3, 4]);
        assert_eq!(a.mul_vec(&v).unwrap(), RVector::from_i64(&[4, 3]));
    }
}
