//! Exact feasibility over finitely generated cones.
//!
//! Phase-one simplex on a dense rational tableau with Bland's rule, which
//! rules out cycling, so the search always terminates. The instances built by
//! this crate have at most a few hundred columns.

use num_traits::{One, Signed, Zero};

use super::matrix::RMatrix;
use super::rational::Rational;
use super::vector::RVector;
use crate::error::{Error, Result};

/// Finds `x >= 0` with `a · x = b`, or `None` if no such `x` exists.
pub fn nonneg_solution(a: &RMatrix, b: &RVector) -> Result<Option<RVector>> {
    if b.dim() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.dim(),
        });
    }
    Ok(Tableau::phase_one(a, b).solve())
}

/// Looks for non-negative weights `c` such that `Σ c[i] · generators[i]`
/// satisfies every equality `⟨v, Σ c·gen⟩ = r` in `constraints`.
///
/// Returns the weights when feasible and `None` when the constraints cannot be
/// met inside the cone.
pub fn cone_feasible(
    generators: &[RVector],
    constraints: &[(RVector, Rational)],
) -> Result<Option<Vec<Rational>>> {
    let dim = generators
        .first()
        .map(RVector::dim)
        .or_else(|| constraints.first().map(|(v, _)| v.dim()))
        .unwrap_or(0);
    for v in generators.iter().chain(constraints.iter().map(|(v, _)| v)) {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
    }

    let rows: Vec<RVector> = constraints
        .iter()
        .map(|(v, _)| generators.iter().map(|g| v.dot(g)).collect::<Result<RVector>>())
        .collect::<Result<_>>()?;
    let b: RVector = constraints.iter().map(|(_, r)| r.clone()).collect();

    if generators.is_empty() {
        return Ok(b.is_zero().then(Vec::new));
    }
    let a = RMatrix::from_rows(&rows)?;
    if constraints.is_empty() {
        return Ok(Some(vec![Rational::zero(); generators.len()]));
    }
    Ok(nonneg_solution(&a, &b)?.map(RVector::into_coords))
}

struct Tableau {
    /// Constraint rows; the last column holds the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs of the phase-one objective, followed by its negated value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    structural: usize,
}

impl Tableau {
    fn phase_one(a: &RMatrix, b: &RVector) -> Self {
        let m = a.rows();
        let n = a.cols();
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        for r in 0..m {
            let flip = b[r].is_negative();
            let mut row = Vec::with_capacity(width);
            for c in 0..n {
                let v = a.get(r, c).clone();
                row.push(if flip { -v } else { v });
            }
            for k in 0..m {
                row.push(if k == r { Rational::one() } else { Rational::zero() });
            }
            row.push(if flip { -b[r].clone() } else { b[r].clone() });
            rows.push(row);
        }

        // Minimise the sum of artificials: reduced cost of column j is
        // minus the column sum over all rows.
        let mut cost = vec![Rational::zero(); width];
        for row in &rows {
            for c in 0..n {
                cost[c] -= &row[c];
            }
            cost[width - 1] -= &row[width - 1];
        }

        Self {
            rows,
            cost,
            basis: (n..n + m).collect(),
            structural: n,
        }
    }

    fn width(&self) -> usize {
        self.cost.len()
    }

    fn solve(mut self) -> Option<RVector> {
        while let Some(col) = self.entering() {
            let Some(row) = self.leaving(col) else {
                // Phase-one objective is bounded below by zero.
                unreachable!("phase-one simplex cannot be unbounded");
            };
            self.pivot(row, col);
        }
        let rhs = self.width() - 1;
        if !self.cost[rhs].is_zero() {
            return None;
        }
        let mut x = vec![Rational::zero(); self.structural];
        for (r, &var) in self.basis.iter().enumerate() {
            if var < self.structural {
                x[var] = self.rows[r][rhs].clone();
            }
        }
        Some(x.into())
    }

    /// Bland: lowest-index column with negative reduced cost.
    fn entering(&self) -> Option<usize> {
        (0..self.width() - 1).find(|&c| self.cost[c].is_negative())
    }

    /// Minimum-ratio row; ties go to the lowest-index basic variable.
    fn leaving(&self, col: usize) -> Option<usize> {
        let rhs = self.width() - 1;
        let mut best: Option<(usize, Rational)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[col];
            let better = match &best {
                None => true,
                Some((br, bratio)) => {
                    ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.width();
        let inv = self.rows[row][col].recip();
        for c in 0..width {
            if !self.rows[row][c].is_zero() {
                self.rows[row][c] = &self.rows[row][c] * &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for c in 0..width {
                if !pivot_row[c].is_zero() {
                    other[c] -= &factor * &pivot_row[c];
                }
            }
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for c in 0..width {
                if !pivot_row[c].is_zero() {
                    self.cost[c] -= &factor * &pivot_row[c];
                }
            }
        }
        self.basis[row] = col;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn basis_cone_with_normalisation() {
        let gens = [RVector::basis(2, 0), RVector::basis(2, 1)];
        let c = cone_feasible(&gens, &[(RVector::from_i64(&[1, 1]), int(1))])
            .unwrap()
            .unwrap();
        assert_eq!(c, vec![int(1), int(0)]);
    }

    #[test]
    fn single_ray_cannot_reach_other_axis() {
        let gens = [RVector::from_i64(&[1, 0])];
        let res = cone_feasible(&gens, &[(RVector::from_i64(&[0, 1]), int(1))]).unwrap();
        assert_eq!(res, None);
    }

    #[test]
    fn negative_rhs_is_handled() {
        let gens = [RVector::from_i64(&[-1, 0]), RVector::from_i64(&[0, 1])];
        let c = cone_feasible(&gens, &[(RVector::from_i64(&[1, 0]), rat(-3, 2))])
            .unwrap()
            .unwrap();
        assert_eq!(c, vec![rat(3, 2), int(0)]);
    }

    #[test]
    fn redundant_constraints() {
        let gens = [RVector::from_i64(&[1, 1]), RVector::from_i64(&[1, -1])];
        let cons = [
            (RVector::from_i64(&[1, 0]), int(2)),
            (RVector::from_i64(&[2, 0]), int(4)),
            (RVector::from_i64(&[0, 1]), int(0)),
        ];
        let c = cone_feasible(&gens, &cons).unwrap().unwrap();
        assert_eq!(c, vec![int(1), int(1)]);
    }

    #[test]
    fn no_generators() {
        let cons = [(RVector::from_i64(&[1]), int(0))];
        assert_eq!(cone_feasible(&[], &cons).unwrap(), Some(vec![]));
        let cons = [(RVector::from_i64(&[1]), int(1))];
        assert_eq!(cone_feasible(&[], &cons).unwrap(), None);
    }

    #[test]
    fn mismatched_dimensions() {
        let gens = [RVector::from_i64(&[1, 0])];
        let cons = [(RVector::from_i64(&[1, 0, 0]), int(1))];
        assert!(cone_feasible(&gens, &cons).is_err());
    }
}
