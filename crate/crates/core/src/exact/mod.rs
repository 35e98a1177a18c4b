//! Exact rational linear algebra: scalars, vectors, matrices, rank, solve and
//! cone feasibility.

pub mod lp;
pub mod matrix;
pub mod rational;
pub mod vector;

pub use lp::{cone_feasible, nonneg_solution};
pub use matrix::{rank, solve_linear, RMatrix};
pub use rational::{format_rational, int, inv_pow2, one, parse_rational, rat, zero, Rational};
pub use vector::{tensor, RVector};
