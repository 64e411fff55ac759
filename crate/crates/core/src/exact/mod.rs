//! Exact rational arithmetic and linear algebra.

pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod rational;

pub use linalg::{nullspace, rank, RowReducer};
pub use lp::{maximize, maximize_free, LpOutcome};
pub use matrix::{upper_index, MatrixJson, Pqf, RatMatrix, RatVector, SymMatrix};
pub use rational::{format_rational, int, parse_decimal, parse_rational, rat, Rational};
