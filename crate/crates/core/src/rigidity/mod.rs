//! Rigidity systems: linear constraints on a symmetric perturbation `C`
//! forced by keeping orthogonal pairs of minimal vectors orthogonal.
//!
//! For the Leech lattice the relevant pairs come from norm-4 vectors of shape
//! `(+-4, +-4, 0^22)/sqrt 8`, and for E8 from roots `+-e_i +- e_j`. Both reduce
//! to the same equations in the coordinates `c_ij`:
//! - `(e_i + e_j) C (e_i - e_j) = c_ii - c_jj = 0`;
//! - `(e_i + s e_j) C (e_k + t e_l) = c_ik + t c_il + s c_jk + s t c_jl = 0`
//!   for distinct `i, j, k, l`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::exact::linalg::RowReducer;
use crate::exact::{upper_index, RatVector, Rational};
use num_traits::{One, Zero};

pub type SparseRow = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
pub struct RigiditySystem {
    pub dimension: usize,
    /// Sparse rows over the upper-triangle coordinates of `C`, sorted,
    /// each normalised so its first coefficient is positive.
    pub rows: Vec<SparseRow>,
}

impl RigiditySystem {
    pub fn ambient_dim(&self) -> usize {
        self.dimension * (self.dimension + 1) / 2
    }

    pub fn dense_rows(&self) -> Vec<RatVector> {
        let n = self.ambient_dim();
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![Rational::zero(); n];
                for &(c, x) in r {
                    v[c] += Rational::from_integer(x.into());
                }
                RatVector::new(v)
            })
            .collect()
    }
}

fn normalise(mut row: SparseRow) -> Option<SparseRow> {
    row.sort_unstable();
    let mut merged: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match merged.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|e| e.1 != 0);
    let first = merged.first()?;
    if first.1 < 0 {
        merged.iter_mut().for_each(|e| e.1 = -e.1);
    }
    Some(merged)
}

pub fn build_system(d: usize) -> RigiditySystem {
    assert!(d >= 2, "rigidity system needs d >= 2");
    let u = |i: usize, j: usize| upper_index(d, i.min(j), i.max(j));
    let mut rows = BTreeSet::new();
    for i in 0..d {
        for j in i + 1..d {
            rows.extend(normalise(vec![(u(i, i), 1), (u(j, j), -1)]));
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                for l in k + 1..d {
                    if [k, l].iter().any(|x| *x == i || *x == j) || (k, l) < (i, j) {
                        continue;
                    }
                    for s in [1i64, -1] {
                        for t in [1i64, -1] {
                            rows.extend(normalise(vec![(u(i, k), 1), (u(i, l), t), (u(j, k), s), (u(j, l), s * t)]));
                        }
                    }
                }
            }
        }
    }
    RigiditySystem {
        dimension: d,
        rows: rows.into_iter().collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub dimension: usize,
    pub ambient_dim: usize,
    pub constraint_rows: usize,
    pub rank: usize,
    pub nullspace_dim: usize,
    pub identity_satisfies_all: bool,
    pub basis_is_identity: bool,
}

fn identity_vector(d: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); d * (d + 1) / 2];
    for i in 0..d {
        v[upper_index(d, i, i)] = Rational::one();
    }
    v
}

/// Nullspace of the system. Rows are reduced until the rank reaches
/// `ambient - 1`, which is the maximum once the identity is known to satisfy
/// every row.
pub fn solution_space(s: &RigiditySystem) -> RigidityReport {
    let d = s.dimension;
    let n = s.ambient_dim();
    let diag: Vec<bool> = (0..n).map(|c| (0..d).any(|i| upper_index(d, i, i) == c)).collect();
    let identity_satisfies_all = s
        .rows
        .iter()
        .all(|r| r.iter().filter(|e| diag[e.0]).map(|e| e.1).sum::<i64>() == 0);
    let mut reducer = RowReducer::new(n);
    for r in &s.rows {
        if identity_satisfies_all && reducer.rank() + 1 == n {
            break;
        }
        reducer.push_sparse(r);
    }
    let null = reducer.nullspace();
    let basis_is_identity = null.len() == 1 && {
        let v = null[0].entries();
        let id = identity_vector(d);
        let k = &v[upper_index(d, 0, 0)];
        !k.is_zero() && v.iter().zip(&id).all(|(a, b)| *a == k * b)
    };
    RigidityReport {
        dimension: d,
        ambient_dim: n,
        constraint_rows: s.rows.len(),
        rank: reducer.rank(),
        nullspace_dim: null.len(),
        identity_satisfies_all,
        basis_is_identity,
    }
}

pub fn solution_space_dim(s: &RigiditySystem) -> usize {
    solution_space(s).nullspace_dim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::linalg;

    #[test]
    fn d2_only_diagonal_rows() {
        let s = build_system(2);
        assert_eq!(s.rows, vec![vec![(0, 1), (2, -1)]]);
        let r = solution_space(&s);
        assert_eq!(r.nullspace_dim, 2);
        assert!(!r.basis_is_identity);
    }

    #[test]
    fn ladder() {
        for d in 4..=8 {
            let s = build_system(d);
            let r = solution_space(&s);
            assert!(r.identity_satisfies_all);
            assert_eq!(r.nullspace_dim, 1, "d = {d}");
            assert!(r.basis_is_identity);
            // brute-force dense kernel agrees with the early-stopped reducer
            let full = linalg::nullspace(&s.dense_rows(), s.ambient_dim()).unwrap();
            assert_eq!(full.len(), 1);
        }
    }

    #[test]
    fn d3_has_no_four_index_rows() {
        let s = build_system(3);
        assert_eq!(s.rows.len(), 3);
        assert_eq!(solution_space_dim(&s), 4);
    }

    #[test]
    fn ambient_dims() {
        assert_eq!(build_system(8).ambient_dim(), 36);
        assert_eq!(build_system(24).ambient_dim(), 300);
    }
}
