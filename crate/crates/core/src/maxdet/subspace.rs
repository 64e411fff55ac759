use nalgebra::SMatrix;
use num_traits::Zero;

use crate::exact::{int, rat, Rational, SymMatrix};

pub type Mat8 = SMatrix<f64, 8, 8>;

/// Symmetric 8x8 matrices fixed by permutations of coordinates 2..8:
/// `Q_11 = alpha`, `Q_1i = beta`, `Q_ii = gamma`, `Q_ij = delta` (`i, j >= 2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSubspace {
    pub basis: [SymMatrix; 4],
}

pub fn invariant_subspace() -> InvariantSubspace {
    let pattern = |k: usize| {
        SymMatrix::from_fn(8, move |i, j| {
            let which = match (i, j) {
                (0, 0) => 0,
                (0, _) => 1,
                _ if i == j => 2,
                _ => 3,
            };
            if which == k {
                int(1)
            } else {
                int(0)
            }
        })
    };
    InvariantSubspace {
        basis: [pattern(0), pattern(1), pattern(2), pattern(3)],
    }
}

impl InvariantSubspace {
    pub fn embed(&self, p: &[Rational; 4]) -> SymMatrix {
        SymMatrix::from_fn(8, |i, j| match (i, j) {
            (0, 0) => p[0].clone(),
            (0, _) => p[1].clone(),
            _ if i == j => p[2].clone(),
            _ => p[3].clone(),
        })
    }

    pub fn embed_f64(&self, p: &[f64; 4]) -> Mat8 {
        Mat8::from_fn(|i, j| match (i, j) {
            (0, 0) => p[0],
            (0, _) | (_, 0) => p[1],
            _ if i == j => p[2],
            _ => p[3],
        })
    }

    /// Average over the symmetric group on coordinates 2..8.
    pub fn project(&self, q: &SymMatrix) -> [Rational; 4] {
        let mut beta = Rational::zero();
        let mut gamma = Rational::zero();
        let mut delta = Rational::zero();
        for i in 1..8 {
            beta += q.get(0, i);
            gamma += q.get(i, i);
            for j in i + 1..8 {
                delta += q.get(i, j);
            }
        }
        [q.get(0, 0).clone(), beta * rat(1, 7), gamma * rat(1, 7), delta * rat(1, 21)]
    }

    /// Restriction of the linear form `Q -> tr(R Q)` to the subspace.
    pub fn restrict(&self, r: &SymMatrix) -> [Rational; 4] {
        std::array::from_fn(|k| r.trace_product(&self.basis[k]))
    }

    pub fn contains(&self, q: &SymMatrix) -> bool {
        self.embed(&self.project(q)) == *q
    }
}

/// Coordinates of the standard form (the identity).
pub fn identity_coordinates() -> [Rational; 4] {
    [int(1), int(0), int(1), int(0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatMatrix;

    fn perm_matrix(p: &[usize; 8]) -> RatMatrix {
        RatMatrix::from_fn(8, 8, |i, j| if p[i] == j { int(1) } else { int(0) })
    }

    #[test]
    fn basis_is_invariant() {
        let s = invariant_subspace();
        let gens = [perm_matrix(&[0, 2, 1, 3, 4, 5, 6, 7]), perm_matrix(&[0, 7, 1, 2, 3, 4, 5, 6])];
        for b in &s.basis {
            for g in &gens {
                assert_eq!(&b.congruence(g).unwrap(), b);
            }
        }
        let id = SymMatrix::identity(8);
        assert_eq!(s.project(&id), identity_coordinates());
        assert!(s.contains(&id));
        let p = [rat(1, 2), int(3), rat(-1, 5), int(7)];
        assert_eq!(s.project(&s.embed(&p)), p);
        let odd = SymMatrix::from_fn(8, |i, j| int((i * 3 + j) as i64));
        assert!(!s.contains(&odd));
        // restriction agrees with evaluation on embedded points
        let r = SymMatrix::from_fn(8, |i, j| int((i + 2 * j) as i64 % 5 - 2));
        let c = s.restrict(&r);
        let v: Rational = c.iter().zip(&p).map(|(a, b)| a * b).sum();
        assert_eq!(v, r.trace_product(&s.embed(&p)));
    }
}
