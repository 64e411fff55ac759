use std::collections::HashSet;

use crate::exact::{int, rat, Pqf, RatMatrix, RatVector, Rational, SymMatrix};
use crate::qform::enumerate_shell;

use super::point::E8Point;

/// E8 in standard coordinates together with a lattice basis, its Gram
/// matrix and the shells of norm 2, 4 and 8.
#[derive(Clone, Debug)]
pub struct E8Model {
    /// Rows generate the lattice.
    pub basis: RatMatrix,
    pub gram: Pqf,
    basis_inv: RatMatrix,
    pub roots: Vec<E8Point>,
    pub shell4: Vec<E8Point>,
    pub shell8: Vec<E8Point>,
    /// `v` with `v/3` the center of an origin-incident Delone simplex.
    pub simplex_centers: Vec<E8Point>,
}

/// Rows: `2e_1`, `e_{i+1} - e_i` for `i = 1..6`, and `(1/2, ..., 1/2)`.
pub fn standard_basis() -> RatMatrix {
    let mut rows = vec![vec![int(0); 8]; 8];
    rows[0][0] = int(2);
    for i in 1..7 {
        rows[i][i - 1] = int(-1);
        rows[i][i] = int(1);
    }
    rows[7] = vec![rat(1, 2); 8];
    RatMatrix::from_rows(rows).expect("8x8")
}

pub fn build_model() -> E8Model {
    let basis = standard_basis();
    let gram = Pqf::new(
        SymMatrix::identity(8)
            .congruence(&basis)
            .expect("square basis"),
    )
    .expect("lattice basis gives a positive definite Gram matrix");
    let basis_inv = basis.inverse().expect("basis is nonsingular");
    let shell = |n: i64| -> Vec<E8Point> {
        let s = enumerate_shell(&gram, &int(n));
        let mut pts: Vec<E8Point> = s
            .vectors
            .iter()
            .map(|x| {
                let v = basis
                    .left_mul_vec(&RatVector::from_ints(x))
                    .expect("dimension");
                E8Point::from_rat(&v).expect("lattice point")
            })
            .collect();
        pts.sort_unstable();
        pts
    };
    let roots = shell(2);
    let shell4 = shell(4);
    let shell8 = shell(8);
    let doubled: HashSet<E8Point> = roots.iter().map(|r| r.scale(2)).collect();
    let simplex_centers = shell8.iter().copied().filter(|v| !doubled.contains(v)).collect();
    E8Model {
        basis,
        gram,
        basis_inv,
        roots,
        shell4,
        shell8,
        simplex_centers,
    }
}

impl E8Model {
    /// Gram matrix of the standard coordinates (the identity).
    pub fn standard_form(&self) -> Pqf {
        Pqf::identity(8)
    }

    pub fn is_member(&self, v: &[Rational]) -> bool {
        E8Point::from_rat(v).is_some_and(|p| p.is_lattice_point())
    }

    /// Coordinates `x` with `v = sum_i x_i b_i`.
    pub fn to_basis(&self, v: &RatVector) -> RatVector {
        self.basis_inv.left_mul_vec(v).expect("dimension 8")
    }

    pub fn from_basis(&self, x: &RatVector) -> RatVector {
        self.basis.left_mul_vec(x).expect("dimension 8")
    }

    /// A form written in standard coordinates, expressed in the lattice basis: `B Q B^T`.
    pub fn form_to_basis(&self, q: &SymMatrix) -> SymMatrix {
        q.congruence(&self.basis).expect("8x8")
    }

    /// Inverse of [`Self::form_to_basis`].
    pub fn form_from_basis(&self, q: &SymMatrix) -> SymMatrix {
        q.congruence(&self.basis_inv).expect("8x8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::homogeneous_minimum;

    #[test]
    fn model_invariants() {
        let m = build_model();
        assert_eq!(m.gram.determinant(), int(1));
        assert_eq!(homogeneous_minimum(&m.gram), int(2));
        assert_eq!(m.roots.len(), 240);
        assert_eq!(m.shell4.len(), 2160);
        assert_eq!(m.shell8.len(), 17520);
        assert_eq!(m.simplex_centers.len(), 17280);
        assert!(m.roots.iter().chain(&m.shell4).all(|p| p.is_lattice_point()));
        assert!(m.roots.iter().all(|p| p.norm4() == 8));
        assert!(m.is_member(&RatVector::from_ints(&[1, 1, 0, 0, 0, 0, 0, 0])));
        assert!(m.is_member(&RatVector::new(vec![rat(1, 2); 8])));
        assert!(!m.is_member(&RatVector::from_ints(&[1, 0, 0, 0, 0, 0, 0, 0])));
        let v = RatVector::new(vec![rat(1, 2); 8]);
        assert_eq!(m.from_basis(&m.to_basis(&v)), v);
        let g = m.form_to_basis(&SymMatrix::identity(8));
        assert_eq!(&g, m.gram.matrix());
        assert_eq!(m.form_from_basis(&g), SymMatrix::identity(8));
    }
}
