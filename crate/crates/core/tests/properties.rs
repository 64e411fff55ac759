//! Randomised invariants of the exact geometry kernels.

use std::sync::OnceLock;

use covering::e8::cells::to_simplex;
use covering::e8::{build_model, cross_polytope, split_cross_polytope, E8Model};
use covering::exact::{format_rational, int, parse_rational, rat, Pqf, RatMatrix, RatVector, Rational, SymMatrix};
use covering::qform::geometry::{apollonius_radius_sq, circumradius_sq_determinant, circumsphere_solve, Simplex};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn model() -> &'static E8Model {
    static M: OnceLock<E8Model> = OnceLock::new();
    M.get_or_init(build_model)
}

/// `A^T A + I` for a small integer `A`: always positive definite.
fn pqf_from(d: usize, a: &[i64]) -> Pqf {
    let m = SymMatrix::from_fn(d, |i, j| {
        let s: i64 = (0..d).map(|k| a[k * d + i] * a[k * d + j]).sum();
        int(s + i64::from(i == j))
    });
    Pqf::new(m).unwrap()
}

fn pqf_strategy() -> impl Strategy<Value = (usize, Pqf, Vec<Vec<i64>>)> {
    (1usize..=8).prop_flat_map(|d| {
        (
            Just(d),
            prop::collection::vec(-3i64..=3, d * d),
            prop::collection::vec(prop::collection::vec(-4i64..=4, d), d + 1),
        )
            .prop_map(|(d, a, verts)| (d, pqf_from(d, &a), verts))
    })
}

fn cross_volume(d: usize, a: &RatMatrix) -> Rational {
    let fact: i64 = (1..=d as i64).product();
    a.determinant().unwrap().abs() * Rational::new((1i64 << d).into(), fact.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn circumradius_methods_agree((d, q, verts) in pqf_strategy()) {
        let s = match Simplex::from_int_vertices(&verts) {
            Ok(s) => s,
            Err(_) => return Err(TestCaseError::reject("degenerate")),
        };
        prop_assert_eq!(s.dim(), d);
        let solved = circumsphere_solve(&s, &q).unwrap();
        let det = circumradius_sq_determinant(&s, &q).unwrap();
        let apo = apollonius_radius_sq(&s, &q).unwrap();
        prop_assert_eq!(&solved.radius_sq, &det);
        prop_assert_eq!(&solved.radius_sq, &apo);
        for v in s.vertices() {
            prop_assert_eq!(q.matrix().quad(&v.sub(&solved.center)), solved.radius_sq.clone());
        }
    }

    #[test]
    fn circumradius_is_translation_invariant_and_homogeneous(
        (d, q, verts) in pqf_strategy(),
        shift in prop::collection::vec(-5i64..=5, 8),
        c in 1i64..=7,
    ) {
        let Ok(s) = Simplex::from_int_vertices(&verts) else {
            return Err(TestCaseError::reject("degenerate"));
        };
        let r = circumradius_sq_determinant(&s, &q).unwrap();
        let moved = s.translate(&RatVector::from_ints(&shift[..d]));
        prop_assert_eq!(circumradius_sq_determinant(&moved, &q).unwrap(), r.clone());
        let scaled = Pqf::new(q.matrix().scale(&int(c))).unwrap();
        prop_assert_eq!(circumradius_sq_determinant(&s, &scaled).unwrap(), r * int(c));
    }

    #[test]
    fn split_cross_polytopes_partition_volume(
        d in 2usize..=6,
        a in prop::collection::vec(-3i64..=3, 36),
        center in prop::collection::vec(-3i64..=3, 6),
        axis in 0usize..6,
    ) {
        // image of the unit cross polytope under A, split along one diagonal
        let rows: Vec<Vec<Rational>> = (0..d).map(|i| (0..d).map(|j| int(a[i * 6 + j])).collect()).collect();
        let m = RatMatrix::from_rows(rows).unwrap();
        prop_assume!(!m.determinant().unwrap().is_zero());
        let axis = axis % d;
        let c = RatVector::from_ints(&center[..d]);
        let col = |j: usize| RatVector::new((0..d).map(|i| m.get(i, j).clone()).collect());
        let others: Vec<usize> = (0..d).filter(|&j| j != axis).collect();
        let mut total = Rational::zero();
        for mask in 0u32..(1 << (d - 1)) {
            let mut verts = vec![c.add(&col(axis)), c.sub(&col(axis))];
            for (bit, &j) in others.iter().enumerate() {
                verts.push(if mask >> bit & 1 == 1 { c.add(&col(j)) } else { c.sub(&col(j)) });
            }
            total += Simplex::new(verts).unwrap().volume();
        }
        prop_assert_eq!(total, cross_volume(d, &m));
    }

    #[test]
    fn e8_cross_polytope_splits_partition_volume(w in 0usize..2160, diag in 0usize..8) {
        let m = model();
        let p = cross_polytope(m, m.shell4[w]).unwrap();
        let half: Vec<Vec<Rational>> = p.diagonals().iter().map(|x| x.to_rat().scale(&rat(1, 2)).into_inner()).collect();
        let expect = cross_volume(8, &RatMatrix::from_rows(half).unwrap());
        let pieces = split_cross_polytope(&p, p.diagonals()[diag]).unwrap();
        prop_assert_eq!(pieces.len(), 128);
        let sum: Rational = pieces.iter().map(|s| to_simplex(s).volume()).sum();
        prop_assert_eq!(sum, expect);
    }

    #[test]
    fn rationals_round_trip(n in any::<i64>(), dn in 1i64..=i64::MAX) {
        let r = Rational::new(n.into(), dn.into());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn determinant_is_multiplicative(
        d in 1usize..=5,
        a in prop::collection::vec(-9i64..=9, 25),
        b in prop::collection::vec(-9i64..=9, 25),
    ) {
        let mk = |v: &[i64]| RatMatrix::from_fn(d, d, |i, j| int(v[i * 5 + j]));
        let (ma, mb) = (mk(&a), mk(&b));
        let prod = ma.mul(&mb).unwrap();
        prop_assert_eq!(prod.determinant().unwrap(), ma.determinant().unwrap() * mb.determinant().unwrap());
    }
}
