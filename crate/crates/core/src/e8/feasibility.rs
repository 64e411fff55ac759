use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::exact::linalg::primitive_integer_row;
use crate::exact::{int, maximize_free, LpOutcome, Rational};
use crate::maxdet::subspace::invariant_subspace;

use super::classes::DiagonalClass;
use super::regulators::type3_regulators;
use super::triangulation::PeriodicTriangulation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Optimal `t` of `max t : r.p >= t, |p_i| <= 1, t <= 1`.
    pub margin: Rational,
    /// Invariant-subspace direction attaining the margin.
    pub direction: [Rational; 4],
}

/// Distinct restricted rows (primitive integer directions) of the
/// closed-form regulators of the split cross polytopes.
pub fn type3_rows(classes: &[DiagonalClass], t: &PeriodicTriangulation) -> Vec<[Rational; 4]> {
    let s = invariant_subspace();
    let set: BTreeSet<Vec<num_bigint::BigInt>> = type3_regulators(classes, t)
        .iter()
        .map(|r| primitive_integer_row(&s.restrict(&r.form)))
        .collect();
    set.into_iter()
        .map(|v| std::array::from_fn(|k| Rational::from_integer(v[k].clone())))
        .collect()
}

/// Exact LP on the invariant subspace: is there a `G`-invariant direction
/// strictly positive on every split-cross-polytope regulator?
pub fn delone_feasible(classes: &[DiagonalClass], t: &PeriodicTriangulation) -> Feasibility {
    let rows = type3_rows(classes, t);
    feasibility_lp(&rows)
}

pub fn feasibility_lp(rows: &[[Rational; 4]]) -> Feasibility {
    // variables (p_0..p_3, t); maximize t
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in rows {
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        let mut row: Vec<Rational> = r.iter().map(|x| -x).collect();
        row.push(Rational::one());
        a.push(row);
        b.push(Rational::zero());
    }
    for k in 0..4 {
        for sign in [1, -1] {
            let mut row = vec![Rational::zero(); 5];
            row[k] = int(sign);
            a.push(row);
            b.push(Rational::one());
        }
    }
    let mut cap = vec![Rational::zero(); 5];
    cap[4] = Rational::one();
    a.push(cap);
    b.push(Rational::one());
    let mut c = vec![Rational::zero(); 5];
    c[4] = Rational::one();
    match maximize_free(&c, &a, &b) {
        LpOutcome::Optimal { x, value } => Feasibility {
            feasible: value.is_positive() && !rows.iter().any(|r| r.iter().all(Zero::is_zero)),
            margin: value,
            direction: std::array::from_fn(|k| x[k].clone()),
        },
        _ => Feasibility {
            feasible: false,
            margin: Rational::zero(),
            direction: std::array::from_fn(|_| Rational::zero()),
        },
    }
}
