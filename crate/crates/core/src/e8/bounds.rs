use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{format_rational, int, Rational, SymMatrix};
use crate::qform::{circumradius_sq_determinant, covering_bound_sq, covering_density_sq_ratio, gamma_sq, homogeneous_minimum, MomentForm};

use super::cells::{simplices_of_subdivision, simplex_representatives, to_simplex};
use super::model::E8Model;

/// Moment form of all simplices incident to the origin, in standard
/// coordinates. Edges are summed as doubled integer vectors.
pub fn e8_moment_form(model: &E8Model) -> MomentForm {
    let simplices = simplices_of_subdivision(model);
    let acc = simplices
        .par_iter()
        .map(|s| {
            let mut acc = [[0i64; 8]; 8];
            for k in 0..9 {
                for l in k + 1..9 {
                    let e: [i64; 8] = std::array::from_fn(|i| (s.vertices[k].0[i] - s.vertices[l].0[i]) as i64);
                    for i in 0..8 {
                        for j in 0..8 {
                            acc[i][j] += e[i] * e[j];
                        }
                    }
                }
            }
            acc
        })
        .reduce(
            || [[0i64; 8]; 8],
            |mut a, b| {
                for i in 0..8 {
                    for j in 0..8 {
                        a[i][j] += b[i][j];
                    }
                }
                a
            },
        );
    // doubled coordinates contribute a factor 4
    let den = int((4 * simplices.len() * 9) as i64);
    MomentForm {
        matrix: SymMatrix::from_fn(8, |i, j| int(acc[i][j]) / &den),
        simplex_count: simplices.len(),
    }
}

/// Squared covering radius of E8 in standard coordinates: the larger of the
/// simplex circumradius and the cross polytope half-diagonal.
pub fn e8_covering_radius_sq(model: &E8Model) -> Result<Rational> {
    let q = model.standard_form();
    // all Delone simplices are congruent
    let mut mu = match simplex_representatives(model).first() {
        Some(s) => circumradius_sq_determinant(&to_simplex(s), &q)?,
        None => Rational::from_integer(0.into()),
    };
    // a norm-4 diagonal w gives the cross polytope with center w/2 and vertex 0
    if let Some(w) = model.shell4.first() {
        mu = mu.max(Rational::new(w.norm4().into(), 16.into()));
    }
    Ok(mu)
}

#[derive(Clone, Debug, Serialize)]
pub struct E8Bounds {
    pub moment_form_is_inverse_gram: bool,
    pub simplex_count: usize,
    pub det_moment_form: String,
    /// `(Theta_lb / kappa_8)^2`.
    pub lower_bound_sq_ratio: String,
    pub lower_bound_ratio_approx: f64,
    pub mu: String,
    pub lambda: String,
    pub theta_sq_ratio: String,
    pub gamma_sq: String,
}

pub fn e8_bounds(model: &E8Model) -> Result<E8Bounds> {
    let f = e8_moment_form(model);
    let q = model.standard_form();
    let inverse = q.matrix().inverse()?;
    let bound = covering_bound_sq(&f, 8)?;
    let mu = e8_covering_radius_sq(model)?;
    // the basis Gram matrix has the same determinant and minimum as the standard form on E8
    let lambda = homogeneous_minimum(&model.gram);
    Ok(E8Bounds {
        moment_form_is_inverse_gram: f.matrix == inverse,
        simplex_count: f.simplex_count,
        det_moment_form: format_rational(&f.matrix.determinant()),
        lower_bound_sq_ratio: format_rational(&bound),
        lower_bound_ratio_approx: crate::exact::rational::to_f64(&bound).sqrt(),
        mu: format_rational(&mu),
        lambda: format_rational(&lambda),
        theta_sq_ratio: format_rational(&covering_density_sq_ratio(&model.gram, &mu)),
        gamma_sq: format_rational(&gamma_sq(&model.gram, &mu)),
    })
}
