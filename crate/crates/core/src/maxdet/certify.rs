use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::e8::{E8Point, Regulator};
use crate::error::{Error, Rejection, Result};
use crate::exact::linalg::{bareiss_determinant, nullspace, primitive_integer_row};
use crate::exact::rational::{best_rational_approximation, to_f64};
use crate::exact::{format_rational, int, Pqf, RatVector, Rational, SymMatrix};
use crate::qform::{circumsphere_solve, compare_density_to_decimal, DensityComparison, Simplex, PI_DIGITS};

use super::barrier::FloatOptimum;
use super::problem::OptimizationProblem;
use super::subspace::identity_coordinates;
use crate::e8::feasibility::feasibility_lp;

pub const THETA_THRESHOLD: &str = "3.2013";

/// Values of every regulator at `q` (standard coordinates), computed with
/// integer arithmetic after clearing denominators of `q`.
pub fn evaluate_regulators(regulators: &[Regulator], q: &SymMatrix) -> Vec<Rational> {
    let (qi, den) = q.integer_scaled();
    let small: Option<Vec<Vec<i128>>> = qi.iter().map(|r| r.iter().map(|x| x.to_i128()).collect()).collect();
    regulators
        .par_iter()
        .map(|r| {
            let (ri, rden) = r.form.integer_scaled();
            let exact = || -> BigInt {
                let mut s = BigInt::zero();
                for i in 0..8 {
                    for j in 0..8 {
                        s += &ri[i][j] * &qi[i][j];
                    }
                }
                s
            };
            let num = match &small {
                Some(a) => {
                    let mut s: Option<i128> = Some(0);
                    for i in 0..8 {
                        for j in 0..8 {
                            let rij = ri[i][j].to_i128();
                            s = s.and_then(|s| s.checked_add(rij?.checked_mul(a[i][j])?));
                        }
                    }
                    s.map(BigInt::from).unwrap_or_else(exact)
                }
                None => exact(),
            };
            Rational::new(num, &den * &rden)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct InteriorWitness {
    pub coordinates: [String; 4],
    pub margin: String,
    pub epsilon: String,
    #[serde(skip)]
    pub p: [Rational; 4],
}

/// A rational `G`-invariant form strictly inside the secondary cone:
/// `Q = I + eps X`, with `X` maximizing the minimum of the regulators that
/// vanish at the identity (exact LP) and `eps` halved until every regulator
/// is strictly positive.
pub fn interior_point(problem: &OptimizationProblem) -> Result<InteriorWitness> {
    let id = identity_coordinates();
    let vanishing: Vec<[Rational; 4]> = problem
        .restricted
        .iter()
        .filter(|r| r.evaluate(&id).is_zero())
        .map(|r| r.row_rational())
        .collect();
    let lp = feasibility_lp(&vanishing);
    if !lp.feasible {
        return Err(Error::InfeasibleTriangulation);
    }
    let s = &problem.subspace;
    let mut eps = Rational::one();
    for _ in 0..64 {
        let p: [Rational; 4] = std::array::from_fn(|k| &id[k] + &eps * &lp.direction[k]);
        let ok = problem.restricted.iter().all(|r| r.evaluate(&p).is_positive()) && s.embed(&p).is_positive_definite();
        if ok {
            return Ok(InteriorWitness {
                coordinates: p.clone().map(|x| format_rational(&x)),
                margin: format_rational(&lp.margin),
                epsilon: format_rational(&eps),
                p,
            });
        }
        eps /= int(2);
    }
    Err(Error::InfeasibleTriangulation)
}

#[derive(Clone, Debug)]
pub struct Rationalized {
    pub p: [Rational; 4],
    pub q: SymMatrix,
}

/// Rounds the float optimum onto the face cut out by the active regulators:
/// the point is written in an integer basis of `{r.p = 0 : r active}`, the
/// coordinates are rounded with bounded denominators, and the result lies
/// exactly on the face. Without active regulators the invariant coordinates
/// are rounded directly.
pub fn rationalize(problem: &OptimizationProblem, p: &[f64; 4], active: &[usize], bound: &BigInt) -> Result<Rationalized> {
    let basis: Vec<Vec<Rational>> = if active.is_empty() {
        (0..4).map(|k| RatVector::unit(4, k).into_inner()).collect()
    } else {
        let rows: Vec<RatVector> = active.iter().map(|&i| RatVector::new(problem.restricted[i].row_rational().to_vec())).collect();
        nullspace(&rows, 4)?
            .into_iter()
            .map(|v| primitive_integer_row(v.entries()).into_iter().map(Rational::from_integer).collect())
            .collect()
    };
    if basis.is_empty() {
        return Err(Rejection::NotPositiveDefinite.into());
    }
    // least-squares coordinates of p in the face basis
    let k = basis.len();
    let nf = nalgebra::DMatrix::<f64>::from_fn(4, k, |i, j| to_f64(&basis[j][i]));
    let target = nalgebra::DVector::<f64>::from_column_slice(p);
    let coeffs = (nf.transpose() * &nf)
        .lu()
        .solve(&(nf.transpose() * target))
        .ok_or(Error::Singular)?;
    let c: Vec<Rational> = coeffs.iter().map(|x| best_rational_approximation(*x, bound)).collect();
    let projected: Vec<Rational> = (0..4).map(|i| (0..k).map(|j| &c[j] * &basis[j][i]).sum()).collect();
    let p: [Rational; 4] = std::array::from_fn(|k| projected[k].clone());
    for (i, r) in problem.restricted.iter().enumerate() {
        let v = r.evaluate(&p);
        if v.is_negative() {
            return Err(Rejection::RegulatorViolated {
                index: i,
                kind: r.kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join("+"),
                value: format_rational(&v),
            }
            .into());
        }
    }
    let q = problem.subspace.embed(&p);
    if !q.is_positive_definite() {
        return Err(Rejection::NotPositiveDefinite.into());
    }
    Ok(Rationalized { p, q })
}

/// Exact squared circumradius of a simplex given in doubled coordinates
/// under `Q = Qi / den`, by the bordered determinant formula on the integer
/// edge Gram matrix.
pub fn simplex_radius_sq(vertices: &[E8Point; 9], qi: &[Vec<BigInt>], den: &BigInt) -> Result<Rational> {
    let v: Vec<[i64; 8]> = (1..9).map(|i| std::array::from_fn(|j| (vertices[i].0[j] - vertices[0].0[j]) as i64)).collect();
    // Gi = V Qi V^T = 4 den G
    let vq: Vec<Vec<BigInt>> = v
        .iter()
        .map(|row| (0..8).map(|j| (0..8).map(|k| &qi[k][j] * row[k]).sum()).collect())
        .collect();
    let g: Vec<Vec<BigInt>> = (0..8)
        .map(|a| (0..8).map(|b| (0..8).map(|k| &vq[a][k] * v[b][k]).sum()).collect())
        .collect();
    let det_g = bareiss_determinant(g.clone());
    if det_g.is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    let bordered: Vec<Vec<BigInt>> = (0..9)
        .map(|i| {
            (0..9)
                .map(|j| match (i, j) {
                    (0, 0) => BigInt::zero(),
                    (0, j) => g[j - 1][j - 1].clone(),
                    (i, 0) => g[i - 1][i - 1].clone(),
                    (i, j) => g[i - 1][j - 1].clone(),
                })
                .collect()
        })
        .collect();
    let det_b = bareiss_determinant(bordered);
    Ok(Rational::new(-det_b, det_g * BigInt::from(16) * den))
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub triangulation: Vec<usize>,
    pub q: Vec<Vec<String>>,
    pub interior_witness: Vec<Vec<String>>,
    pub interior_coordinates: [String; 4],
    pub regulator_count: usize,
    pub regulators_vanishing_at_q: usize,
    pub min_positive_regulator: String,
    pub simplex_count: usize,
    pub per_simplex_radius_sq: Vec<String>,
    pub spot_checks: usize,
    pub mu: String,
    pub det: String,
    pub theta_sq_ratio: String,
    pub theta_approx: f64,
    pub comparison: DensityComparison,
    pub pi_digits: String,
}

/// Checks `q` against the triangulation in three exact stages: an interior
/// point exists, every regulator is nonnegative at `q`, and the covering
/// radius is the maximum circumradius over all simplices.
pub fn certify(q: &SymMatrix, problem: &OptimizationProblem, threshold: &str) -> Result<Certificate> {
    // stage i
    let witness = interior_point(problem).map_err(|_| Rejection::NoInteriorPoint)?;
    let wq = problem.subspace.embed(&witness.p);
    let regs = &problem.regulators.regulators;
    if evaluate_regulators(regs, &wq).iter().any(|v| !v.is_positive()) {
        return Err(Rejection::NoInteriorPoint.into());
    }
    // stage ii
    if q.dim() != 8 {
        return Err(Rejection::WrongDimension(q.dim()).into());
    }
    let pqf = Pqf::new(q.clone()).map_err(|_| Rejection::NotPositiveDefinite)?;
    let values = evaluate_regulators(regs, q);
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(Rejection::RegulatorViolated {
            index: i,
            kind: regs[i].kind.name().to_string(),
            value: format_rational(v),
        }
        .into());
    }
    let vanishing = values.iter().filter(|v| v.is_zero()).count();
    let min_positive = values.iter().filter(|v| v.is_positive()).min().cloned().unwrap_or_else(Rational::zero);
    // stage iii
    let (qi, den) = q.integer_scaled();
    let simplices = &problem.refined.simplices;
    let radii: Vec<Rational> = simplices
        .par_iter()
        .map(|s| simplex_radius_sq(&s.vertices, &qi, &den))
        .collect::<Result<_>>()?;
    let spot = 100.min(simplices.len());
    let stride = (simplices.len() / spot.max(1)).max(1);
    for k in 0..spot {
        let i = (k * stride + 7 * k) % simplices.len();
        let s = to_standard_simplex(&simplices[i].vertices)?;
        if circumsphere_solve(&s, &pqf)?.radius_sq != radii[i] {
            return Err(Error::DataIntegrity(format!("circumradius methods disagree on simplex {i}")));
        }
    }
    let mu = radii.iter().max().cloned().ok_or(Error::DegenerateSimplex)?;
    let det = q.determinant();
    let ratio = num_traits::pow(mu.clone(), 8) / &det;
    let comparison = compare_density_to_decimal(&ratio, threshold, 8)?;
    let theta_approx = to_f64(&ratio).sqrt() * super::barrier::KAPPA8;
    Ok(Certificate {
        triangulation: problem.refined.triangulation.orbit_selection.clone(),
        q: q.to_strings(),
        interior_witness: wq.to_strings(),
        interior_coordinates: witness.coordinates,
        regulator_count: regs.len(),
        regulators_vanishing_at_q: vanishing,
        min_positive_regulator: format_rational(&min_positive),
        simplex_count: radii.len(),
        per_simplex_radius_sq: radii.iter().map(format_rational).collect(),
        spot_checks: spot,
        mu: format_rational(&mu),
        det: format_rational(&det),
        theta_sq_ratio: format_rational(&ratio),
        theta_approx,
        comparison,
        pi_digits: PI_DIGITS.to_string(),
    })
}

fn to_standard_simplex(v: &[E8Point; 9]) -> Result<Simplex> {
    Simplex::new(v.iter().map(|p| p.to_rat()).collect())
}

/// Full pipeline output: float optimum, its rationalization and the margin
/// between their densities.
#[derive(Clone, Debug, Serialize)]
pub struct OptimizationReport {
    pub optimum: FloatOptimum,
    pub coordinates: [String; 4],
    pub q: Vec<Vec<String>>,
    pub denominator_bound: String,
    pub theta_rational: f64,
}

pub fn theta_of_rational(problem: &OptimizationProblem, p: &[Rational; 4]) -> Option<f64> {
    let v = super::problem::to_vec4(p);
    super::barrier::theta_of(problem, &v).map(|t| t.2)
}
