use std::collections::{BTreeMap, HashMap};

use nalgebra::{SMatrix, SVector};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::e8::orbits::g_generators;
use crate::e8::point::canonical_vertices;
use crate::e8::{regulators_of, E8Model, E8Point, PeriodicTriangulation, RefinedTriangulation, RegulatorKind, RegulatorSet};
use crate::exact::linalg::primitive_integer_row;
use crate::exact::rational::to_f64;
use crate::exact::Rational;

use super::subspace::{invariant_subspace, InvariantSubspace, Mat8};

pub type Vec4 = SVector<f64, 4>;
pub type Mat4 = SMatrix<f64, 4, 4>;
pub type Vec8 = SVector<f64, 8>;

/// A distinct regulator restricted to the invariant subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedRegulator {
    /// Primitive integer coefficients in `(alpha, beta, gamma, delta)`.
    pub row: [BigInt; 4],
    /// Kinds of the full regulators restricting to this row.
    pub kinds: Vec<RegulatorKind>,
    /// Indices into the full regulator list.
    pub members: Vec<usize>,
}

impl RestrictedRegulator {
    pub fn row_f64(&self) -> Vec4 {
        Vec4::from_fn(|k, _| num_traits::ToPrimitive::to_f64(&self.row[k]).unwrap_or(f64::NAN))
    }

    pub fn row_rational(&self) -> [Rational; 4] {
        std::array::from_fn(|k| Rational::from_integer(self.row[k].clone()))
    }

    pub fn evaluate(&self, p: &[Rational; 4]) -> Rational {
        self.row_rational().iter().zip(p).map(|(a, b)| a * b).sum()
    }
}

/// Simplices of the refined triangulation grouped into `G`-orbits.
#[derive(Clone, Debug)]
pub struct SimplexOrbit {
    /// Index of the representative in the refined simplex list.
    pub representative: usize,
    pub size: usize,
}

/// Circumradius constraint of one orbit, precomputed for fast float
/// evaluation: `G(p) = sum_a p_a G_a` is the edge Gram matrix.
#[derive(Clone, Debug)]
pub struct RadiusConstraint {
    pub orbits: Vec<usize>,
    pub edge_grams: [Mat8; 4],
}

#[derive(Clone, Debug)]
pub struct OptimizationProblem {
    pub subspace: InvariantSubspace,
    pub refined: RefinedTriangulation,
    pub regulators: RegulatorSet,
    /// Distinct nonzero restricted rows, sorted.
    pub restricted: Vec<RestrictedRegulator>,
    /// Number of regulators vanishing identically on the subspace.
    pub vanishing_regulators: usize,
    pub orbits: Vec<SimplexOrbit>,
    pub radius_constraints: Vec<RadiusConstraint>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Groups translation-canonical simplices into orbits of the group generated
/// by `g_generators`.
pub fn simplex_orbits(simplices: &[[E8Point; 9]]) -> Vec<SimplexOrbit> {
    let index: HashMap<[E8Point; 9], usize> = simplices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut parent: Vec<usize> = (0..simplices.len()).collect();
    for (i, s) in simplices.iter().enumerate() {
        for g in 0..3 {
            let image = canonical_vertices(s.map(|p| g_generators(&p)[g]));
            if let Some(&j) = index.get(&image) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..simplices.len() {
        *groups.entry(find(&mut parent, i)).or_default() += 1;
    }
    groups
        .into_iter()
        .map(|(representative, size)| SimplexOrbit { representative, size })
        .collect()
}

fn edge_matrix_f64(s: &[E8Point; 9]) -> SMatrix<f64, 8, 8> {
    SMatrix::<f64, 8, 8>::from_fn(|i, j| (s[i + 1].0[j] - s[0].0[j]) as f64 / 2.0)
}

impl RadiusConstraint {
    pub fn new(s: &[E8Point; 9], subspace: &InvariantSubspace, orbit: usize) -> Self {
        let v = edge_matrix_f64(s);
        let edge_grams = std::array::from_fn(|a| {
            let mut p = [0.0; 4];
            p[a] = 1.0;
            v * subspace.embed_f64(&p) * v.transpose()
        });
        RadiusConstraint {
            orbits: vec![orbit],
            edge_grams,
        }
    }

    pub fn gram(&self, p: &Vec4) -> Mat8 {
        self.edge_grams.iter().zip(p.iter()).fold(Mat8::zeros(), |acc, (g, x)| acc + g * *x)
    }

    /// Squared circumradius `r^2 = q^T G^{-1} q / 4`, `q = diag G`.
    pub fn radius_sq(&self, p: &Vec4) -> Option<f64> {
        let g = self.gram(p);
        let q = g.diagonal();
        let y = g.cholesky()?.solve(&q);
        Some(q.dot(&y) / 4.0)
    }

    /// Value, gradient and Hessian of `r^2` in `p`.
    pub fn radius_sq_derivatives(&self, p: &Vec4) -> Option<(f64, Vec4, Mat4)> {
        let g = self.gram(p);
        let chol = g.cholesky()?;
        let q = g.diagonal();
        let y = chol.solve(&q);
        let value = q.dot(&y) / 4.0;
        let mut grad = Vec4::zeros();
        let mut z: [Vec8; 4] = [Vec8::zeros(); 4];
        for a in 0..4 {
            let ga = &self.edge_grams[a];
            let qa = ga.diagonal();
            grad[a] = (2.0 * qa.dot(&y) - y.dot(&(ga * y))) / 4.0;
            z[a] = qa - ga * y;
        }
        let w: [Vec8; 4] = std::array::from_fn(|a| chol.solve(&z[a]));
        let hess = Mat4::from_fn(|a, b| z[a].dot(&w[b]) / 2.0);
        Some((value, grad, hess))
    }
}

impl OptimizationProblem {
    pub fn build(model: &E8Model, t: &PeriodicTriangulation) -> Self {
        let refined = RefinedTriangulation::build(model, t);
        Self::from_refined(refined)
    }

    pub fn from_refined(refined: RefinedTriangulation) -> Self {
        let subspace = invariant_subspace();
        let regulators = regulators_of(&refined);
        let mut rows: BTreeMap<Vec<BigInt>, (Vec<RegulatorKind>, Vec<usize>)> = BTreeMap::new();
        let mut vanishing = 0;
        for (i, r) in regulators.regulators.iter().enumerate() {
            let row = primitive_integer_row(&subspace.restrict(&r.form));
            if row.iter().all(Zero::is_zero) {
                vanishing += 1;
                continue;
            }
            let e = rows.entry(row).or_default();
            if !e.0.contains(&r.kind) {
                e.0.push(r.kind);
            }
            e.1.push(i);
        }
        let restricted = rows
            .into_iter()
            .map(|(row, (kinds, members))| RestrictedRegulator {
                row: std::array::from_fn(|k| row[k].clone()),
                kinds,
                members,
            })
            .collect();
        let simplices: Vec<[E8Point; 9]> = refined.simplices.iter().map(|s| s.vertices).collect();
        let orbits = simplex_orbits(&simplices);
        let radius_constraints = merge_equal_constraints(
            orbits
                .iter()
                .enumerate()
                .map(|(k, o)| RadiusConstraint::new(&simplices[o.representative], &subspace, k))
                .collect(),
        );
        OptimizationProblem {
            subspace,
            refined,
            regulators,
            restricted,
            vanishing_regulators: vanishing,
            orbits,
            radius_constraints,
        }
    }

    pub fn simplex(&self, i: usize) -> &[E8Point; 9] {
        &self.refined.simplices[i].vertices
    }

    pub fn max_radius_sq(&self, p: &Vec4) -> Option<f64> {
        self.radius_constraints
            .iter()
            .map(|c| c.radius_sq(p))
            .try_fold(f64::NEG_INFINITY, |m, r| r.map(|r| m.max(r)))
    }

    pub fn min_regulator(&self, p: &Vec4) -> f64 {
        self.restricted
            .iter()
            .map(|r| r.row_f64().dot(p) / r.row_f64().norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Orbits whose radius functions coincide on the subspace give one constraint.
fn merge_equal_constraints(cs: Vec<RadiusConstraint>) -> Vec<RadiusConstraint> {
    let probes = [
        Vec4::new(1.0, 0.013, 1.02, -0.007),
        Vec4::new(1.1, -0.02, 0.97, 0.011),
        Vec4::new(0.93, 0.031, 1.05, 0.004),
    ];
    let mut out: Vec<(Vec<f64>, RadiusConstraint)> = Vec::new();
    for c in cs {
        let sig: Vec<f64> = probes.iter().map(|p| c.radius_sq(p).unwrap_or(f64::NAN)).collect();
        match out
            .iter_mut()
            .find(|(s, _)| s.iter().zip(&sig).all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0)))
        {
            Some((_, existing)) => existing.orbits.extend(c.orbits),
            None => out.push((sig, c)),
        }
    }
    out.into_iter().map(|(_, c)| c).collect()
}

pub fn to_vec4(p: &[Rational; 4]) -> Vec4 {
    Vec4::from_fn(|k, _| to_f64(&p[k]))
}
