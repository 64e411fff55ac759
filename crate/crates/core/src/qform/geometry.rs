use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, Pqf, RatMatrix, RatVector, Rational, SymMatrix};

use super::shell::homogeneous_minimum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<RatVector>,
}

impl Simplex {
    /// `d + 1` affinely independent points in dimension `d`.
    pub fn new(vertices: Vec<RatVector>) -> Result<Self> {
        let d = vertices.first().map_or(0, RatVector::dim);
        if vertices.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                found: vertices.len(),
            });
        }
        if let Some(v) = vertices.iter().find(|v| v.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
        let s = Simplex { vertices };
        if s.edge_matrix().determinant()?.is_zero() {
            return Err(Error::DegenerateSimplex);
        }
        Ok(s)
    }

    pub fn from_int_vertices(vertices: &[Vec<i64>]) -> Result<Self> {
        Self::new(vertices.iter().map(|v| RatVector::from_ints(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    /// Rows `v_i - v_0`, `i = 1..=d`.
    pub fn edge_matrix(&self) -> RatMatrix {
        let v0 = &self.vertices[0];
        let rows = self.vertices[1..]
            .iter()
            .map(|v| v.sub(v0).into_inner())
            .collect();
        RatMatrix::from_rows(rows).expect("uniform rows")
    }

    pub fn translate(&self, t: &RatVector) -> Simplex {
        Simplex {
            vertices: self.vertices.iter().map(|v| v.add(t)).collect(),
        }
    }

    pub fn centroid(&self) -> RatVector {
        let d = self.dim();
        let mut c = RatVector::zeros(d);
        for v in &self.vertices {
            c = c.add(v);
        }
        c.scale(&Rational::new(1.into(), ((d + 1) as i64).into()))
    }

    /// Unordered vertex pairs `v_k - v_l`, `k < l`.
    pub fn edges(&self) -> Vec<RatVector> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for k in 0..n {
            for l in k + 1..n {
                out.push(self.vertices[k].sub(&self.vertices[l]));
            }
        }
        out
    }

    /// Euclidean volume `|det E| / d!` in the ambient coordinates.
    pub fn volume(&self) -> Rational {
        let det = self.edge_matrix().determinant().expect("square");
        let fact: Rational = (1..=self.dim() as i64).map(int).product();
        num_traits::Signed::abs(&det) / fact
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circumsphere {
    pub center: RatVector,
    pub radius_sq: Rational,
}

fn check_dim(s: &Simplex, q: &Pqf) -> Result<()> {
    if s.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            found: s.dim(),
        });
    }
    Ok(())
}

/// Solves `2 (v_i - v_0)^T Q c = Q[v_i] - Q[v_0]` for the center.
pub fn circumsphere_solve(s: &Simplex, q: &Pqf) -> Result<Circumsphere> {
    check_dim(s, q)?;
    let m = q.matrix();
    let v0 = &s.vertices()[0];
    let q0 = m.quad(v0);
    let d = s.dim();
    let mut rows = Vec::with_capacity(d);
    let mut rhs = Vec::with_capacity(d);
    for v in &s.vertices()[1..] {
        let e = v.sub(v0);
        let row: Vec<Rational> = (0..d)
            .map(|j| int(2) * e.iter().zip(m.row(j)).map(|(a, b)| a * b).sum::<Rational>())
            .collect();
        rows.push(row);
        rhs.push(m.quad(v) - &q0);
    }
    let a = RatMatrix::from_rows(rows)?;
    let center = crate::exact::linalg::solve(&a, &RatVector::new(rhs)).map_err(|e| match e {
        Error::Singular => Error::DegenerateSimplex,
        e => e,
    })?;
    let radius_sq = m.quad(&v0.sub(&center));
    for v in s.vertices() {
        debug_assert_eq!(m.quad(&v.sub(&center)), radius_sq);
    }
    Ok(Circumsphere { center, radius_sq })
}

/// Gram matrix of the edges `v_i - v_0` under `Q`.
pub fn edge_gram(s: &Simplex, q: &Pqf) -> Result<SymMatrix> {
    check_dim(s, q)?;
    q.matrix().congruence(&s.edge_matrix())
}

/// Bordered-determinant formula `r^2 = -(1/4) det(B) / det(G)` with `G` the
/// edge Gram matrix and `B` its border by the diagonal.
pub fn circumradius_sq_determinant(s: &Simplex, q: &Pqf) -> Result<Rational> {
    let g = edge_gram(s, q)?;
    circumradius_sq_from_gram(&g)
}

pub fn circumradius_sq_from_gram(g: &SymMatrix) -> Result<Rational> {
    let d = g.dim();
    let det_g = g.determinant();
    if det_g.is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    let bordered = RatMatrix::from_fn(d + 1, d + 1, |i, j| match (i, j) {
        (0, 0) => Rational::zero(),
        (0, j) => g.get(j - 1, j - 1).clone(),
        (i, 0) => g.get(i - 1, i - 1).clone(),
        (i, j) => g.get(i - 1, j - 1).clone(),
    });
    let det_b = bordered.determinant()?;
    Ok(-det_b / (det_g * int(4)))
}

/// `r^2 = Q[c - m] + (d+1)^{-2} sum_{k<l} Q[v_k - v_l]`.
pub fn apollonius_radius_sq(s: &Simplex, q: &Pqf) -> Result<Rational> {
    let c = circumsphere_solve(s, q)?.center;
    let m = s.centroid();
    let n = int(s.vertices().len() as i64);
    let pairs: Rational = s.edges().iter().map(|e| q.matrix().quad(e)).sum();
    Ok(q.matrix().quad(&c.sub(&m)) + pairs / (&n * &n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentForm {
    pub matrix: SymMatrix,
    pub simplex_count: usize,
}

/// `F = (n (d+1))^{-1} sum_i sum_{k<l} (v_k - v_l)(v_k - v_l)^T`.
pub fn moment_form(simplices: &[Simplex]) -> Result<MomentForm> {
    let first = simplices.first().ok_or(Error::DimensionMismatch {
        expected: 1,
        found: 0,
    })?;
    let d = first.dim();
    let mut edges = Vec::new();
    for s in simplices {
        if s.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: s.dim(),
            });
        }
        edges.extend(s.edges());
    }
    let c = Rational::new(1.into(), ((simplices.len() * (d + 1)) as i64).into());
    let matrix = SymMatrix::outer_sum(d, edges.iter().map(|e| (c.clone(), e.entries())));
    Ok(MomentForm {
        matrix,
        simplex_count: simplices.len(),
    })
}

/// Minimum of `Q -> tr(F Q)` on `det Q = D`: returns `D det F` (the value's
/// d-th power divided by `d^d`) and the direction `F^{-1}` of the minimizer.
pub fn min_on_det_surface(f: &SymMatrix, det_target: &Rational, d: usize) -> Result<(Rational, SymMatrix)> {
    if f.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.dim(),
        });
    }
    if !f.is_positive_definite() || *det_target <= Rational::zero() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok((det_target * f.determinant(), f.inverse()?))
}

/// `(Theta_lb / kappa_d)^2 = (d/(d+1))^d det F`.
pub fn covering_bound_sq(f: &MomentForm, d: usize) -> Result<Rational> {
    if f.matrix.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.matrix.dim(),
        });
    }
    let det = f.matrix.determinant();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let r = Rational::new((d as i64).into(), ((d + 1) as i64).into());
    Ok(num_traits::pow(r, d) * det)
}

/// `(Theta / kappa_d)^2 = mu^d / det Q`.
pub fn covering_density_sq_ratio(q: &Pqf, mu: &Rational) -> Rational {
    num_traits::pow(mu.clone(), q.dim()) / q.determinant()
}

/// `gamma^2 = 4 mu / lambda(Q)`.
pub fn gamma_sq(q: &Pqf, mu: &Rational) -> Rational {
    int(4) * mu / homogeneous_minimum(q)
}
