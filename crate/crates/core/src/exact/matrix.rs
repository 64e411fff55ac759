use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg;
use super::rational::{format_rational, int, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(d: usize) -> Self {
        RatVector(vec![Rational::zero(); d])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVector(v.iter().map(|&x| int(x)).collect())
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }

    pub fn from_strings(v: &[String]) -> Result<Self> {
        v.iter().map(|s| parse_rational(s)).collect::<Result<_>>().map(RatVector)
    }
}

impl Deref for RatVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.data[i * d + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RatMatrix { rows: r, cols: c, data })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<RatVector> {
        (0..self.rows).map(|i| RatVector::new(self.row(i).to_vec())).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(RatMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    pub fn mul_vec(&self, v: &RatVector) -> Result<RatVector> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(RatVector::new(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// Row vector times matrix: `v^T M`.
    pub fn left_mul_vec(&self, v: &RatVector) -> Result<RatVector> {
        self.transpose().mul_vec(v)
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(linalg::determinant_rows(&self.row_slices()))
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        linalg::solve_matrix(self, &RatMatrix::identity(self.rows))
    }

    pub fn row_slices(&self) -> Vec<&[Rational]> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

/// Symmetric rational matrix, stored densely.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<Rational>,
}

impl SymMatrix {
    pub fn zeros(d: usize) -> Self {
        SymMatrix {
            dim: d,
            data: vec![Rational::zero(); d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    /// Builds from the upper triangle: `f` is called with `i <= j`.
    pub fn from_fn(d: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = vec![Rational::zero(); d * d];
        for i in 0..d {
            for j in i..d {
                let v = f(i, j);
                data[j * d + i] = v.clone();
                data[i * d + j] = v;
            }
        }
        SymMatrix { dim: d, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = RatMatrix::from_rows(rows)?;
        Self::try_from_matrix(&m)
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::try_from_matrix(&RatMatrix::from_int_rows(rows)?)
    }

    pub fn try_from_matrix(m: &RatMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let d = m.rows();
        for i in 0..d {
            for j in i + 1..d {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix {
            dim: d,
            data: (0..d * d).map(|k| m.get(k / d, k % d).clone()).collect(),
        })
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    /// `sum_k c_k v_k v_k^T`.
    pub fn outer_sum<'a>(d: usize, terms: impl IntoIterator<Item = (Rational, &'a [Rational])>) -> Self {
        let mut m = Self::zeros(d);
        for (c, v) in terms {
            assert_eq!(v.len(), d);
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                let ci = &c * vi;
                for (j, vj) in v.iter().enumerate().skip(i) {
                    m.data[i * d + j] += &ci * vj;
                }
            }
        }
        m.symmetrize_from_upper();
        m
    }

    fn symmetrize_from_upper(&mut self) {
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                self.data[j * d + i] = self.data[i * d + j].clone();
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_matrix(&self) -> RatMatrix {
        RatMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).clone())
    }

    pub fn scale(&self, c: &Rational) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim);
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim);
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn determinant(&self) -> Rational {
        linalg::determinant_rows(&self.row_slices())
    }

    /// Pivots of the symmetric triangular decomposition (no pivoting).
    /// Returns `None` as soon as a pivot is not strictly positive.
    pub fn positive_pivots(&self) -> Option<Vec<Rational>> {
        let (ints, scale) = linalg::integer_rows(&self.row_slices());
        let minors = linalg::leading_principal_minors(ints)?;
        // pivot_k = M_k / M_{k-1}
        let mut prev = BigInt::one();
        let mut out = Vec::with_capacity(self.dim);
        for m in minors {
            out.push(Rational::new(m.clone(), prev * &scale));
            prev = m;
        }
        Some(out)
    }

    pub fn is_positive_definite(&self) -> bool {
        let ints = linalg::integer_rows(&self.row_slices()).0;
        linalg::leading_principal_minors(ints).is_some()
    }

    pub fn inverse(&self) -> Result<SymMatrix> {
        let inv = self.to_matrix().inverse()?;
        SymMatrix::try_from_matrix(&inv)
    }

    /// `tr(A B)` for symmetric `A`, `B`: the Frobenius pairing.
    pub fn trace_product(&self, other: &SymMatrix) -> Rational {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn quad(&self, v: &[Rational]) -> Rational {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Rational {
        assert_eq!(u.len(), self.dim);
        assert_eq!(v.len(), self.dim);
        let mut s = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let r: Rational = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
            s += ui * r;
        }
        s
    }

    /// `B S B^T`.
    pub fn congruence(&self, b: &RatMatrix) -> Result<SymMatrix> {
        let bs = b.mul(&self.to_matrix())?;
        let m = bs.mul(&b.transpose())?;
        SymMatrix::try_from_matrix(&m)
    }

    pub fn row_slices(&self) -> Vec<&[Rational]> {
        (0..self.dim).map(|i| self.row(i)).collect()
    }

    /// Upper-triangle coordinates `(i, j)`, `i <= j`, row-major.
    pub fn upper_triangle(&self) -> Vec<Rational> {
        let mut v = Vec::with_capacity(self.dim * (self.dim + 1) / 2);
        for i in 0..self.dim {
            for j in i..self.dim {
                v.push(self.get(i, j).clone());
            }
        }
        v
    }

    pub fn from_upper_triangle(d: usize, coords: &[Rational]) -> Result<Self> {
        if coords.len() != d * (d + 1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: d * (d + 1) / 2,
                found: coords.len(),
            });
        }
        Ok(SymMatrix::from_fn(d, |i, j| coords[upper_index(d, i, j)].clone()))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_matrix().to_strings()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(super::rational::to_f64).collect())
            .collect()
    }

    /// Integer matrix `N` and positive integer `s` with `self = N / s`.
    pub fn integer_scaled(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        linalg::integer_rows(&self.row_slices())
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        self.get(i, j)
    }
}

/// Index of `(i, j)` with `i <= j` in the row-major upper triangle.
pub fn upper_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * d - i * (i + 1) / 2 + j
}

/// Positive definite quadratic form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pqf(SymMatrix);

impl Pqf {
    pub fn new(m: SymMatrix) -> Result<Self> {
        if m.is_positive_definite() {
            Ok(Pqf(m))
        } else {
            Err(Error::NotPositiveDefinite)
        }
    }

    pub fn identity(d: usize) -> Self {
        Pqf(SymMatrix::identity(d))
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SymMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn evaluate(&self, v: &[Rational]) -> Result<Rational> {
        self.check(v.len())?;
        Ok(self.0.quad(v))
    }

    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Result<Rational> {
        self.check(u.len())?;
        self.check(v.len())?;
        Ok(self.0.bilinear(u, v))
    }

    pub fn evaluate_int(&self, v: &[i64]) -> Result<Rational> {
        self.check(v.len())?;
        let r: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        Ok(self.0.quad(&r))
    }

    pub fn determinant(&self) -> Rational {
        self.0.determinant()
    }

    pub fn scale(&self, c: &Rational) -> Result<Pqf> {
        if !c.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Pqf(self.0.scale(c)))
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            })
        } else {
            Ok(())
        }
    }
}

/// JSON shape of a symmetric matrix: rows of `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<String>>);

impl From<&SymMatrix> for MatrixJson {
    fn from(m: &SymMatrix) -> Self {
        MatrixJson(m.to_strings())
    }
}

impl TryFrom<&MatrixJson> for SymMatrix {
    type Error = Error;
    fn try_from(m: &MatrixJson) -> Result<Self> {
        SymMatrix::from_strings(&m.0)
    }
}
