use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{RatMatrix, RatVector};
use super::rational::{lcm_of_denominators, Rational};
use crate::error::{Error, Result};

/// Common-denominator integer form: returns `(N, s)` with `rows = N / s`, `s > 0`.
pub fn integer_rows(rows: &[&[Rational]]) -> (Vec<Vec<BigInt>>, BigInt) {
    let s = lcm_of_denominators(rows.iter().flat_map(|r| r.iter()));
    let n = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.numer() * (&s / x.denom()))
                .collect()
        })
        .collect();
    (n, s)
}

/// Scales a rational row to a primitive integer row with the same sign pattern.
pub fn primitive_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let s = lcm_of_denominators(row.iter());
    let mut v: Vec<BigInt> = row.iter().map(|x| x.numer() * (&s / x.denom())).collect();
    make_primitive(&mut v);
    v
}

pub fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Bareiss fraction-free determinant. Pivot: first nonzero entry in the column.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let p = &pivot_row[k];
        for row in bottom.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..n {
                let v = p * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

pub fn determinant_rows(rows: &[&[Rational]]) -> Rational {
    let n = rows.len();
    let (ints, s) = integer_rows(rows);
    let det = bareiss_determinant(ints);
    Rational::new(det, num_traits::pow(s, n))
}

/// Leading principal minors via Bareiss without row exchanges; `None` as soon
/// as one is not strictly positive.
pub fn leading_principal_minors(mut a: Vec<Vec<BigInt>>) -> Option<Vec<BigInt>> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return None;
        }
        out.push(a[k][k].clone());
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let p = &pivot_row[k];
        for row in bottom.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..n {
                let v = p * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Some(out)
}

/// Fraction-free forward elimination on `[A | B]` followed by rational back
/// substitution. `a` must be square and nonsingular.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect())
        .collect();
    let w = n + m;
    let mut prev = BigInt::one();
    for k in 0..n {
        if aug[k][k].is_zero() {
            match (k + 1..n).find(|&i| !aug[i][k].is_zero()) {
                Some(i) => aug.swap(i, k),
                None => return Err(Error::Singular),
            }
        }
        let (top, bottom) = aug.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let p = &pivot_row[k];
        for row in bottom.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..w {
                let v = p * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = aug[k][k].clone();
    }
    let mut x = vec![vec![Rational::zero(); m]; n];
    for c in 0..m {
        for i in (0..n).rev() {
            let mut s = Rational::from_integer(aug[i][n + c].clone());
            for j in i + 1..n {
                if !aug[i][j].is_zero() {
                    s -= &x[j][c] * Rational::from_integer(aug[i][j].clone());
                }
            }
            x[i][c] = s / Rational::from_integer(aug[i][i].clone());
        }
    }
    Ok(x)
}

pub fn solve_matrix(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    if a.rows() != a.cols() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    // scale each augmented row to integers independently
    let mut ai = Vec::with_capacity(a.rows());
    let mut bi = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let s = lcm_of_denominators(a.row(i).iter().chain(b.row(i).iter()));
        ai.push(a.row(i).iter().map(|x| x.numer() * (&s / x.denom())).collect());
        bi.push(b.row(i).iter().map(|x| x.numer() * (&s / x.denom())).collect());
    }
    let x = solve_integer(&ai, &bi)?;
    RatMatrix::from_rows(x)
}

pub fn solve(a: &RatMatrix, b: &RatVector) -> Result<RatVector> {
    let bm = RatMatrix::from_rows(b.iter().map(|x| vec![x.clone()]).collect())?;
    let x = solve_matrix(a, &bm)?;
    Ok(RatVector::new((0..x.rows()).map(|i| x.get(i, 0).clone()).collect()))
}

type SparseRow = Vec<(usize, BigInt)>;

/// Incremental sparse row-echelon reducer over the integers. Rows are kept
/// primitive; each stored row is keyed by its leading column.
#[derive(Clone, Debug)]
pub struct RowReducer {
    ncols: usize,
    pivots: Vec<Option<SparseRow>>,
    rank: usize,
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        RowReducer {
            ncols,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds a row given as `(column, value)` pairs; returns true if the rank grew.
    pub fn push_sparse(&mut self, entries: &[(usize, i64)]) -> bool {
        let mut row: SparseRow = entries
            .iter()
            .filter(|(_, v)| *v != 0)
            .map(|&(c, v)| (c, BigInt::from(v)))
            .collect();
        row.sort_by_key(|e| e.0);
        self.push_row(row)
    }

    pub fn push_dense(&mut self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.ncols);
        let ints = primitive_integer_row(row);
        let sparse = ints
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        self.push_row(sparse)
    }

    fn push_row(&mut self, mut row: SparseRow) -> bool {
        loop {
            let Some((lead, _)) = row.first() else {
                return false;
            };
            let lead = *lead;
            match &self.pivots[lead] {
                None => {
                    let mut vals: Vec<BigInt> = row.iter().map(|e| e.1.clone()).collect();
                    make_primitive(&mut vals);
                    for (e, v) in row.iter_mut().zip(vals) {
                        e.1 = v;
                    }
                    self.pivots[lead] = Some(row);
                    self.rank += 1;
                    return true;
                }
                Some(p) => row = eliminate(&row, p),
            }
        }
    }

    /// Basis of the right kernel of all pushed rows.
    pub fn nullspace(&self) -> Vec<RatVector> {
        let free: Vec<usize> = (0..self.ncols).filter(|&c| self.pivots[c].is_none()).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x = vec![Rational::zero(); self.ncols];
            x[f] = Rational::one();
            for c in (0..self.ncols).rev() {
                if let Some(row) = &self.pivots[c] {
                    let mut s = Rational::zero();
                    for (j, v) in row.iter().skip(1) {
                        if !x[*j].is_zero() {
                            s += &x[*j] * Rational::from_integer(v.clone());
                        }
                    }
                    x[c] = -s / Rational::from_integer(row[0].1.clone());
                }
            }
            basis.push(RatVector::new(x));
        }
        basis
    }
}

fn eliminate(row: &SparseRow, pivot: &SparseRow) -> SparseRow {
    // row' = p0 * row - r0 * pivot; leading entries cancel
    let p0 = &pivot[0].1;
    let r0 = &row[0].1;
    let g = p0.gcd(r0);
    let a = p0 / &g;
    let b = r0 / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, &a * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&b * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &a * &row[i - 1].1 - &b * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    let mut vals: Vec<BigInt> = out.iter().map(|e| e.1.clone()).collect();
    make_primitive(&mut vals);
    for (e, v) in out.iter_mut().zip(vals) {
        e.1 = v;
    }
    out
}

/// Exact kernel basis of the given rows in dimension `dim`.
pub fn nullspace(rows: &[RatVector], dim: usize) -> Result<Vec<RatVector>> {
    let mut r = RowReducer::new(dim);
    for row in rows {
        if row.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.dim(),
            });
        }
        r.push_dense(row);
    }
    Ok(r.nullspace())
}

pub fn rank(rows: &[RatVector], dim: usize) -> usize {
    let mut r = RowReducer::new(dim);
    for row in rows {
        r.push_dense(row);
    }
    r.rank()
}
