use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::exact::rational::lcm_of_denominators;
use crate::exact::{Pqf, RatVector, Rational};

/// All lattice vectors of one exact norm, in the form's basis coordinates,
/// sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shell {
    pub form: Pqf,
    pub norm: Rational,
    pub vectors: Vec<Vec<i64>>,
}

impl Shell {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn rat_vectors(&self) -> Vec<RatVector> {
        self.vectors.iter().map(|v| RatVector::from_ints(v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// `Q[x] == norm`
    Shell,
    /// `Q[x] <= norm`, including the origin
    Ball,
}

/// Integer-scaled quadratic completion:
/// `M * Q[x] = sum_i w_i * (den_i x_i + sum_{j>i} m_ij x_j)^2`.
#[derive(Clone, Debug)]
struct Completion {
    den: Vec<BigInt>,
    m: Vec<Vec<BigInt>>,
    w: Vec<BigInt>,
    bound: BigInt,
}

fn completion(q: &Pqf, norm: &Rational) -> Completion {
    let n = q.dim();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| q.matrix().row(i).to_vec()).collect();
    let mut diag = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        let d = a[i][i].clone();
        for j in i + 1..n {
            mu[i][j] = &a[i][j] / &d;
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &d * &mu[i][k] * &mu[i][l];
                a[k][l] -= &t;
                if l != k {
                    a[l][k] -= t;
                }
            }
        }
        diag.push(d);
    }
    let den: Vec<BigInt> = (0..n).map(|i| lcm_of_denominators(mu[i][i + 1..].iter())).collect();
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j > i {
                        (&mu[i][j] * Rational::from_integer(den[i].clone())).to_integer()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let wr: Vec<Rational> = (0..n)
        .map(|i| &diag[i] / Rational::from_integer(&den[i] * &den[i]))
        .collect();
    let scale = lcm_of_denominators(wr.iter().chain(std::iter::once(norm)));
    let sc = Rational::from_integer(scale);
    Completion {
        den,
        m,
        w: wr.iter().map(|x| (x * &sc).to_integer()).collect(),
        bound: (norm * &sc).floor().to_integer(),
    }
}

trait EnumInt: Clone + Ord + Send + Sync + Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn from_i64(x: i64) -> Self;
    fn zero_val() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_floor(&self, o: &Self) -> Self;
    fn isqrt(&self) -> Self;
    fn to_i64(&self) -> Option<i64>;
}

impl EnumInt for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn zero_val() -> Self {
        0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn isqrt(&self) -> Self {
        if *self <= 0 {
            return 0;
        }
        let mut r = (*self as f64).sqrt() as i128;
        while r * r > *self {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= *self {
            r += 1;
        }
        r
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
}

impl EnumInt for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn zero_val() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn isqrt(&self) -> Self {
        if !self.is_positive() {
            return BigInt::zero();
        }
        self.sqrt()
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
}

struct Enumerator<T> {
    n: usize,
    den: Vec<T>,
    m: Vec<Vec<T>>,
    w: Vec<T>,
    bound: T,
}

impl<T: EnumInt> Enumerator<T> {
    fn new(c: &Completion) -> Option<Self> {
        let conv = |v: &[BigInt]| v.iter().map(T::from_big).collect::<Option<Vec<T>>>();
        Some(Enumerator {
            n: c.den.len(),
            den: conv(&c.den)?,
            m: c.m.iter().map(|r| conv(r)).collect::<Option<_>>()?,
            w: conv(&c.w)?,
            bound: T::from_big(&c.bound)?,
        })
    }

    /// Admissible integer range for coordinate `i` given the budget.
    fn range(&self, i: usize, rem: &T, x: &[i64]) -> Option<(T, i64, i64)> {
        let mut s = T::zero_val();
        for (mij, &xj) in self.m[i].iter().zip(x).skip(i + 1) {
            if xj != 0 {
                s = s.add(&mij.mul(&T::from_i64(xj))?)?;
            }
        }
        let r = rem.div_floor(&self.w[i]).isqrt();
        let den = &self.den[i];
        let lo = T::zero_val().sub(&r)?.sub(&s)?;
        // ceil(lo / den) = -floor(-lo / den)
        let lo = T::zero_val().sub(&T::zero_val().sub(&lo)?.div_floor(den))?;
        let hi = r.sub(&s)?.div_floor(den);
        Some((s, lo.to_i64()?, hi.to_i64()?))
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<A>(
        &self,
        i: usize,
        rem: &T,
        x: &mut Vec<i64>,
        region: Region,
        acc: &mut A,
        fold: &(impl Fn(&mut A, &[i64]) + Sync),
    ) -> Option<()> {
        let (s, lo, hi) = self.range(i, rem, x)?;
        for xi in lo..=hi {
            let z = self.den[i].mul(&T::from_i64(xi))?.add(&s)?;
            let used = self.w[i].mul(&z.mul(&z)?)?;
            if used > *rem {
                continue;
            }
            let left = rem.sub(&used)?;
            x[i] = xi;
            if i == 0 {
                if region == Region::Ball || left == T::zero_val() {
                    fold(acc, x);
                }
            } else {
                self.descend(i - 1, &left, x, region, acc, fold)?;
            }
        }
        x[i] = 0;
        Some(())
    }

    fn run<A: Send>(
        &self,
        region: Region,
        identity: &(impl Fn() -> A + Sync),
        fold: &(impl Fn(&mut A, &[i64]) + Sync),
        reduce: &(impl Fn(A, A) -> A + Sync),
    ) -> Option<A> {
        let n = self.n;
        if n == 0 {
            return Some(identity());
        }
        let top = n - 1;
        let x0 = vec![0i64; n];
        let (_, lo, hi) = self.range(top, &self.bound, &x0)?;
        let parts: Option<Vec<A>> = (lo..=hi)
            .into_par_iter()
            .map(|xt| {
                let mut x = vec![0i64; n];
                let mut acc = identity();
                let z = self.den[top].mul(&T::from_i64(xt))?;
                let used = self.w[top].mul(&z.mul(&z)?)?;
                if used > self.bound {
                    return Some(acc);
                }
                let left = self.bound.sub(&used)?;
                x[top] = xt;
                if top == 0 {
                    if region == Region::Ball || left == T::zero_val() {
                        fold(&mut acc, &x);
                    }
                } else {
                    self.descend(top - 1, &left, &mut x, region, &mut acc, fold)?;
                }
                Some(acc)
            })
            .collect();
        Some(parts?.into_iter().fold(identity(), reduce))
    }
}

/// Folds over all integer vectors `x` with `Q[x] == norm` (shell) or
/// `Q[x] <= norm` (ball), in parallel over top-level branches.
/// Uses checked `i128` arithmetic and falls back to big integers on overflow.
pub fn fold_lattice_vectors<A: Send>(
    q: &Pqf,
    norm: &Rational,
    region: Region,
    identity: impl Fn() -> A + Sync,
    fold: impl Fn(&mut A, &[i64]) + Sync,
    reduce: impl Fn(A, A) -> A + Sync,
) -> A {
    if norm.is_negative() {
        return identity();
    }
    let c = completion(q, norm);
    if let Some(e) = Enumerator::<i128>::new(&c) {
        if let Some(a) = e.run(region, &identity, &fold, &reduce) {
            return a;
        }
    }
    let e = Enumerator::<BigInt>::new(&c).expect("big integers never overflow");
    e.run(region, &identity, &fold, &reduce)
        .expect("coordinates exceed i64 range")
}

pub fn enumerate_shell(q: &Pqf, norm: &Rational) -> Shell {
    let mut vectors = if norm.is_positive() {
        fold_lattice_vectors(
            q,
            norm,
            Region::Shell,
            Vec::new,
            |acc: &mut Vec<Vec<i64>>, x| acc.push(x.to_vec()),
            |mut a, b| {
                a.extend(b);
                a
            },
        )
    } else {
        Vec::new()
    };
    vectors.sort();
    Shell {
        form: q.clone(),
        norm: norm.clone(),
        vectors,
    }
}

/// Minimum of `Q` over nonzero integer vectors.
pub fn homogeneous_minimum(q: &Pqf) -> Rational {
    // any diagonal entry is an upper bound, attained by a unit vector
    let n = q.dim();
    let bound = (0..n)
        .map(|i| q.matrix().get(i, i).clone())
        .min()
        .unwrap_or_else(Rational::one);
    // integer-scaled evaluation: M Q has integer entries
    let (rows, m) = q.matrix().integer_scaled();
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_i128()).collect())
        .collect();
    let eval = |x: &[i64]| -> Rational {
        if let Some(a) = &small {
            let mut s: Option<i128> = Some(0);
            for (i, row) in a.iter().enumerate() {
                if x[i] == 0 {
                    continue;
                }
                let t: Option<i128> = row
                    .iter()
                    .zip(x)
                    .try_fold(0i128, |acc, (a, &b)| acc.checked_add(a.checked_mul(b as i128)?));
                s = s.and_then(|s| s.checked_add(t?.checked_mul(x[i] as i128)?));
            }
            if let Some(s) = s {
                return Rational::new(BigInt::from(s), m.clone());
            }
        }
        q.evaluate_int(x).expect("dimension")
    };
    let best = fold_lattice_vectors(
        q,
        &bound,
        Region::Ball,
        || None::<Rational>,
        |acc, x| {
            if x.iter().any(|&c| c != 0) {
                let v = eval(x);
                if acc.as_ref().is_none_or(|a| v < *a) {
                    *acc = Some(v);
                }
            }
        },
        |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
    );
    best.unwrap_or(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, SymMatrix};

    #[test]
    fn square_lattice_shells() {
        let q = Pqf::identity(2);
        assert_eq!(enumerate_shell(&q, &int(1)).len(), 4);
        assert_eq!(enumerate_shell(&q, &int(2)).len(), 4);
        assert_eq!(enumerate_shell(&q, &int(3)).len(), 0);
        assert_eq!(enumerate_shell(&q, &int(25)).len(), 12);
        assert_eq!(enumerate_shell(&q, &rat(1, 2)).len(), 0);
    }

    #[test]
    fn hexagonal_shell_and_minimum() {
        let q = Pqf::new(SymMatrix::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap()).unwrap();
        let s = enumerate_shell(&q, &int(2));
        assert_eq!(s.len(), 6);
        assert_eq!(homogeneous_minimum(&q), int(2));
        let q = Pqf::new(SymMatrix::from_rows(vec![vec![rat(1, 3), rat(1, 7)], vec![rat(1, 7), int(5)]]).unwrap())
            .unwrap();
        assert_eq!(homogeneous_minimum(&q), rat(1, 3));
    }

    #[test]
    fn ball_counts_origin() {
        let q = Pqf::identity(3);
        let n = fold_lattice_vectors(&q, &int(1), Region::Ball, || 0usize, |a, _| *a += 1, |a, b| a + b);
        assert_eq!(n, 7);
    }

    #[test]
    fn shells_sorted_and_negation_closed() {
        let q = Pqf::new(SymMatrix::from_int_rows(&[vec![3, 1, 0], vec![1, 4, 2], vec![0, 2, 5]]).unwrap()).unwrap();
        for n in 1..20 {
            let s = enumerate_shell(&q, &int(n));
            assert!(s.vectors.windows(2).all(|w| w[0] < w[1]));
            for v in &s.vectors {
                assert_eq!(q.evaluate_int(v).unwrap(), int(n));
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                assert!(s.vectors.binary_search(&neg).is_ok());
            }
        }
    }
}
