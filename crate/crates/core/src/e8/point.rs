use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{int, rat, RatVector, Rational};

/// A point of `Z^8 ∪ (1/2 + Z)^8` stored with doubled coordinates, so that
/// every coordinate is an integer. Ordering is lexicographic and agrees with
/// the ordering of the true coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct E8Point(pub [i32; 8]);

impl E8Point {
    pub const ZERO: E8Point = E8Point([0; 8]);

    pub fn doubled(&self) -> &[i32; 8] {
        &self.0
    }

    /// Four times the standard inner product.
    pub fn dot4(&self, other: &E8Point) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as i64 * b as i64)
            .sum()
    }

    /// Four times the standard norm.
    pub fn norm4(&self) -> i64 {
        self.dot4(self)
    }

    /// Membership in the lattice: all coordinates integral or all half-integral,
    /// with even coordinate sum.
    pub fn is_lattice_point(&self) -> bool {
        let parity = self.0[0].rem_euclid(2);
        self.0.iter().all(|c| c.rem_euclid(2) == parity) && self.0.iter().sum::<i32>().rem_euclid(4) == 0
    }

    pub fn from_rat(v: &[Rational]) -> Option<E8Point> {
        if v.len() != 8 {
            return None;
        }
        let mut out = [0i32; 8];
        for (o, x) in out.iter_mut().zip(v) {
            let d = x * int(2);
            if !d.is_integer() {
                return None;
            }
            *o = i32::try_from(d.to_integer()).ok()?;
        }
        Some(E8Point(out))
    }

    pub fn to_rat(&self) -> RatVector {
        RatVector::new(self.0.iter().map(|&c| rat(c as i64, 2)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: i32) -> E8Point {
        E8Point(self.0.map(|c| c * k))
    }

    /// Exact division of every coordinate, if possible.
    pub fn div_exact(&self, k: i32) -> Option<E8Point> {
        if self.0.iter().all(|c| c % k == 0) {
            Some(E8Point(self.0.map(|c| c / k)))
        } else {
            None
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.to_rat().to_strings()
    }
}

impl Add for E8Point {
    type Output = E8Point;
    fn add(self, o: E8Point) -> E8Point {
        E8Point(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for E8Point {
    type Output = E8Point;
    fn sub(self, o: E8Point) -> E8Point {
        E8Point(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for E8Point {
    type Output = E8Point;
    fn neg(self) -> E8Point {
        E8Point(self.0.map(|c| -c))
    }
}

impl fmt::Debug for E8Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E8Point(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c % 2 == 0 {
                write!(f, "{}", c / 2)?;
            } else {
                write!(f, "{c}/2")?;
            }
        }
        write!(f, ")")
    }
}

/// Translation-canonical form of a vertex set: sorted, with the
/// lexicographically smallest vertex moved to the origin.
pub fn canonical_vertices<const N: usize>(mut v: [E8Point; N]) -> [E8Point; N] {
    v.sort_unstable();
    let m = v[0];
    for p in v.iter_mut() {
        *p = *p - m;
    }
    v
}
