use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_decimal, Rational};

/// The first 100 decimals of pi, truncated; `pi` lies in `[PI_LOWER, PI_LOWER + 10^-100]`.
pub const PI_DIGITS: &str = "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

pub fn pi_enclosure() -> (Rational, Rational) {
    let lo = parse_decimal(PI_DIGITS).expect("constant");
    let ulp = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 100));
    let hi = &lo + ulp;
    (lo, hi)
}

/// Enclosure of `kappa_d^2 = pi^d / Gamma(d/2 + 1)^2`, the squared unit-ball volume.
pub fn kappa_sq_enclosure(d: usize) -> (Rational, Rational) {
    let (lo, hi) = pi_enclosure();
    let k = d / 2;
    let (pi_pow, factor) = if d.is_multiple_of(2) {
        let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
        (k * 2, Rational::new(BigInt::one(), &fact * &fact))
    } else {
        // Gamma(k + 3/2)^2 = ((2k+1)!!)^2 pi / 4^(k+1)
        let dfact: BigInt = (0..=k as u64).map(|i| BigInt::from(2 * i + 1)).product();
        let four = num_traits::pow(BigInt::from(4), k + 1);
        (2 * k, Rational::new(four, &dfact * &dfact))
    };
    (
        num_traits::pow(lo, pi_pow) * &factor,
        num_traits::pow(hi, pi_pow) * &factor,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Less,
    Greater,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Less => "less",
            Verdict::Greater => "greater",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityComparison {
    pub theta_sq_ratio: String,
    pub threshold: String,
    pub verdict: Verdict,
}

/// Decides `Theta < threshold` where `Theta^2 = theta_sq_ratio * kappa_d^2`.
pub fn compare_density_to_decimal(theta_sq_ratio: &Rational, threshold: &str, d: usize) -> Result<DensityComparison> {
    let t = parse_decimal(threshold)?;
    if t <= Rational::zero() {
        return Err(Error::Parse(format!("threshold must be positive: {threshold}")));
    }
    if *theta_sq_ratio < Rational::zero() {
        return Err(Error::Parse("negative density ratio".into()));
    }
    let (klo, khi) = kappa_sq_enclosure(d);
    let t2 = &t * &t;
    let verdict = if theta_sq_ratio * khi < t2 {
        Verdict::Less
    } else if theta_sq_ratio * klo > t2 {
        Verdict::Greater
    } else {
        Verdict::Inconclusive
    };
    Ok(DensityComparison {
        theta_sq_ratio: format_rational(theta_sq_ratio),
        threshold: threshold.to_string(),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn kappa8_window() {
        let v = compare_density_to_decimal(&int(1), "4.0588", 8).unwrap();
        assert_eq!(v.verdict, Verdict::Less);
        let v = compare_density_to_decimal(&int(1), "4.0587", 8).unwrap();
        assert_eq!(v.verdict, Verdict::Greater);
    }

    #[test]
    fn odd_dimensions() {
        // kappa_1 = 2, kappa_3 = 4 pi / 3
        let (lo, hi) = kappa_sq_enclosure(1);
        assert_eq!(lo, int(4));
        assert_eq!(hi, int(4));
        let v = compare_density_to_decimal(&rat(1, 4), "1", 1).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);
        let v = compare_density_to_decimal(&int(1), "4.1888", 3).unwrap();
        assert_eq!(v.verdict, Verdict::Less);
        let v = compare_density_to_decimal(&int(1), "4.1887", 3).unwrap();
        assert_eq!(v.verdict, Verdict::Greater);
    }

    #[test]
    fn straddling_is_inconclusive() {
        // threshold equal to kappa_2 = pi up to 100 digits
        let v = compare_density_to_decimal(&int(1), PI_DIGITS, 2).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);
        assert!(compare_density_to_decimal(&int(1), "-1", 2).is_err());
    }
}
