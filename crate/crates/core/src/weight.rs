//! Probability weights: exact big rationals or floats behind one trait.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Weight:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    /// True for exact arithmetic.
    const EXACT: bool;

    fn from_ratio(num: u64, den: u64) -> Self;
    fn from_biguint(n: &BigUint) -> Self;
    fn to_f64(&self) -> f64;

    fn from_u64(n: u64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    /// Equality up to `tol * max(1, scale)` for floats, exact for rationals.
    fn approx_eq(&self, other: &Self, tol: f64, scale: f64) -> bool;
}

impl Weight for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_biguint(n: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(n.clone()))
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn approx_eq(&self, other: &Self, _tol: f64, _scale: f64) -> bool {
        self == other
    }
}

impl Weight for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_biguint(n: &BigUint) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64, scale: f64) -> bool {
        (self - other).abs() <= tol * scale.max(1.0)
    }
}

/// Converts a rational to the nearest-ish `f64` without overflowing on huge
/// numerators and denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 900;
    let (n, d) = if shift > 0 {
        (r.numer() >> shift as usize, r.denom() >> shift as usize)
    } else {
        (r.numer().clone(), r.denom().clone())
    };
    let n = n.to_f64().unwrap_or(0.0);
    let d = d.to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

/// Formats a rational as `"num/den"` (or `"num"` when the denominator is 1).
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"num/den"`, an integer, or a finite decimal such as `"0.125"`
/// (read exactly).
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(digits, den));
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_round_trip() {
        let r = rational(-6, 8);
        assert_eq!(format_ratio(&r), "-3/4");
        assert_eq!(parse_ratio("-3/4"), Some(r));
        assert_eq!(parse_ratio("5"), Some(rational(5, 1)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(parse_ratio("0.125"), Some(rational(1, 8)));
        assert_eq!(parse_ratio("-0.5"), Some(rational(-1, 2)));
        assert_eq!(parse_ratio("1."), None);
        assert_eq!(parse_ratio("1.2e3"), None);
    }

    #[test]
    fn huge_ratio_to_float() {
        let big = BigInt::from(10u32).pow(400);
        let r = BigRational::new(big.clone() * 3, big * 4);
        assert!((ratio_to_f64(&r) - 0.75).abs() < 1e-15);
    }
}
