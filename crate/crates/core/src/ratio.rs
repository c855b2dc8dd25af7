//! Exact rationals in lowest terms and their decimal rendering.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An arbitrary-precision rational, always reduced with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRatio(BigRational);

impl ExactRatio {
    /// Builds `numer / denom` and reduces it.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        ExactRatio(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_counts(numer: &BigUint, denom: &BigUint) -> Self {
        Self::new(BigInt::from(numer.clone()), BigInt::from(denom.clone()))
    }

    pub fn integer(value: impl Into<BigInt>) -> Self {
        ExactRatio(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        ExactRatio(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn abs(&self) -> Self {
        ExactRatio(self.0.abs())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Renders the value with exactly `places` fractional digits, rounding
    /// half to even.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = BigInt::from(10u32).pow(places as u32);
        let magnitude = self.0.numer().abs() * &scale;
        let denom = self.0.denom();
        let (mut q, r) = magnitude.div_rem(denom);
        let twice = r * 2u32;
        match twice.cmp(denom) {
            std::cmp::Ordering::Greater => q += 1u32,
            std::cmp::Ordering::Equal if q.is_odd() => q += 1u32,
            _ => {}
        }

        let negative = self.0.numer().sign() == Sign::Minus && !q.is_zero();
        let digits = q.to_string();
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if places == 0 {
            out.push_str(&digits);
            return out;
        }
        let padded = format!("{:0>width$}", digits, width = places + 1);
        let (int_part, frac_part) = padded.split_at(padded.len() - places);
        out.push_str(int_part);
        out.push('.');
        out.push_str(frac_part);
        out
    }
}

impl From<BigRational> for ExactRatio {
    fn from(value: BigRational) -> Self {
        ExactRatio(value)
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Add for &ExactRatio {
    type Output = ExactRatio;
    fn add(self, rhs: &ExactRatio) -> ExactRatio {
        ExactRatio(&self.0 + &rhs.0)
    }
}

impl Sub for &ExactRatio {
    type Output = ExactRatio;
    fn sub(self, rhs: &ExactRatio) -> ExactRatio {
        ExactRatio(&self.0 - &rhs.0)
    }
}

impl Mul for &ExactRatio {
    type Output = ExactRatio;
    fn mul(self, rhs: &ExactRatio) -> ExactRatio {
        ExactRatio(&self.0 * &rhs.0)
    }
}

impl One for ExactRatio {
    fn one() -> Self {
        ExactRatio(BigRational::one())
    }
}

impl Mul for ExactRatio {
    type Output = ExactRatio;
    fn mul(self, rhs: ExactRatio) -> ExactRatio {
        ExactRatio(self.0 * rhs.0)
    }
}
