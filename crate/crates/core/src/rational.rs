//! Exact rational truth values and measure weights in the unit interval.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("malformed rational `{0}` (expected `p/q` or an integer)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(String),
}

/// Parses `p/q` or a bare integer into an arbitrary rational (no range check).
pub fn parse_rational(text: &str) -> Result<BigRational, RationalError> {
    let text = text.trim();
    let malformed = || RationalError::Malformed(text.to_owned());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let is_int = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) {
        return Err(malformed());
    }
    let num: BigInt = num.parse().map_err(|_| malformed())?;
    let den: BigInt = den.parse().map_err(|_| malformed())?;
    if den.is_zero() {
        return Err(RationalError::ZeroDenominator(text.to_owned()));
    }
    Ok(BigRational::new(num, den))
}

/// Formats any rational as `p/q` with a positive denominator, integers included.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// An exact rational number in `[0, 1]`, kept in reduced form so that equality
/// is structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational01(BigRational);

impl Rational01 {
    pub fn new(value: BigRational) -> Result<Self, RationalError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(RationalError::OutOfRange(format_rational(&value)));
        }
        Ok(Self(value))
    }

    /// `numer / denom`; fails on a zero denominator or a value outside `[0, 1]`.
    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, RationalError> {
        if denom == 0 {
            return Err(RationalError::ZeroDenominator(format!("{numer}/0")));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    /// Clamps an arbitrary rational into the unit interval.
    pub fn clamped(value: BigRational) -> Self {
        if value.is_negative() {
            Self::zero()
        } else if value > BigRational::one() {
            Self::one()
        } else {
            Self(value)
        }
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True when the value is 0 or 1.
    pub fn is_crisp(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    /// `1 - x`
    pub fn complement(&self) -> Self {
        Self(BigRational::one() - &self.0)
    }

    /// Łukasiewicz implication `min(1, 1 - x + y)`.
    pub fn implies(&self, other: &Self) -> Self {
        Self::clamped(BigRational::one() - &self.0 + &other.0)
    }

    /// Łukasiewicz t-norm `max(0, x + y - 1)`.
    pub fn strong_and(&self, other: &Self) -> Self {
        Self::clamped(&self.0 + &other.0 - BigRational::one())
    }

    /// Łukasiewicz t-conorm `min(1, x + y)`.
    pub fn strong_or(&self, other: &Self) -> Self {
        Self::clamped(&self.0 + &other.0)
    }

    pub fn min_with(&self, other: &Self) -> Self {
        if self <= other { self.clone() } else { other.clone() }
    }

    pub fn max_with(&self, other: &Self) -> Self {
        if self >= other { self.clone() } else { other.clone() }
    }

    /// Product of two values in `[0, 1]`, which stays in `[0, 1]`.
    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }
}

impl fmt::Display for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational01 {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_rational(s)?)
    }
}

impl TryFrom<BigRational> for Rational01 {
    type Error = RationalError;

    fn try_from(value: BigRational) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<Rational01> for BigRational {
    fn from(value: Rational01) -> Self {
        value.0
    }
}

impl Serialize for Rational01 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational01 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout tests and generators; panics on invalid input.
pub fn q(numer: i64, denom: i64) -> Rational01 {
    Rational01::from_ratio(numer, denom).expect("rational literal outside [0, 1]")
}

/// The default five-point grid `{0, 1/4, 1/2, 3/4, 1}`.
pub fn default_grid() -> Vec<Rational01> {
    (0..=4).map(|k| q(k, 4)).collect()
}
