//! Exact non-negative rationals.
//!
//! Every probability, coincidence ratio and primality value in the crate is an
//! [`ExactRational`]. The type is a thin wrapper around
//! `num_rational::Ratio<BigUint>`, which keeps the fraction reduced.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction `numerator / denominator` with `numerator >= 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(Ratio<BigUint>);

impl ExactRational {
    /// `numerator / denominator`, reduced. Panics on a zero denominator.
    pub fn new(numerator: impl Into<BigUint>, denominator: impl Into<BigUint>) -> Self {
        let d = denominator.into();
        assert!(!d.is_zero(), "zero denominator");
        ExactRational(Ratio::new(numerator.into(), d))
    }

    /// Like [`ExactRational::new`] but reports a zero denominator as an error.
    pub fn try_new(numerator: impl Into<BigUint>, denominator: impl Into<BigUint>) -> Result<Self> {
        let d = denominator.into();
        if d.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(ExactRational(Ratio::new(numerator.into(), d)))
    }

    pub fn from_counts(hits: u64, total: u64) -> Self {
        Self::new(hits, total)
    }

    pub fn zero() -> Self {
        ExactRational(Ratio::zero())
    }

    pub fn one() -> Self {
        ExactRational(Ratio::one())
    }

    pub fn numerator(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - self`; `None` when `self > 1`.
    pub fn complement(&self) -> Option<Self> {
        Self::one().checked_sub(self)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if other > self {
            None
        } else {
            Some(ExactRational(&self.0 - &other.0))
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        ExactRational(Ratio::new(
            self.0.numer().pow(exp),
            self.0.denom().pow(exp),
        ))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigUint {
        self.0.numer().div_floor(self.0.denom())
    }

    /// `1 / self`; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(ExactRational(self.0.recip()))
        }
    }

    /// Lossy conversion, for display and sorting diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Whether the value can be written as `d / base^exp` for some integer `d`.
    pub fn has_denominator_dividing(&self, denominator: &BigUint) -> bool {
        (denominator % self.0.denom()).is_zero()
    }

    /// Numerator of the value when written over `denominator`, if exact.
    pub fn numerator_over(&self, denominator: &BigUint) -> Option<BigUint> {
        if !self.has_denominator_dividing(denominator) {
            return None;
        }
        Some(self.0.numer() * (denominator / self.0.denom()))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `p/q` or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("not a rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigUint = p.trim().parse().map_err(|_| bad())?;
                let q: BigUint = q.trim().parse().map_err(|_| bad())?;
                Self::try_new(p, q)
            }
            None => {
                let p: BigUint = s.parse().map_err(|_| bad())?;
                Ok(Self::new(p, 1u32))
            }
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl Add for ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: ExactRational) -> ExactRational {
        ExactRational(self.0 + rhs.0)
    }
}

impl Mul for &ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl Mul for ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: ExactRational) -> ExactRational {
        ExactRational(self.0 * rhs.0)
    }
}

/// Panics when the result would be negative; use [`ExactRational::checked_sub`]
/// when that can happen.
impl Sub for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: &ExactRational) -> ExactRational {
        self.checked_sub(rhs).expect("negative ExactRational")
    }
}

impl From<u64> for ExactRational {
    fn from(value: u64) -> Self {
        ExactRational::new(value, 1u32)
    }
}
