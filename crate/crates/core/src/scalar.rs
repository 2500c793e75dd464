//! Real scalar backends.
//!
//! Everything in this crate is generic over [`Scalar`], which is implemented
//! for `f64` (binary floating point, compared against a caller-supplied
//! tolerance) and [`Rational`] (arbitrary precision rationals, compared
//! exactly). Predicates take a tolerance argument on both backends; the exact
//! backend ignores it and behaves as if it were zero.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact backend.
pub type Rational = BigRational;

/// Default tolerance for float predicates (realness, null points, ...).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default tolerance for residuals of objects that are exact by construction.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// JSON form of a scalar: exact values are strings `"p/q"`, floats are numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Num(f64),
    Text(String),
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// `true` for backends without rounding.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Nearest double.
    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self;

    /// `|self| <= tol` on the float backend, `self == 0` on the exact one.
    fn within(&self, tol: f64) -> bool;

    fn encode(&self) -> ScalarRepr;

    fn decode(repr: &ScalarRepr) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn within(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn encode(&self) -> ScalarRepr {
        ScalarRepr::Num(*self)
    }

    fn decode(repr: &ScalarRepr) -> Result<Self> {
        match repr {
            ScalarRepr::Num(x) => Ok(*x),
            ScalarRepr::Text(s) => parse_rational(s).map(|r| Scalar::to_f64(&r)),
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn encode(&self) -> ScalarRepr {
        ScalarRepr::Text(format!("{}/{}", self.numer(), self.denom()))
    }

    fn decode(repr: &ScalarRepr) -> Result<Self> {
        match repr {
            ScalarRepr::Text(s) => parse_rational(s),
            ScalarRepr::Num(x) => {
                Rational::from_f64(*x).ok_or_else(|| Error::Parse(format!("non-finite number {x} for exact backend")))
            }
        }
    }
}

/// Parses `"p/q"`, `"p"`, or a decimal literal such as `"-0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(n));
    }
    // decimal: split on '.', scale by a power of ten
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').ok_or_else(bad)?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let int = if int.is_empty() { "0" } else { int };
    let digits = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10u32), frac.len());
    let r = Rational::new(digits, den);
    Ok(if neg { -r } else { r })
}
