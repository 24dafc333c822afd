//! Scalar fields used by every computation.
//!
//! Two fields sit behind one trait: exact rationals ([`Rational`]) for
//! identity verification and `f64` for sampling and estimation. Every
//! algebraic routine in the crate is generic over [`Scalar`], so the same
//! code path runs in both modes.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Comparison tolerance for float mode on unit-normalized data.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Float,
    Rational,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Float => "float",
            Mode::Rational => "rational",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "float" | "f64" => Ok(Mode::Float),
            "rational" | "exact" => Ok(Mode::Rational),
            other => Err(Error::Json(format!("unknown mode {other:?}"))),
        }
    }
}

/// A field of characteristic zero, realized either exactly or in floating point.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
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
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Exact conversion for rationals (binary expansion of the float).
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Magnitude used for pivot selection and reporting.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Zero test. Exact in rational mode; `|x| <= FLOAT_TOLERANCE * scale` in float mode.
    fn is_negligible(&self, scale: f64) -> bool;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn is_exact() -> bool {
        Self::MODE == Mode::Rational
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn magnitude(&self) -> f64 {
        f64::abs(*self)
    }

    fn is_negligible(&self, scale: f64) -> bool {
        f64::abs(*self) <= FLOAT_TOLERANCE * scale
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Json(format!("not a finite number: {n}"))),
            Value::String(s) => parse_rational(s).map(|r| Scalar::to_f64(&r)),
            other => Err(Error::Json(format!("expected scalar, found {other}"))),
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).unwrap_or_else(Rational::zero)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_i64(i))
                } else {
                    let f = n
                        .as_f64()
                        .ok_or_else(|| Error::Json(format!("not a finite number: {n}")))?;
                    Ok(<Rational as Scalar>::from_f64(f))
                }
            }
            other => Err(Error::Json(format!("expected scalar, found {other}"))),
        }
    }
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Json(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Largest magnitude in a slice (0 for an empty slice).
pub fn max_magnitude<S: Scalar>(values: &[S]) -> f64 {
    values.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

/// Largest-magnitude element, returned as a scalar (`None` if all zero).
pub fn max_abs_element<S: Scalar>(values: &[S]) -> Option<S> {
    let mut best: Option<(f64, &S)> = None;
    for v in values {
        let m = v.magnitude();
        if m > 0.0 && best.is_none_or(|(bm, _)| m > bm) {
            best = Some((m, v));
        }
    }
    best.map(|(_, v)| v.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_json_roundtrip() {
        let r = Rational::from_ratio(-6, 4);
        let v = r.to_json();
        assert_eq!(v, Value::String("-3/2".into()));
        assert_eq!(Rational::from_json(&v).unwrap(), r);
        assert_eq!(Rational::from_json(&serde_json::json!(7)).unwrap(), Rational::from_i64(7));
    }

    #[test]
    fn float_accepts_rational_strings() {
        let v = Value::String("1/4".into());
        assert_eq!(f64::from_json(&v).unwrap(), 0.25);
    }

    #[test]
    fn malformed_rational_rejected() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn negligible_semantics() {
        assert!(1e-12_f64.is_negligible(1.0));
        assert!(!1e-6_f64.is_negligible(1.0));
        assert!(!Rational::from_ratio(1, 1_000_000_000_000).is_negligible(1.0));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("Rational".parse::<Mode>().unwrap(), Mode::Rational);
        assert!("complex".parse::<Mode>().is_err());
    }
}
