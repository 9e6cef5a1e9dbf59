//! The coefficient field.
//!
//! Kernels are generic over [`Scalar`], which has two implementations:
//! [`Rational`] (exact, the primary mode) and `f64` (float fallback). Since
//! the mode lives in the type, mixing modes is a compile error; the only
//! runtime mode checks happen when parsing JSON or text input.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse { position: 0, message: format!("unknown mode `{other}`") }),
        }
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_i64(n as i64)
    }

    fn from_rational(r: &Rational) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(num.into(), den.into()))
    }

    fn to_f64(&self) -> f64;

    /// The value as an integer, if it is one exactly.
    fn to_integer(&self) -> Option<i64>;

    /// Integer power; `0^e` for negative `e` panics.
    fn powi(&self, e: i64) -> Self;

    /// Real power, available in float mode only.
    fn powf(&self, _e: &Self) -> Option<Self> {
        None
    }

    /// Natural logarithm, available in float mode only.
    fn ln(&self) -> Option<Self> {
        None
    }

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    /// Parses `"p/q"`, `"p"` or (float mode) a decimal literal.
    fn parse_scalar(s: &str) -> Result<Self>;
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            num::pow(self.clone(), e as usize)
        } else {
            assert!(!Zero::is_zero(self), "zero raised to a negative power");
            num::pow(self.recip(), e.unsigned_abs() as usize)
        }
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse_scalar(s),
            other => Err(Error::ModeMismatch { expected: "exact", found: format!("JSON value {other}") }),
        }
    }

    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |message: String| Error::Parse { position: 0, message };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        if num.contains('.') || den.contains('.') || num.contains('e') {
            return Err(Error::ModeMismatch {
                expected: "exact",
                found: format!("decimal literal `{s}`"),
            });
        }
        let n = BigInt::from_str(num).map_err(|e| bad(format!("`{s}`: {e}")))?;
        let d = BigInt::from_str(den).map_err(|e| bad(format!("`{s}`: {e}")))?;
        if Zero::is_zero(&d) {
            return Err(bad(format!("`{s}`: zero denominator")));
        }
        Ok(Rational::new(n, d))
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_integer(&self) -> Option<i64> {
        if self.fract() == 0.0 && self.abs() < 9.0e15 {
            Some(*self as i64)
        } else {
            None
        }
    }

    fn powi(&self, e: i64) -> Self {
        f64::powi(*self, e as i32)
    }

    fn powf(&self, e: &Self) -> Option<Self> {
        Some(f64::powf(*self, *e))
    }

    fn ln(&self) -> Option<Self> {
        (*self > 0.0).then(|| f64::ln(*self))
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse { position: 0, message: format!("bad number {n}") }),
            other => Err(Error::ModeMismatch { expected: "float", found: format!("JSON value {other}") }),
        }
    }

    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            let r = Rational::parse_scalar(s)?;
            return Ok(<f64 as Scalar>::from_rational(&r));
        }
        f64::from_str(s).map_err(|e| Error::Parse { position: 0, message: format!("`{s}`: {e}") })
    }
}

/// `n!` in the field.
pub fn factorial<S: Scalar>(n: usize) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * S::from_usize(k))
}

/// Falling factorial `(s)_n = s (s-1) ... (s-n+1)`.
pub fn falling<S: Scalar>(s: &S, n: usize) -> S {
    (0..n).fold(S::one(), |acc, i| acc * (s.clone() - S::from_usize(i)))
}

/// Generalized binomial coefficient `(s)_n / n!`.
pub fn gbinom<S: Scalar>(s: &S, n: usize) -> S {
    falling(s, n) / factorial::<S>(n)
}

/// Gaussian binomial coefficient `[s choose p]_q`.
///
/// At `q = 1` this is the classical [`gbinom`] and `s` may be any scalar.
/// Otherwise `s` must be an integer in exact mode (negative values allowed,
/// giving the usual q-analogue of the upper-negation rule).
pub fn qbinom<S: Scalar>(s: &S, p: usize, q: &S) -> Result<S> {
    if q.is_one() {
        return Ok(gbinom(s, p));
    }
    let mut acc = S::one();
    match s.to_integer() {
        Some(si) => {
            for i in 1..=p as i64 {
                let num = q.powi(si - i + 1) - S::one();
                let den = q.powi(i) - S::one();
                if den.is_zero() {
                    return Err(Error::pre("qbinom", format!("q = {q} is a root of unity")));
                }
                acc = acc * num / den;
            }
        }
        None => {
            for i in 1..=p as i64 {
                let e = s.clone() - S::from_i64(i - 1);
                let num = q.powf(&e).ok_or_else(|| {
                    Error::pre("qbinom", format!("q != 1 requires integer s in exact mode, got {s}"))
                })? - S::one();
                acc = acc * num / (q.powi(i) - S::one());
            }
        }
    }
    Ok(acc)
}
