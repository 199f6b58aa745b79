//! Exact scalars: big rationals and real quadratic extensions `Q(√D)`.
//!
//! Everything above this module is generic over [`Scalar`], so the same
//! Clifford/CF code runs on `Rational`, `QuadExt`, or (for numeric
//! cross-checks only) `f64`.

mod mat2;
mod quad;
mod zid;

pub use quad::{squarefree_part, QuadExt};
pub use mat2::Mat2;
pub use zid::Zid;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational; always stored reduced with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("mixed radicands: √{0} and √{1} in one computation")]
    MixedRadicand(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Shorthand constructor for `n/d`.
///
/// # Panics
/// If `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Floor division on big integers (rounds toward −∞).
pub fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = exact_isqrt(r.numer())?;
    let d = exact_isqrt(r.denom())?;
    Some(Rational::new(n, d))
}

/// `Some(s)` with `s² = n` when `n` is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Common interface of the exact (and approximate) scalar types.
///
/// `signum` and `floor_int` must be exact for the exact types: lattice
/// rounding and period detection are built on them.
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
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(r: &Rational) -> Self;
    /// Exact sign: −1, 0 or +1.
    fn signum(&self) -> i8;
    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError>;
    /// Largest integer `≤ self`.
    fn floor_int(&self) -> BigInt;
    fn as_f64(&self) -> f64;
    /// `Some` when the value is rational.
    fn to_rational(&self) -> Option<Rational>;
    /// `√r` when it is representable in this type.
    fn sqrt_of(r: &Rational) -> Option<Self>;
    /// Whether results of this type are exact (false only for `f64`).
    fn is_exact() -> bool {
        true
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }
    fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(&Rational::from_integer(n.clone()))
    }
    /// Nearest integer with the half-open convention `x − round(x) ∈ [−1/2, 1/2)`.
    fn round_half_up(&self) -> BigInt {
        (self.clone() + Self::from_rational(&rat(1, 2))).floor_int()
    }
    fn cmp_exact(&self, other: &Self) -> std::cmp::Ordering {
        match (self.clone() - other.clone()).signum() {
            -1 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        }
    }
    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn signum(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn floor_int(&self) -> BigInt {
        self.floor().to_integer()
    }
    fn as_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn sqrt_of(r: &Rational) -> Option<Self> {
        rational_sqrt(r)
    }
}

/// Floating approximation for an arbitrarily large rational.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerator/denominator: shift both down to keep the ratio.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ratio_to_f64(r)
    }
    fn signum(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if *rhs == 0.0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn floor_int(&self) -> BigInt {
        BigInt::from_f64(self.floor()).unwrap_or_default()
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Option<Rational> {
        None
    }
    fn sqrt_of(r: &Rational) -> Option<Self> {
        let v = ratio_to_f64(r);
        (v >= 0.0).then(|| v.sqrt())
    }
    fn is_exact() -> bool {
        false
    }
}

/// Text form used throughout the crate: `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q` (optionally signed).
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    let bad = || ScalarError::Parse(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_half_open() {
        assert_eq!(rat(1, 2).round_half_up(), BigInt::from(1));
        assert_eq!(rat(-1, 2).round_half_up(), BigInt::from(0));
        assert_eq!(rat(7, 10).round_half_up(), BigInt::from(1));
        assert_eq!(rat(-7, 10).round_half_up(), BigInt::from(-1));
    }

    #[test]
    fn rational_text_roundtrip() {
        for s in ["0", "-3", "7/9", "-22/7"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn huge_ratio_to_float() {
        let big = BigInt::from(3) << 3000usize;
        let r = Rational::new(big.clone() + 1, big);
        assert!((ratio_to_f64(&r) - 1.0).abs() < 1e-12);
    }
}
