use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, ratio_to_f64, Rational, Scalar, ScalarError};

/// Primes beyond this bound are not searched when extracting square factors;
/// a leftover cofactor is still checked for being a perfect square.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Write `n = s² · core` with `core` square-free (up to the trial-division
/// bound, see module docs). Returns `(s, core)`. `n` must be non-negative.
pub fn squarefree_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative(), "squarefree_part of a negative number");
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut core = BigInt::one();
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            s *= bp.pow(e / 2);
            if e % 2 == 1 {
                core *= &bp;
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            s *= r;
        } else {
            core *= rest;
        }
    }
    (s, core)
}

/// Exact real number `a + b√D`, `D` square-free, canonical (`b = 0 ⇔ D = 0`).
///
/// Equality and hashing are structural, which is sound because the
/// representation is canonical. Arithmetic between two irrational values
/// with different radicands panics; use the `checked_*` methods when the
/// inputs come from outside.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: impl Into<BigInt>) -> Result<Self, ScalarError> {
        let d = d.into();
        if d.is_negative() {
            return Err(ScalarError::NegativeRadicand(d));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Self::rational(a));
        }
        let (s, core) = squarefree_part(&d);
        let b = b * Rational::from_integer(s);
        if core.is_one() {
            return Ok(Self::rational(a + b));
        }
        Ok(QuadExt { a, b, d: core })
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt {
            a,
            b: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    /// `√r` for a non-negative rational `r` (as `√(pq)/q`).
    pub fn sqrt_rational(r: &Rational) -> Result<Self, ScalarError> {
        if r.is_negative() {
            return Err(ScalarError::NegativeRadicand(r.numer().clone()));
        }
        let q = r.denom().clone();
        Self::new(
            Rational::zero(),
            Rational::new(BigInt::one(), q.clone()),
            r.numer() * q,
        )
    }

    pub fn sqrt_int(n: impl Into<BigInt>) -> Result<Self, ScalarError> {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    /// Square-free radicand; `0` for rational values.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b√D`.
    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm `a² − b²D`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    fn shared_radicand(&self, other: &Self) -> Result<BigInt, ScalarError> {
        if self.b.is_zero() {
            Ok(other.d.clone())
        } else if other.b.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(ScalarError::MixedRadicand(self.d.clone(), other.d.clone()))
        }
    }

    fn build(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadExt { a, b, d }
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let d = self.shared_radicand(rhs)?;
        Ok(Self::build(&self.a + &rhs.a, &self.b + &rhs.b, d))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let d = self.shared_radicand(rhs)?;
        Ok(Self::build(&self.a - &rhs.a, &self.b - &rhs.b, d))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let d = self.shared_radicand(rhs)?;
        let dr = Rational::from_integer(d.clone());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(Self::build(a, b, d))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.shared_radicand(rhs)?;
        let inv = rhs.inv()?;
        self.checked_mul(&inv)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::build(
            &self.a / &n,
            -(&self.b / &n),
            self.d.clone(),
        ))
    }

    /// Exact sign by comparing `a²` with `b²D`.
    pub fn sign(&self) -> i8 {
        let sa = Scalar::signum(&self.a);
        let sb = Scalar::signum(&self.b);
        if sb == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        if sa == 0 {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.clone());
        // a² = b²D is impossible for square-free D > 1.
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    /// Exact floor via an integer square root of `B²D`.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let q = self.a.denom().lcm(self.b.denom());
        let qa = (&self.a * Rational::from_integer(q.clone())).to_integer();
        let qb = (&self.b * Rational::from_integer(q.clone())).to_integer();
        let r = (&qb * &qb * &self.d).sqrt();
        // B√D is irrational, so floor(−y) = −floor(y) − 1.
        let f = if qb.is_positive() { r } else { -r - 1 };
        (qa + f).div_floor(&q)
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Scalar for QuadExt {
    fn from_rational(r: &Rational) -> Self {
        Self::rational(r.clone())
    }
    fn signum(&self) -> i8 {
        self.sign()
    }
    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.checked_div(rhs)
    }
    fn floor_int(&self) -> BigInt {
        self.floor()
    }
    fn as_f64(&self) -> f64 {
        if self.b.is_zero() {
            return ratio_to_f64(&self.a);
        }
        let s = ratio_to_f64(&Rational::from_integer(self.d.clone())).sqrt();
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * s
    }
    fn to_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }
    fn sqrt_of(r: &Rational) -> Option<Self> {
        Self::sqrt_rational(r).ok()
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                self.$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a> $tr<&'a QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let mut out = String::new();
        if !self.a.is_zero() {
            out.push_str(&fmt_rational(&self.a));
            out.push(if self.b.is_positive() { '+' } else { '-' });
        } else if self.b.is_negative() {
            out.push('-');
        }
        let mag = self.b.abs();
        if !mag.is_one() {
            out.push_str(&fmt_rational(&mag));
        }
        out.push('√');
        out.push_str(&self.d.to_string());
        f.write_str(&out)
    }
}

impl FromStr for QuadExt {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::clifford::parse_scalar(s).map_err(|e| match e {
            crate::clifford::ParseError::Scalar(e) => e,
            other => ScalarError::Parse(other.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn q(a: Rational, b: Rational, d: i64) -> QuadExt {
        QuadExt::new(a, b, d).unwrap()
    }

    #[test]
    fn golden_ratio_times_conjugate() {
        let phi = q(rat(1, 2), rat(1, 2), 5);
        assert_eq!(phi.clone() * phi.conj(), QuadExt::from(rat(-1, 1)));
    }

    #[test]
    fn self_division_and_inverse() {
        let x = q(rat(3, 1), rat(2, 1), 2);
        assert_eq!(&x / &x, QuadExt::one());
        let y = q(rat(1, 1), rat(1, 1), 2);
        assert_eq!(y.inv().unwrap(), q(rat(-1, 1), rat(1, 1), 2));
        assert_eq!(y.clone() * y.inv().unwrap(), QuadExt::one());
    }

    #[test]
    fn radicand_is_reduced() {
        let r8 = QuadExt::sqrt_int(8).unwrap();
        assert_eq!(r8, q(rat(0, 1), rat(2, 1), 2));
        assert!(QuadExt::sqrt_int(9).unwrap().is_rational());
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_003u64) * 7;
        assert_eq!(squarefree_part(&big), (BigInt::from(1_000_003u64), BigInt::from(7)));
        assert_eq!(QuadExt::sqrt_rational(&rat(1, 2)).unwrap(), q(rat(0, 1), rat(1, 2), 2));
    }

    #[test]
    fn signs() {
        assert_eq!(QuadExt::zero().sign(), 0);
        assert_eq!(q(rat(1, 1), rat(-1, 1), 2).sign(), -1);
        assert_eq!(q(rat(3, 2), rat(-1, 2), 5).sign(), 1);
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let a = QuadExt::sqrt_int(2).unwrap();
        let b = QuadExt::sqrt_int(3).unwrap();
        assert!(matches!(a.checked_add(&b), Err(ScalarError::MixedRadicand(..))));
        assert!(matches!(
            QuadExt::one().checked_div(&QuadExt::zero()),
            Err(ScalarError::DivisionByZero)
        ));
    }

    #[test]
    fn floor_matches_float() {
        for (x, f) in [
            (q(rat(0, 1), rat(1, 1), 2), 1),
            (q(rat(0, 1), rat(-1, 1), 2), -2),
            (q(rat(-1, 1), rat(1, 1), 2), 0),
            (q(rat(1, 2), rat(1, 2), 5), 1),
            (q(rat(-1, 4), rat(-1, 4), 3), -1),
        ] {
            assert_eq!(x.floor(), BigInt::from(f), "{x}");
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(rat(1, 2), rat(1, 2), 5).to_string(), "1/2+1/2√5");
        assert_eq!(q(rat(0, 1), rat(-1, 1), 3).to_string(), "-√3");
        assert_eq!(q(rat(-1, 4), rat(-3, 4), 3).to_string(), "-1/4-3/4√3");
    }

    /// Independent sign oracle: 128 fractional bits of fixed point for √D.
    fn fixed_point_sign(x: &QuadExt) -> Option<i8> {
        let shift = 128usize;
        let s = (x.radicand() << (2 * shift)).sqrt();
        let one = BigInt::one() << shift;
        let approx = x.a() * Rational::from_integer(one.clone())
            + x.b() * Rational::from_integer(s);
        let approx = approx / Rational::from_integer(one);
        let eps = Rational::new(BigInt::one(), BigInt::from(10u64.pow(10)));
        if approx.abs() <= eps {
            return None;
        }
        Some(if approx.is_positive() { 1 } else { -1 })
    }

    fn arb_q(d: i64) -> impl Strategy<Value = QuadExt> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(move |(a, ad, b, bd)| QuadExt::new(rat(a, ad), rat(b, bd), d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn field_axioms((x, y, z) in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10])
                .prop_flat_map(|d| (arb_q(d), arb_q(d), arb_q(d)))) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
        }

        #[test]
        fn sign_agrees_with_fixed_point((x, d) in (-10_000i64..10_000, 1i64..500, -10_000i64..10_000, 1i64..500, 2i64..200)
            .prop_map(|(a, ad, b, bd, d)| (QuadExt::new(rat(a, ad), rat(b, bd), d).unwrap(), d))) {
            let _ = d;
            if let Some(s) = fixed_point_sign(&x) {
                prop_assert_eq!(x.sign(), s);
            }
            // floor is consistent with sign: 0 ≤ x − ⌊x⌋ < 1
            let f = QuadExt::from(Rational::from_integer(x.floor()));
            prop_assert!((&x - &f).sign() >= 0);
            prop_assert!((&(&x - &f) - &QuadExt::one()).sign() < 0);
        }

        #[test]
        fn canonical_idempotent(a in -100i64..100, b in -100i64..100, d in 0i64..400) {
            let x = QuadExt::new(rat(a, 3), rat(b, 7), d).unwrap();
            let again = QuadExt::new(x.a().clone(), x.b().clone(), x.radicand().clone()).unwrap();
            prop_assert_eq!(x, again);
        }
    }

    #[test]
    fn sign_bulk_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..100_000 {
            let d: i64 = rng.gen_range(2..1000);
            let x = QuadExt::new(
                rat(rng.gen_range(-1_000_000..1_000_000), rng.gen_range(1..1000)),
                rat(rng.gen_range(-1_000_000..1_000_000), rng.gen_range(1..1000)),
                d,
            )
            .unwrap();
            if let Some(s) = fixed_point_sign(&x) {
                assert_eq!(x.sign(), s, "{x}");
                checked += 1;
            }
        }
        assert!(checked > 99_000);
    }
}
