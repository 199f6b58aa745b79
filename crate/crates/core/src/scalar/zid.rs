use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::exact_isqrt;

/// Element `p + q·ω` of `Z[i√d]`, `ω = i√d`, so `ω² = −d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Zid {
    pub p: BigInt,
    pub q: BigInt,
    pub d: BigInt,
}

impl Zid {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        Zid {
            p: p.into(),
            q: q.into(),
            d: d.into(),
        }
    }

    pub fn zero(d: &BigInt) -> Self {
        Zid::new(0, 0, d.clone())
    }

    pub fn one(d: &BigInt) -> Self {
        Zid::new(1, 0, d.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// `|x|² = p² + d q²`.
    pub fn norm(&self) -> BigInt {
        &self.p * &self.p + &self.d * &self.q * &self.q
    }

    pub fn conj(&self) -> Self {
        Zid::new(self.p.clone(), -self.q.clone(), self.d.clone())
    }

    pub fn is_real(&self) -> bool {
        self.q.is_zero()
    }

    /// Square root inside `Z[i√d]`, if one exists.
    ///
    /// With `r² − d s² = p` and `2rs = q`, `|x| = r² + d s²` is an integer.
    pub fn sqrt(&self) -> Option<Zid> {
        let n = exact_isqrt(&self.norm())?;
        let two = BigInt::from(2);
        let r2 = &n + &self.p;
        if !(&r2 % &two).is_zero() {
            return None;
        }
        let r = exact_isqrt(&(&r2 / &two))?;
        let ds2 = &n - &self.p;
        if !(&ds2 % (&two * &self.d)).is_zero() {
            return None;
        }
        let s = exact_isqrt(&(&ds2 / (&two * &self.d)))?;
        for (rr, ss) in [(r.clone(), s.clone()), (r.clone(), -s.clone())] {
            let c = Zid::new(rr, ss, self.d.clone());
            if c.clone() * c.clone() == *self {
                return Some(c);
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Exact division when `rhs | self` in `Z[i√d]`.
    pub fn div_exact(&self, rhs: &Zid) -> Option<Zid> {
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        let num = self.clone() * rhs.conj();
        if !(&num.p % &n).is_zero() || !(&num.q % &n).is_zero() {
            return None;
        }
        Some(Zid::new(&num.p / &n, &num.q / &n, self.d.clone()))
    }

    /// Real and imaginary parts as floats.
    pub fn to_c64(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let sd = self.d.to_f64().unwrap_or(f64::NAN).sqrt();
        num_complex::Complex64::new(
            self.p.to_f64().unwrap_or(f64::NAN),
            self.q.to_f64().unwrap_or(f64::NAN) * sd,
        )
    }

    /// Crude size bound used to cap searches.
    pub fn max_abs(&self) -> BigInt {
        self.p.abs().max(self.q.abs())
    }

    /// `⌊√|x|²⌋`, an integer approximation of `|x|`.
    pub fn abs_floor(&self) -> BigInt {
        self.norm().sqrt()
    }
}

impl Add for Zid {
    type Output = Zid;
    fn add(self, r: Zid) -> Zid {
        Zid::new(self.p + r.p, self.q + r.q, self.d)
    }
}

impl Sub for Zid {
    type Output = Zid;
    fn sub(self, r: Zid) -> Zid {
        Zid::new(self.p - r.p, self.q - r.q, self.d)
    }
}

impl Mul for Zid {
    type Output = Zid;
    fn mul(self, r: Zid) -> Zid {
        let p = &self.p * &r.p - &self.d * &self.q * &r.q;
        let q = &self.p * &r.q + &self.q * &r.p;
        Zid::new(p, q, self.d)
    }
}

impl Neg for Zid {
    type Output = Zid;
    fn neg(self) -> Zid {
        Zid::new(-self.p, -self.q, self.d)
    }
}

impl fmt::Display for Zid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = if self.d.is_one() {
            "i".to_string()
        } else {
            format!("i√{}", self.d)
        };
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => write!(f, "{}", self.p),
            (true, false) => write!(f, "{}{}", coef(&self.q), unit),
            (false, false) => {
                let sign = if self.q.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}{}", self.p, sign, coef(&self.q.abs()), unit)
            }
        }
    }
}

fn coef(q: &BigInt) -> String {
    if q.is_one() {
        String::new()
    } else if *q == -BigInt::one() {
        "-".into()
    } else {
        q.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots() {
        let d = BigInt::from(1);
        // (2+i)² = 3+4i
        let x = Zid::new(3, 4, d.clone());
        let r = x.sqrt().unwrap();
        assert_eq!(r.clone() * r, x);
        assert!(Zid::new(1, 1, d.clone()).sqrt().is_none());
        assert!(Zid::new(-4, 0, d).is_square());
        // d = 2: (1+ω)² = 1 − 2 + 2ω
        let y = Zid::new(-1, 2, 2);
        assert!(y.is_square());
    }

    #[test]
    fn exact_division() {
        let a = Zid::new(3, 4, 1);
        let b = Zid::new(2, 1, 1);
        assert_eq!(a.div_exact(&b), Some(b.clone()));
        assert_eq!(Zid::new(1, 0, 1).div_exact(&b), None);
    }

    #[test]
    fn display() {
        assert_eq!(Zid::new(1, -1, 1).to_string(), "1-i");
        assert_eq!(Zid::new(0, 2, 3).to_string(), "2i√3");
        assert_eq!(Zid::new(-2, 0, 1).to_string(), "-2");
    }
}
