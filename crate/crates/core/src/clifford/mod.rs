//! The Clifford algebra `A_n` (`n ≤ 3`, `e_i² = −1`, `e_i e_j = −e_j e_i`)
//! and 2×2 Clifford (Vahlen) matrices acting by Möbius transformations.
//!
//! Coefficients are indexed by blade bitmask: bit `k−1` set means `e_k` is
//! present, so index `0b011` is `e1e2`. Vectors of `R^{n+1}` are the
//! elements `x0 + x1 e1 + … + xn en`.

mod linalg;
mod matrix;
mod parse;

pub use linalg::{nullspace, solve};
pub use matrix::{
    CliffordMatrix, Ext, MembershipLevel, MobiusError, ValidationReport,
};
pub use parse::{
    parse_element, parse_matrix, parse_point, parse_scalar, split_top_level, ParseError,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{Rational, Scalar, ScalarError};

pub const MAX_RANK: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("x·x̄ is not a scalar")]
    NotScalarNorm,
    #[error("division by zero")]
    DivisionByZero,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Sign of `e_A e_B = ± e_{A△B}`: one factor −1 per transposition needed to
/// sort the concatenated word, and one per shared generator (`e_i² = −1`).
pub fn blade_sign(a: usize, b: usize) -> i8 {
    let mut swaps = 0u32;
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn grade(blade: usize) -> u32 {
    blade.count_ones()
}

/// Name of a blade in the text syntax: `""`, `"e1"`, `"e1e2"`, …
pub fn blade_name(blade: usize) -> String {
    (0..MAX_RANK)
        .filter(|k| blade & (1 << k) != 0)
        .map(|k| format!("e{}", k + 1))
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CliffordElement<S> {
    n: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> CliffordElement<S> {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_RANK, "Clifford rank {n} > {MAX_RANK}");
        CliffordElement {
            n,
            coeffs: vec![S::zero(); 1 << n],
        }
    }

    pub fn scalar(n: usize, s: S) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = s;
        e
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, S::one())
    }

    pub fn from_int(n: usize, k: i64) -> Self {
        Self::scalar(n, S::from_int(k))
    }

    /// Basis blade `e_I` from its bitmask.
    pub fn blade(n: usize, mask: usize) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[mask] = S::one();
        e
    }

    /// `e_k`, `1 ≤ k ≤ n`.
    pub fn e(n: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= n);
        Self::blade(n, 1 << (k - 1))
    }

    /// Vector `x0 + x1 e1 + … + xn en` from its `n+1` coordinates.
    pub fn vector(n: usize, xs: &[S]) -> Self {
        assert_eq!(xs.len(), n + 1, "vector in A_{n} needs {} coordinates", n + 1);
        let mut e = Self::zero(n);
        e.coeffs[0] = xs[0].clone();
        for (k, x) in xs.iter().enumerate().skip(1) {
            e.coeffs[1 << (k - 1)] = x.clone();
        }
        e
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), 1 << n);
        CliffordElement { n, coeffs }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, mask: usize) -> &S {
        &self.coeffs[mask]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, mask: usize, s: S) {
        self.coeffs[mask] = s;
    }

    pub fn scalar_part(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_scalar(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    /// Grade ≤ 1.
    pub fn is_vector(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| grade(m) <= 1 || c.is_zero())
    }

    /// Coordinates `(x0, …, xn)` if the element is a vector.
    pub fn to_vector(&self) -> Option<Vec<S>> {
        if !self.is_vector() {
            return None;
        }
        Some(self.vector_coords())
    }

    /// Grade-≤1 coordinates, ignoring higher grades.
    pub fn vector_coords(&self) -> Vec<S> {
        let mut v = vec![self.coeffs[0].clone()];
        v.extend((0..self.n).map(|k| self.coeffs[1 << k].clone()));
        v
    }

    pub fn scale(&self, s: &S) -> Self {
        CliffordElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    fn map_signs(&self, sign: impl Fn(usize) -> bool) -> Self {
        CliffordElement {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| if sign(m) { -c.clone() } else { c.clone() })
                .collect(),
        }
    }

    /// Main involution `x′`: every `e_i ↦ −e_i`.
    pub fn involution(&self) -> Self {
        self.map_signs(|m| grade(m) % 2 == 1)
    }

    /// Reversion `x*`: reverses blade order, sign `(−1)^{k(k−1)/2}` on grade k.
    pub fn reversion(&self) -> Self {
        self.map_signs(|m| {
            let k = grade(m);
            (k * k.saturating_sub(1) / 2) % 2 == 1
        })
    }

    /// Conjugate `x̄ = (x′)*`.
    pub fn conjugate(&self) -> Self {
        self.map_signs(|m| {
            let k = grade(m);
            (k + k * k.saturating_sub(1) / 2) % 2 == 1
        })
    }

    /// `‖x‖² = x x̄`, required to be a scalar.
    pub fn norm_sq(&self) -> Result<S, CliffordError> {
        let p = self.clone() * self.conjugate();
        if !p.is_scalar_approx() {
            return Err(CliffordError::NotScalarNorm);
        }
        Ok(p.coeffs[0].clone())
    }

    /// Sum of squared coefficients (the Euclidean norm on `R^{2^n}`).
    pub fn coeff_norm_sq(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn inverse(&self) -> Result<Self, CliffordError> {
        let n2 = self.norm_sq()?;
        if n2.is_zero() {
            return Err(CliffordError::DivisionByZero);
        }
        let inv = S::one().try_div(&n2)?;
        Ok(self.conjugate().scale(&inv))
    }

    /// Exact scalar test for exact types; tolerance for floats.
    fn is_scalar_approx(&self) -> bool {
        if S::is_exact() {
            return self.is_scalar();
        }
        let tol = 1e-9 * (1.0 + self.coeffs[0].as_f64().abs());
        self.coeffs.iter().skip(1).all(|c| c.as_f64().abs() <= tol)
    }

    /// Vector test with a float tolerance for inexact scalar types.
    pub fn is_vector_approx(&self) -> bool {
        if S::is_exact() {
            return self.is_vector();
        }
        let scale = 1.0 + self.coeffs.iter().map(|c| c.as_f64().abs()).fold(0.0, f64::max);
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| grade(m) <= 1 || c.as_f64().abs() <= 1e-9 * scale)
    }

    /// Drop all grade ≥ 2 components.
    pub fn vector_part(&self) -> Self {
        let mut e = self.clone();
        for m in 0..e.coeffs.len() {
            if grade(m) >= 2 {
                e.coeffs[m] = S::zero();
            }
        }
        e
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.clone() * other.clone() - other.clone() * self.clone()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CliffordElement<T> {
        CliffordElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> CliffordElement<f64> {
        self.map(|c| c.as_f64())
    }

    /// Embed into a larger algebra (same blades, extra coefficients zero).
    pub fn lift(&self, n: usize) -> Self {
        assert!(n >= self.n);
        let mut e = Self::zero(n);
        for (m, c) in self.coeffs.iter().enumerate() {
            e.coeffs[m] = c.clone();
        }
        e
    }

    pub fn from_rational_coeffs(n: usize, rs: &[Rational]) -> Self {
        Self::from_coeffs(n, rs.iter().map(S::from_rational).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| acc * self.clone())
    }
}

impl<S: Scalar> Add for CliffordElement<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n, "Clifford rank mismatch");
        CliffordElement {
            n: self.n,
            coeffs: self
                .coeffs
                .into_iter()
                .zip(rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for CliffordElement<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for CliffordElement<S> {
    type Output = Self;
    fn neg(self) -> Self {
        CliffordElement {
            n: self.n,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<S: Scalar> Mul for CliffordElement<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n, "Clifford rank mismatch");
        let mut out = Self::zero(self.n);
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x.clone() * y.clone();
                let k = i ^ j;
                out.coeffs[k] = if blade_sign(i, j) > 0 {
                    out.coeffs[k].clone() + t
                } else {
                    out.coeffs[k].clone() - t
                };
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for CliffordElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let mag = if neg { -c.clone() } else { c.clone() };
            let mut s = mag.to_string();
            if s.chars().skip(1).any(|ch| ch == '+' || ch == '-') {
                s = format!("({s})");
            }
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m == 0 {
                out.push_str(&s);
            } else {
                if s != "1" {
                    out.push_str(&s);
                    out.push(' ');
                }
                out.push_str(&blade_name(m));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Quaternion embedding of `A₂`: `i = e1`, `j = e2`, `k = e1e2`.
pub mod quat {
    use super::CliffordElement;
    use crate::scalar::Scalar;

    pub fn i<S: Scalar>() -> CliffordElement<S> {
        CliffordElement::blade(2, 0b01)
    }
    pub fn j<S: Scalar>() -> CliffordElement<S> {
        CliffordElement::blade(2, 0b10)
    }
    pub fn k<S: Scalar>() -> CliffordElement<S> {
        CliffordElement::blade(2, 0b11)
    }
    /// `w + x i + y j + z k`.
    pub fn from_wxyz<S: Scalar>(w: S, x: S, y: S, z: S) -> CliffordElement<S> {
        CliffordElement::from_coeffs(2, vec![w, x, y, z])
    }
    /// Real part of `x ȳ` — the quaternion inner product `Re(x ȳ)`.
    pub fn re_mul_conj<S: Scalar>(x: &CliffordElement<S>, y: &CliffordElement<S>) -> S {
        (x.clone() * y.conjugate()).scalar_part().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, QuadExt};
    use num_traits::One;
    use proptest::prelude::*;

    type E = CliffordElement<Rational>;

    fn arb_elem(n: usize) -> impl Strategy<Value = E> {
        prop::collection::vec((-9i64..10, 1i64..5), 1 << n).prop_map(move |v| {
            E::from_coeffs(n, v.into_iter().map(|(a, b)| rat(a, b)).collect())
        })
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = E> {
        prop::collection::vec((-9i64..10, 1i64..5), n + 1).prop_map(move |v| {
            let xs: Vec<Rational> = v.into_iter().map(|(a, b)| rat(a, b)).collect();
            E::vector(n, &xs)
        })
    }

    /// Independent oracle: multiply generator words symbol by symbol.
    fn word_product(word: &[usize]) -> (i8, usize) {
        let mut w: Vec<usize> = word.to_vec();
        let mut sign = 1i8;
        // bubble sort, cancelling equal neighbours
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < w.len() {
                if w[i] == w[i + 1] {
                    w.drain(i..i + 2);
                    sign = -sign;
                    changed = true;
                } else if w[i] > w[i + 1] {
                    w.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                    i += 1;
                } else {
                    i += 1;
                }
            }
            if !changed {
                break;
            }
        }
        (sign, w.iter().fold(0, |m, &k| m | (1 << k)))
    }

    #[test]
    fn blade_products_match_word_oracle() {
        for a in 0..8usize {
            for b in 0..8usize {
                let word: Vec<usize> = (0..3)
                    .filter(|k| a & (1 << k) != 0)
                    .chain((0..3).filter(|k| b & (1 << k) != 0))
                    .collect();
                let (s, m) = word_product(&word);
                assert_eq!((blade_sign(a, b), a ^ b), (s, m), "{a} {b}");
            }
        }
    }

    #[test]
    fn generator_relations() {
        for n in 1..=3 {
            for i in 1..=n {
                let ei = E::e(n, i);
                assert_eq!(ei.clone() * ei.clone(), E::from_int(n, -1));
                for j in 1..=n {
                    if i != j {
                        let ej = E::e(n, j);
                        assert_eq!(ei.clone() * ej.clone(), -(ej * ei.clone()));
                    }
                }
            }
        }
        assert_eq!(E::e(2, 1) * E::e(2, 2), E::blade(2, 0b11));
    }

    #[test]
    fn quaternion_table() {
        let one = E::one(2);
        let (i, j, k) = (quat::i(), quat::j(), quat::k());
        let basis = [one.clone(), i.clone(), j.clone(), k.clone()];
        // Hamilton's table: rows x, columns y, entry (sign, index into basis)
        let table = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        for (r, x) in basis.iter().enumerate() {
            for (c, y) in basis.iter().enumerate() {
                let (s, idx) = table[r][c];
                let expect = if s > 0 { basis[idx].clone() } else { -basis[idx].clone() };
                assert_eq!(x.clone() * y.clone(), expect);
            }
        }
    }

    #[test]
    fn paper_elements() {
        let p = quat::i::<Rational>() + quat::j();
        assert_eq!(p.clone() * p.clone(), E::from_int(2, -2));
        assert_eq!(p.inverse().unwrap(), p.scale(&rat(-1, 2)));
        let h = (E::one(3) + E::e(3, 1) + E::e(3, 2) + E::e(3, 3)).scale(&rat(1, 2));
        assert_eq!(h.clone() * h.clone(), h - E::one(3));
    }

    #[test]
    fn involutions_on_blades() {
        let k = E::blade(2, 0b11);
        assert_eq!(k.involution(), k);
        assert_eq!(k.reversion(), -k.clone());
        let v = E::vector(2, &[rat(1, 1), rat(2, 1), rat(3, 1)]);
        assert_eq!(v.conjugate(), E::vector(2, &[rat(1, 1), rat(-2, 1), rat(-3, 1)]));
        assert_eq!(v.clone() * v.conjugate(), E::from_int(2, 14));
        assert_eq!(E::e(1, 1).norm_sq().unwrap(), rat(1, 1));
        assert_eq!(E::vector(1, &[rat(1, 1), rat(1, 2)]).norm_sq().unwrap(), rat(5, 4));
        assert_eq!(E::one(0).inverse().unwrap(), E::one(0));
    }

    #[test]
    fn non_scalar_norm_is_reported() {
        // 1 + e1e2e3 squares to a non-scalar under x x̄
        let x = E::one(3) + E::blade(3, 0b111);
        assert_eq!(x.norm_sq(), Err(CliffordError::NotScalarNorm));
    }

    #[test]
    fn display_forms() {
        let x = E::from_coeffs(2, vec![rat(1, 1), rat(-1, 2), rat(0, 1), rat(1, 1)]);
        assert_eq!(x.to_string(), "1 - 1/2 e1 + e1e2");
        let q = CliffordElement::<QuadExt>::vector(
            1,
            &[QuadExt::new(rat(1, 2), rat(1, 2), 5).unwrap(), QuadExt::one()],
        );
        assert_eq!(q.to_string(), "(1/2+1/2√5) + e1");
        assert_eq!(E::zero(1).to_string(), "0");
    }

    proptest! {
        #[test]
        fn reversion_anti_automorphism(x in arb_elem(3), y in arb_elem(3)) {
            prop_assert_eq!((x.clone() * y.clone()).reversion(), y.reversion() * x.reversion());
            prop_assert_eq!((x.clone() * y.clone()).involution(), x.involution() * y.involution());
            prop_assert_eq!((x.clone() * y.clone()).conjugate(), y.conjugate() * x.conjugate());
        }

        #[test]
        fn associativity(x in arb_elem(3), y in arb_elem(3), z in arb_elem(3)) {
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x * (y * z));
        }

        #[test]
        fn norm_multiplicative(p in arb_vec(3), q in arb_vec(3)) {
            let pq = p.clone() * q.clone();
            prop_assert_eq!(pq.norm_sq().unwrap(), p.norm_sq().unwrap() * q.norm_sq().unwrap());
        }

        #[test]
        fn vector_inverse(v in arb_vec(3)) {
            prop_assume!(!v.is_zero());
            prop_assert_eq!(v.inverse().unwrap() * v.clone(), E::one(3));
        }
    }
}
