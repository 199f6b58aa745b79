use std::fmt;
use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{grade, nullspace, CliffordElement, CliffordError};
use crate::scalar::{rat, Scalar};

/// A point of `R^n ∪ {∞}` (or any ambient space with a point at infinity).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Ext<T> {
    Finite(T),
    Infinity,
}

impl<T> Ext<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Ext::Finite(t) => Some(t),
            Ext::Infinity => None,
        }
    }
    pub fn is_infinite(&self) -> bool {
        matches!(self, Ext::Infinity)
    }
    pub fn as_ref(&self) -> Ext<&T> {
        match self {
            Ext::Finite(t) => Ext::Finite(t),
            Ext::Infinity => Ext::Infinity,
        }
    }
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Ext<U> {
        match self {
            Ext::Finite(t) => Ext::Finite(f(t)),
            Ext::Infinity => Ext::Infinity,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Ext<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(t) => t.fmt(f),
            Ext::Infinity => f.write_str("∞"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MobiusError {
    #[error("Möbius image is not a vector; the matrix is not a valid Clifford matrix")]
    NonVectorResult,
    #[error("point is not a vector")]
    NotAVector,
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

/// How strongly an entry is known to lie in the Clifford group `Γ_n ∪ {0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MembershipLevel {
    Zero,
    /// A nonzero vector.
    ProvedVector,
    /// An explicit factorisation into two nonzero vectors was found.
    ProvedProduct,
    /// `x x̄` is a nonzero scalar and `v ↦ x v x*` kept random vectors vectors.
    Semidecision,
    Failed,
}

impl MembershipLevel {
    pub fn is_proved(self) -> bool {
        matches!(
            self,
            MembershipLevel::Zero | MembershipLevel::ProvedVector | MembershipLevel::ProvedProduct
        )
    }
    pub fn as_str(self) -> &'static str {
        match self {
            MembershipLevel::Zero => "zero",
            MembershipLevel::ProvedVector => "proved-vector",
            MembershipLevel::ProvedProduct => "proved-product",
            MembershipLevel::Semidecision => "semidecision",
            MembershipLevel::Failed => "failed",
        }
    }
}

const SANDWICH_SAMPLES: usize = 10;

/// Decide (or semidecide) `x ∈ Γ_n ∪ {0}`.
pub fn membership<S: Scalar>(x: &CliffordElement<S>) -> MembershipLevel {
    if x.is_zero() {
        return MembershipLevel::Zero;
    }
    if x.is_vector() {
        return MembershipLevel::ProvedVector;
    }
    match x.norm_sq() {
        Ok(n) if !n.is_zero() => {}
        _ => return MembershipLevel::Failed,
    }
    // If x = v w with v, w vectors then ū x = ‖v‖² w. Solve for a vector u
    // making ū x a vector: then x = (u/‖u‖²)(ū x).
    let n = x.rank();
    let dim = n + 1;
    let cols: Vec<CliffordElement<S>> = (0..dim)
        .map(|k| {
            let mut c = vec![S::zero(); dim];
            c[k] = S::one();
            CliffordElement::vector(n, &c).conjugate() * x.clone()
        })
        .collect();
    let rows: Vec<Vec<S>> = (0..1usize << n)
        .filter(|&m| grade(m) >= 2)
        .map(|m| cols.iter().map(|c| c.coeff(m).clone()).collect())
        .collect();
    if !nullspace(&rows, dim).is_empty() {
        return MembershipLevel::ProvedProduct;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a_d3);
    let xr = x.reversion();
    for _ in 0..SANDWICH_SAMPLES {
        let v: Vec<S> = (0..dim)
            .map(|_| S::from_rational(&rat(rng.gen_range(-20..=20), rng.gen_range(1..=7))))
            .collect();
        let v = CliffordElement::vector(n, &v);
        if !(x.clone() * v * xr.clone()).is_vector_approx() {
            return MembershipLevel::Failed;
        }
    }
    MembershipLevel::Semidecision
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: [MembershipLevel; 4],
    pub pseudo_det_one: bool,
    /// `a c⁻¹` and `c⁻¹ d` are vectors (`None` when `c = 0`).
    pub c_ratios_vector: Option<bool>,
    /// `d b⁻¹` and `b⁻¹ a` are vectors (`None` when `b = 0`).
    pub b_ratios_vector: Option<bool>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.pseudo_det_one
            && self.entries.iter().all(|l| *l != MembershipLevel::Failed)
            && self.c_ratios_vector != Some(false)
            && self.b_ratios_vector != Some(false)
    }

    pub fn is_proved(&self) -> bool {
        self.is_valid() && self.entries.iter().all(|l| l.is_proved())
    }

    /// `"proved"`, `"semidecision"` or `"failed"`.
    pub fn verdict(&self) -> &'static str {
        if self.is_proved() {
            "proved"
        } else if self.is_valid() {
            "semidecision"
        } else {
            "failed"
        }
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, l) in ["a", "b", "c", "d"].iter().zip(self.entries) {
            if l == MembershipLevel::Failed {
                out.push(format!("{name} is not in the Clifford group"));
            }
        }
        if !self.pseudo_det_one {
            out.push("pseudo-determinant a d* − b c* ≠ 1".into());
        }
        if self.c_ratios_vector == Some(false) {
            out.push("a c⁻¹ or c⁻¹ d is not a vector".into());
        }
        if self.b_ratios_vector == Some(false) {
            out.push("d b⁻¹ or b⁻¹ a is not a vector".into());
        }
        out
    }
}

/// 2×2 matrix `[[a, b], [c, d]]` over `A_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CliffordMatrix<S> {
    pub a: CliffordElement<S>,
    pub b: CliffordElement<S>,
    pub c: CliffordElement<S>,
    pub d: CliffordElement<S>,
}

impl<S: Scalar> CliffordMatrix<S> {
    pub fn new(
        a: CliffordElement<S>,
        b: CliffordElement<S>,
        c: CliffordElement<S>,
        d: CliffordElement<S>,
    ) -> Self {
        let n = a.rank();
        assert!(
            b.rank() == n && c.rank() == n && d.rank() == n,
            "matrix entries of different rank"
        );
        CliffordMatrix { a, b, c, d }
    }

    pub fn rank(&self) -> usize {
        self.a.rank()
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(CliffordElement::one(n), CliffordElement::one(n))
    }

    pub fn diag(a: CliffordElement<S>, d: CliffordElement<S>) -> Self {
        let n = a.rank();
        Self::new(a, CliffordElement::zero(n), CliffordElement::zero(n), d)
    }

    /// `S = [[0, −1], [1, 0]]`, acting as `x ↦ −x⁻¹`.
    pub fn inversion(n: usize) -> Self {
        Self::new(
            CliffordElement::zero(n),
            CliffordElement::from_int(n, -1),
            CliffordElement::one(n),
            CliffordElement::zero(n),
        )
    }

    /// `[[1, v], [0, 1]]`, acting as `x ↦ x + v`.
    pub fn translation(v: CliffordElement<S>) -> Self {
        let n = v.rank();
        Self::new(
            CliffordElement::one(n),
            v,
            CliffordElement::zero(n),
            CliffordElement::one(n),
        )
    }

    pub fn entries(&self) -> [&CliffordElement<S>; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `a d* − b c*`.
    pub fn pseudo_det(&self) -> CliffordElement<S> {
        self.a.clone() * self.d.reversion() - self.b.clone() * self.c.reversion()
    }

    /// `[[d*, −b*], [−c*, a*]]`, the inverse when the pseudo-determinant is 1.
    pub fn inverse(&self) -> Self {
        Self::new(
            self.d.reversion(),
            -self.b.reversion(),
            -self.c.reversion(),
            self.a.reversion(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    /// `±Id`.
    pub fn is_plus_minus_identity(&self) -> bool {
        let id = Self::identity(self.rank());
        *self == id || *self == id.neg()
    }

    pub fn validate(&self) -> ValidationReport {
        let entries = [
            membership(&self.a),
            membership(&self.b),
            membership(&self.c),
            membership(&self.d),
        ];
        let pseudo_det_one = self.pseudo_det() == CliffordElement::one(self.rank());
        let ratios = |x: &CliffordElement<S>, l: &CliffordElement<S>, r: &CliffordElement<S>| {
            if x.is_zero() {
                return None;
            }
            Some(match x.inverse() {
                Ok(xi) => {
                    (l.clone() * xi.clone()).is_vector() && (xi * r.clone()).is_vector()
                }
                Err(_) => false,
            })
        };
        ValidationReport {
            entries,
            pseudo_det_one,
            c_ratios_vector: ratios(&self.c, &self.a, &self.d),
            b_ratios_vector: ratios(&self.b, &self.d, &self.a),
        }
    }

    /// `x ↦ (a x + b)(c x + d)⁻¹` on `R^{n+1} ∪ {∞}`.
    pub fn apply(
        &self,
        x: &Ext<CliffordElement<S>>,
    ) -> Result<Ext<CliffordElement<S>>, MobiusError> {
        let out = match x {
            Ext::Infinity => {
                if is_zero_approx(&self.c) {
                    return Ok(Ext::Infinity);
                }
                self.a.clone() * self.c.inverse()?
            }
            Ext::Finite(v) => {
                if !v.is_vector_approx() {
                    return Err(MobiusError::NotAVector);
                }
                let den = self.c.clone() * v.clone() + self.d.clone();
                if is_zero_approx(&den) {
                    return Ok(Ext::Infinity);
                }
                (self.a.clone() * v.clone() + self.b.clone()) * den.inverse()?
            }
        };
        if !out.is_vector_approx() {
            return Err(MobiusError::NonVectorResult);
        }
        Ok(Ext::Finite(if S::is_exact() { out } else { out.vector_part() }))
    }

    /// Apply to a finite vector given by coordinates.
    pub fn apply_coords(&self, xs: &[S]) -> Result<Ext<Vec<S>>, MobiusError> {
        let v = CliffordElement::vector(self.rank(), xs);
        Ok(self.apply(&Ext::Finite(v))?.map(|e| e.vector_coords()))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> CliffordMatrix<T> {
        CliffordMatrix::new(self.a.map(f), self.b.map(f), self.c.map(f), self.d.map(f))
    }

    pub fn to_f64(&self) -> CliffordMatrix<f64> {
        self.map(|s| s.as_f64())
    }

    /// Product of a sequence of matrices, left to right.
    pub fn product<'a>(n: usize, ms: impl IntoIterator<Item = &'a Self>) -> Self {
        ms.into_iter()
            .fold(Self::identity(n), |acc, m| acc * m.clone())
    }
}

fn is_zero_approx<S: Scalar>(x: &CliffordElement<S>) -> bool {
    if S::is_exact() {
        return x.is_zero();
    }
    x.coeffs().iter().all(|c| c.as_f64().abs() < 1e-300)
}

impl<S: Scalar> Mul for CliffordMatrix<S> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let CliffordMatrix { a, b, c, d } = self;
        CliffordMatrix::new(
            a.clone() * r.a.clone() + b.clone() * r.c.clone(),
            a * r.b.clone() + b * r.d.clone(),
            c.clone() * r.a + d.clone() * r.c,
            c * r.b + d * r.d,
        )
    }
}

impl<S: Scalar> fmt::Display for CliffordMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
