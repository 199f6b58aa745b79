//! Depth identities `a + [a, …, a] = 0` for `a = e₁ + ⋯ + e_{d−1}` and the
//! recurrence that rules them out for `d ≥ 5`.
//!
//! The bracket here is the plain reciprocal tower `[a₁, …, a_m] =
//! 1/(a₁ + [a₂, …, a_m])`, not the signed inversion used by CF systems.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::clifford::{CliffordElement, CliffordError};
use crate::scalar::{int, QuadExt, Rational, Scalar};

type El = CliffordElement<Rational>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdError {
    #[error("d = {0} is outside the supported range")]
    Unsupported(usize),
    #[error("the recurrence needs d ≥ 5 (got {0})")]
    BelowThreshold(usize),
    #[error("x_{0} = 0")]
    ZeroEncountered(usize),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

/// `a + [a, …, a]` with `depth` copies inside the bracket, i.e. the tower
/// `T₁ = a`, `T_{k+1} = a + T_k⁻¹` at `k = depth + 1`.
pub fn tower(a: &El, depth: usize) -> Result<El, IdError> {
    let mut t = a.clone();
    for _ in 0..depth {
        t = a.clone() + t.inverse()?;
    }
    Ok(t)
}

/// `Σ signs[i] e_{perm[i]+1}` in `A_{d−1}`.
fn signed_vector(d: usize, signs: &[i64], perm: &[usize]) -> El {
    let mut c = vec![Rational::zero(); d];
    for (i, &p) in perm.iter().enumerate() {
        c[p + 1] = int(signs[i]);
    }
    El::vector(d - 1, &c)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthIdentity {
    pub d: usize,
    /// Copies of `a` inside the bracket.
    pub depth: usize,
    /// Sign-flip × permutation variants tried: `2^{d−1}(d−1)!`.
    pub variants: usize,
    /// Variants where the tower is not exactly zero.
    pub failures: Vec<String>,
}

impl DepthIdentity {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn identity_depth(d: usize) -> Option<usize> {
    match d {
        2 => Some(1),
        3 => Some(2),
        4 => Some(4),
        _ => None,
    }
}

pub fn check_depth_identity(d: usize) -> Result<DepthIdentity, IdError> {
    let depth = identity_depth(d).ok_or(IdError::Unsupported(d))?;
    let m = d - 1;
    let mut variants = 0;
    let mut failures = Vec::new();
    for perm in permutations(m) {
        for mask in 0..(1u32 << m) {
            let signs: Vec<i64> = (0..m).map(|i| if mask & (1 << i) != 0 { -1 } else { 1 }).collect();
            let a = signed_vector(d, &signs, &perm);
            variants += 1;
            let t = tower(&a, depth)?;
            if !t.is_zero() {
                failures.push(format!("a = {a}: {t}"));
            }
        }
    }
    Ok(DepthIdentity {
        d,
        depth,
        variants,
        failures,
    })
}

/// `x₁ = 1`, `x_{n+1} = 1 − 1/((d − 1) x_n)`: the tower of depth `n` is
/// `x_n a` since `a² = −(d − 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthSequence {
    pub d: usize,
    pub values: Vec<Rational>,
}

/// The recurrence without the `d ≥ 5` precondition; stops at the first zero.
pub fn raw_depth_sequence(d: usize, n: usize) -> (Vec<Rational>, Option<usize>) {
    let k = int(d as i64 - 1);
    let mut values = Vec::with_capacity(n);
    let mut x = Rational::one();
    for i in 1..=n {
        values.push(x.clone());
        if x.is_zero() {
            return (values, Some(i));
        }
        x = Rational::one() - Rational::one() / (&k * &x);
    }
    (values, None)
}

pub fn depth_sequence(d: usize, n: usize) -> Result<DepthSequence, IdError> {
    if d < 5 {
        return Err(IdError::BelowThreshold(d));
    }
    match raw_depth_sequence(d, n) {
        (_, Some(i)) => Err(IdError::ZeroEncountered(i)),
        (values, None) => Ok(DepthSequence { d, values }),
    }
}

/// `x_± = (1 ± √(1 − 4/(d − 1)))/2`.
pub fn fixed_points_x(d: usize) -> Result<(QuadExt, QuadExt), IdError> {
    if d < 5 {
        return Err(IdError::BelowThreshold(d));
    }
    let disc = Rational::one() - int(4) / int(d as i64 - 1);
    let r = QuadExt::sqrt_rational(&disc).expect("nonnegative for d ≥ 5");
    let half = QuadExt::from(Rational::new(1.into(), 2.into()));
    let one = QuadExt::one();
    Ok((
        (one.clone() - r.clone()) * half.clone(),
        (one + r) * half,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalReport {
    pub d: usize,
    pub n: usize,
    pub x_minus: QuadExt,
    pub x_plus: QuadExt,
    /// No `x_k` (`k ≤ n`) vanishes.
    pub never_zero: bool,
    /// First `k ≥ 2` with `x_k ∉ [x₋, x₊]`.
    pub first_outside: Option<(usize, Rational)>,
    /// `x₊ < x_k ≤ 1` for all `k ≤ n`: the orbit descends onto `x₊`.
    pub above_upper: bool,
}

impl IntervalReport {
    pub fn stays_in_interval(&self) -> bool {
        self.first_outside.is_none()
    }
}

/// Literal check of `x_k ∈ [x₋, x₊]` for `2 ≤ k ≤ n`.
pub fn interval_check(d: usize, n: usize) -> Result<IntervalReport, IdError> {
    let (x_minus, x_plus) = fixed_points_x(d)?;
    let (values, zero) = raw_depth_sequence(d, n);
    let q = |x: &Rational| QuadExt::from(x.clone());
    let first_outside = values.iter().enumerate().skip(1).find_map(|(i, x)| {
        let v = q(x);
        let inside = !v.cmp_exact(&x_minus).is_lt() && !v.cmp_exact(&x_plus).is_gt();
        (!inside).then(|| (i + 1, x.clone()))
    });
    let above_upper = values
        .iter()
        .all(|x| q(x).cmp_exact(&x_plus).is_gt() && *x <= Rational::one());
    Ok(IntervalReport {
        d,
        n,
        x_minus,
        x_plus,
        never_zero: zero.is_none(),
        first_outside,
        above_upper,
    })
}
