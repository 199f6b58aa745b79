use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ModError;
use crate::scalar::{exact_isqrt, Mat2, Zid};

/// Minimal positive `(μ, n)` with `μ²Δ + 1 = n²`, from the regular CF of `√Δ`.
pub fn pell_solve(delta: &BigInt) -> Result<(BigInt, BigInt), ModError> {
    if !delta.is_positive() || exact_isqrt(delta).is_some() {
        return Err(ModError::SquareDiscriminant(delta.to_string()));
    }
    let a0 = delta.sqrt();
    // √Δ = [a0; a1, a2, …] with (m, q, a) the usual recurrence
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut s_prev, mut s) = (BigInt::zero(), BigInt::one());
    loop {
        if &p * &p - delta * &s * &s == BigInt::one() {
            return Ok((s, p));
        }
        m = &q * &a - &m;
        q = (delta - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let p_next = &a * &p + &p_prev;
        let s_next = &a * &s + &s_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        s_prev = std::mem::replace(&mut s, s_next);
    }
}

/// A hyperbolic `M ∈ SL(2, Z)` fixing both roots of `a x² + b x + c`.
///
/// With `(μ, n)` the minimal Pell solution for `Δ = b² − 4ac` and `λ = 2μ`:
/// `C = λa`, `B = −λc`, `A = n − μb`, `D = n + μb`, so `AD − BC = n² − μ²Δ = 1`
/// and `C x² + (D − A) x − B = λ(a x² + b x + c)`.
pub fn surd_to_loxodromic(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<Mat2<BigInt>, ModError> {
    let delta = b * b - BigInt::from(4) * a * c;
    if !delta.is_positive() || exact_isqrt(&delta).is_some() {
        return Err(ModError::DegenerateQuadratic(format!(
            "Δ = {delta} is not a positive non-square"
        )));
    }
    let (mu, n) = pell_solve(&delta)?;
    let lambda = BigInt::from(2) * &mu;
    Ok(Mat2::new(
        &n - &mu * b,
        -(&lambda * c),
        &lambda * a,
        &n + &mu * b,
    ))
}

/// Bounded search for `x² + Δ y² = 1` over `Z[i√d]` with `y ≠ 0`.
///
/// `y` runs over coefficient boxes of growing radius up to `bound`, so the
/// first hit has the smallest max-coefficient `y`.
pub fn complex_pell_search(delta: &Zid, bound: u64) -> Result<(Zid, Zid), ModError> {
    if delta.is_zero() || delta.is_square() {
        return Err(ModError::SquareDiscriminant(delta.to_string()));
    }
    let d = delta.d.clone();
    let one = Zid::one(&d);
    for r in 1..=bound as i64 {
        for p in -r..=r {
            for q in -r..=r {
                if p.abs().max(q.abs()) != r {
                    continue;
                }
                let y = Zid::new(p, q, d.clone());
                let rhs = one.clone() - delta.clone() * y.clone() * y.clone();
                if let Some(x) = rhs.sqrt() {
                    return Ok((x, y));
                }
            }
        }
    }
    Err(ModError::NotFoundWithinBound(bound))
}
