use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ModError;
use crate::cf::{ComplexRoot, Gq};
use crate::clifford::{CliffordElement, CliffordMatrix, Ext};
use crate::scalar::{Mat2, QuadExt, Rational, Scalar};

pub type RealFixedPoint = Ext<QuadExt>;

/// Exact fixed points of `x ↦ (Ax + B)/(Cx + D)`: the real roots of
/// `Cx² + (D − A)x − B = 0`, plus `∞` when `C = 0`. Elliptic elements have
/// no real fixed points and yield an empty list.
pub fn fixed_points_real(m: &Mat2<Rational>) -> Result<Vec<RealFixedPoint>, ModError> {
    let id = Mat2::identity();
    if *m == id || *m == id.map(|x: &Rational| -x.clone()) {
        return Err(ModError::IdentityMatrix);
    }
    let dma = &m.d - &m.a;
    if m.c.is_zero() {
        let mut out = vec![Ext::Infinity];
        if !dma.is_zero() {
            out.push(Ext::Finite(QuadExt::rational(&m.b / &dma)));
        }
        return Ok(out);
    }
    let disc = &dma * &dma + Rational::from_integer(4.into()) * &m.b * &m.c;
    if disc < Rational::zero() {
        return Ok(vec![]);
    }
    let sd = QuadExt::sqrt_rational(&disc).expect("nonnegative");
    let two_c = QuadExt::rational(&m.c * Rational::from_integer(2.into()));
    let base = QuadExt::rational(-dma);
    let r1 = (base.clone() + sd.clone()).try_div(&two_c).expect("C ≠ 0");
    let r2 = (base - sd).try_div(&two_c).expect("C ≠ 0");
    Ok(if r1 == r2 {
        vec![Ext::Finite(r1)]
    } else {
        vec![Ext::Finite(r1), Ext::Finite(r2)]
    })
}

/// Exact fixed points over `Q(i)`.
pub fn fixed_points_complex(m: &Mat2<Gq>) -> Result<Vec<Ext<ComplexRoot>>, ModError> {
    let id = Mat2::identity();
    if *m == id || *m == id.map(|x: &Gq| -x.clone()) {
        return Err(ModError::IdentityMatrix);
    }
    let dma = &m.d - &m.a;
    if m.c.is_zero() {
        let mut out = vec![Ext::Infinity];
        if !dma.is_zero() {
            out.push(Ext::Finite(ComplexRoot::Rational(&m.b / &dma)));
        }
        return Ok(out);
    }
    let [r1, r2] = ComplexRoot::quadratic_roots(&m.c, &dma, &-m.b.clone())
        .map_err(|e| ModError::Unsupported(e.to_string()))?;
    Ok(if r1.same_value(&r2) {
        vec![Ext::Finite(r1)]
    } else {
        vec![Ext::Finite(r1), Ext::Finite(r2)]
    })
}

fn iterate(m: &CliffordMatrix<f64>, x0: Vec<f64>) -> Option<Vec<f64>> {
    let n = m.rank();
    let mut x = x0;
    for _ in 0..200_000 {
        let v = CliffordElement::vector(n, &x);
        let next = match m.apply(&Ext::Finite(v)).ok()? {
            Ext::Finite(e) => e.vector_coords(),
            Ext::Infinity => return None,
        };
        let d: f64 = next.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        x = next;
        if !x.iter().all(|c| c.is_finite()) {
            return None;
        }
        if d < 1e-13 {
            return Some(x);
        }
    }
    None
}

/// Attracting and repelling fixed points of a Clifford matrix, by iterating
/// `M` (resp. `M⁻¹`) from three seeded random starts; the three runs must
/// agree to `1e-10`.
pub fn fixed_points_clifford(
    m: &CliffordMatrix<Rational>,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>), ModError> {
    if m.is_plus_minus_identity() {
        return Err(ModError::IdentityMatrix);
    }
    let report = m.validate();
    if !report.is_valid() {
        return Err(ModError::NotValidCliffordMatrix(report.failures().join("; ")));
    }
    let dim = m.rank() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let run = |mat: &CliffordMatrix<f64>| -> Result<Vec<f64>, ModError> {
        let pts: Vec<Vec<f64>> = seeds
            .iter()
            .map(|s| iterate(mat, s.clone()))
            .collect::<Option<_>>()
            .ok_or_else(|| ModError::NoConvergence(format!("{seed}")))?;
        for p in &pts[1..] {
            let d: f64 = p.iter().zip(&pts[0]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if d > 1e-10 {
                return Err(ModError::NoConvergence(format!("{seed}: seeds disagree by {d:e}")));
            }
        }
        Ok(pts[0].clone())
    };
    let attracting = run(&m.to_f64())?;
    let repelling = run(&m.inverse().to_f64())?;
    Ok((attracting, repelling))
}
