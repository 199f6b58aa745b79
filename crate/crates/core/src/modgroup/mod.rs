//! The generalised modular group: classification of elements, Pell-based
//! constructions, fixed points, reduction to generators and the Hurwitz
//! closure check.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::clifford::{CliffordElement, CliffordError, CliffordMatrix, MobiusError};
use crate::scalar::{Mat2, Rational, Scalar, Zid};

mod fixed;
mod hurwitz;
mod pell;
mod reduce;

pub use fixed::{fixed_points_clifford, fixed_points_complex, fixed_points_real, RealFixedPoint};
pub use hurwitz::{hurwitz_closure_check, in_z8_plus_hz8, HurwitzReport};
pub use pell::{complex_pell_search, pell_solve, surd_to_loxodromic};
pub use reduce::{hidden_symmetry_word, reduce_to_generators, unit_diagonal_word, GeneratorWord, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("determinant is {0}, expected 1")]
    BadDeterminant(String),
    #[error("α = {0} ≠ 1: not in SL(2,H)")]
    NotSL2H(String),
    #[error("Δ = {0} is a perfect square")]
    SquareDiscriminant(String),
    #[error("degenerate quadratic: {0}")]
    DegenerateQuadratic(String),
    #[error("no solution with coefficients up to {0}")]
    NotFoundWithinBound(u64),
    #[error("a·b ≠ 1")]
    NotInverses,
    #[error("the identity has no distinguished fixed points")]
    IdentityMatrix,
    #[error("fixed-point iteration did not converge (seeds {0})")]
    NoConvergence(String),
    #[error("not a valid Clifford matrix: {0}")]
    NotValidCliffordMatrix(String),
    #[error("terminal diagonal entry {0} is not a unit")]
    NonUnitResidual(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Identity => "identity",
            Kind::Elliptic => "elliptic",
            Kind::Parabolic => "parabolic",
            Kind::Loxodromic => "loxodromic",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: Kind,
    /// `k` for `k`-simple (quaternionic case only).
    pub simplicity: Option<u8>,
    /// The quantities the verdict was read from, in evaluation order.
    pub certificate: Vec<(String, String)>,
}

impl Classification {
    fn new(kind: Kind, simplicity: Option<u8>, certificate: Vec<(String, String)>) -> Self {
        Classification {
            kind,
            simplicity,
            certificate,
        }
    }
}

fn cmp_kind(x: std::cmp::Ordering) -> Kind {
    match x {
        std::cmp::Ordering::Less => Kind::Elliptic,
        std::cmp::Ordering::Equal => Kind::Parabolic,
        std::cmp::Ordering::Greater => Kind::Loxodromic,
    }
}

/// Trace classification in `SL(2, R)` (exact `Rational` or `QuadExt` entries).
pub fn classify_real<S: Scalar>(m: &Mat2<S>) -> Result<Classification, ModError> {
    let det = m.det();
    if det != S::one() {
        return Err(ModError::BadDeterminant(det.to_string()));
    }
    let tr = m.trace();
    let cert = vec![("trace".to_string(), tr.to_string())];
    let id = Mat2::identity();
    if *m == id || *m == id.map(|x: &S| -x.clone()) {
        return Ok(Classification::new(Kind::Identity, None, cert));
    }
    let t2 = tr.square();
    Ok(Classification::new(cmp_kind(t2.cmp_exact(&S::from_int(4))), None, cert))
}

/// Trace classification in `SL(2, Z[i√d])`.
pub fn classify_complex(m: &Mat2<Zid>) -> Result<Classification, ModError> {
    let d = m.a.d.clone();
    let det = m.a.clone() * m.d.clone() - m.b.clone() * m.c.clone();
    if det != Zid::one(&d) {
        return Err(ModError::BadDeterminant(det.to_string()));
    }
    let tr = m.a.clone() + m.d.clone();
    let mut cert = vec![("trace".to_string(), tr.to_string())];
    let one = Zid::one(&d);
    let zero = Zid::zero(&d);
    if m.b == zero && m.c == zero && (m.a == one || m.a == -one.clone()) && m.a == m.d {
        return Ok(Classification::new(Kind::Identity, None, cert));
    }
    let two = BigInt::from(2);
    let kind = if tr.is_real() {
        let t = tr.p.abs();
        cert.push(("trace_real".into(), "true".into()));
        cmp_kind(t.cmp(&two))
    } else {
        cert.push(("trace_real".into(), "false".into()));
        Kind::Loxodromic
    };
    Ok(Classification::new(kind, None, cert))
}

/// The Parker–Short invariants of a quaternionic matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsQuantities<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    pub delta: S,
    pub sigma: CliffordElement<S>,
    pub tau: CliffordElement<S>,
    /// Which branch of the `σ, τ` definition applied (1–4).
    pub branch: u8,
}

fn re<S: Scalar>(x: &CliffordElement<S>) -> S {
    x.scalar_part().clone()
}

/// `α, β, γ, δ, σ, τ` with the four-way case split for `σ, τ`.
pub fn ps_quantities<S: Scalar>(m: &CliffordMatrix<S>) -> Result<PsQuantities<S>, ModError> {
    if m.rank() != 2 {
        return Err(ModError::Unsupported("Parker–Short quantities need quaternion entries".into()));
    }
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let n2 = |x: &CliffordElement<S>| x.norm_sq();
    let alpha = n2(a)? * n2(d)? + n2(b)? * n2(c)?
        - S::from_int(2) * re(&(a.clone() * c.conjugate() * d.clone() * b.conjugate()));
    let ad_bc = a.clone() * d.clone() - b.clone() * c.clone();
    let da_cb = d.clone() * a.clone() - c.clone() * b.clone();
    let beta = re(&(ad_bc.clone() * a.conjugate() + da_cb * d.conjugate()));
    let gamma = n2(&(a.clone() + d.clone()))? + S::from_int(2) * re(&ad_bc);
    let delta = re(&(a.clone() + d.clone()));
    let (sigma, tau, branch) = if !c.is_zero() {
        let cac = c.clone() * a.clone() * c.inverse()?;
        (cac.clone() * d.clone() - c.clone() * b.clone(), cac + d.clone(), 1)
    } else if !b.is_zero() {
        let bdb = b.clone() * d.clone() * b.inverse()?;
        (bdb.clone() * a.clone(), bdb + a.clone(), 2)
    } else if a != d {
        let dma = d.clone() - a.clone();
        let t = dma.clone() * a.clone() * dma.inverse()?;
        (t.clone() * d.clone(), t + d.clone(), 3)
    } else {
        (a.clone() * a.conjugate(), a.clone() + a.conjugate(), 4)
    };
    Ok(PsQuantities {
        alpha,
        beta,
        gamma,
        delta,
        sigma,
        tau,
        branch,
    })
}

/// Parker–Short classification in `SL(2, H)`; `±Id` is tested first.
pub fn classify_quaternionic<S: Scalar>(m: &CliffordMatrix<S>) -> Result<Classification, ModError> {
    let q = ps_quantities(m)?;
    let cert = vec![
        ("alpha".to_string(), q.alpha.to_string()),
        ("beta".to_string(), q.beta.to_string()),
        ("gamma".to_string(), q.gamma.to_string()),
        ("delta".to_string(), q.delta.to_string()),
        ("sigma".to_string(), q.sigma.to_string()),
        ("tau".to_string(), q.tau.to_string()),
    ];
    if m.is_plus_minus_identity() {
        return Ok(Classification::new(Kind::Identity, None, cert));
    }
    if q.alpha != S::one() {
        return Err(ModError::NotSL2H(q.alpha.to_string()));
    }
    let four = S::from_int(4);
    if q.sigma == CliffordElement::one(2) && q.tau.is_scalar() {
        let k = cmp_kind(q.delta.square().cmp_exact(&four));
        return Ok(Classification::new(k, Some(1), cert));
    }
    if q.beta == q.delta {
        let k = cmp_kind((q.gamma.clone() - q.delta.square()).cmp_exact(&S::from_int(2)));
        return Ok(Classification::new(k, Some(2), cert));
    }
    Ok(Classification::new(Kind::Loxodromic, Some(3), cert))
}

/// Classify a Clifford matrix by rank: real trace (`n = 0`), complex trace
/// (`n = 1`, `e1 = i`) or Parker–Short (`n = 2`).
pub fn classify_clifford(m: &CliffordMatrix<Rational>) -> Result<Classification, ModError> {
    match m.rank() {
        0 => classify_real(&Mat2::new(
            re(&m.a),
            re(&m.b),
            re(&m.c),
            re(&m.d),
        )),
        1 => {
            let z = |x: &CliffordElement<Rational>| -> Result<Zid, ModError> {
                let (p, q) = (x.coeff(0), x.coeff(1));
                if !p.is_integer() || !q.is_integer() {
                    return Err(ModError::Unsupported("non-integral complex entry".into()));
                }
                Ok(Zid::new(p.to_integer(), q.to_integer(), 1))
            };
            classify_complex(&Mat2::new(z(&m.a)?, z(&m.b)?, z(&m.c)?, z(&m.d)?))
        }
        2 => classify_quaternionic(m),
        n => Err(ModError::Unsupported(format!(
            "classification of rank-{n} Clifford matrices"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::parse_matrix;
    use crate::scalar::int;

    fn qm(s: &str) -> CliffordMatrix<Rational> {
        parse_matrix(s, 2).unwrap().map(|x| x.to_rational().unwrap())
    }

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Mat2<Rational> {
        Mat2::new(int(a), int(b), int(c), int(d))
    }

    #[test]
    fn real_examples() {
        assert_eq!(classify_real(&m2(1, 1, 0, 1)).unwrap().kind, Kind::Parabolic);
        assert_eq!(classify_real(&m2(13, 8, 8, 5)).unwrap().kind, Kind::Loxodromic);
        assert_eq!(classify_real(&m2(0, -1, 1, 0)).unwrap().kind, Kind::Elliptic);
        assert_eq!(classify_real(&m2(-1, 0, 0, -1)).unwrap().kind, Kind::Identity);
        assert!(matches!(classify_real(&m2(2, 0, 0, 1)), Err(ModError::BadDeterminant(_))));
    }

    #[test]
    fn complex_examples() {
        let z = |p: i64, q: i64| Zid::new(p, q, 1);
        let t = Mat2::new(z(1, 0), z(0, 1), z(0, 0), z(1, 0));
        assert_eq!(classify_complex(&t).unwrap().kind, Kind::Parabolic);
        let s = Mat2::new(z(0, 0), z(-1, 0), z(1, 0), z(0, 0));
        assert_eq!(classify_complex(&s).unwrap().kind, Kind::Elliptic);
        let l = Mat2::new(z(2, 1), z(1, 0), z(1, 0), z(0, 0));
        // det = −1
        assert!(classify_complex(&l).is_err());
        let l = Mat2::new(z(2, 1), z(-1, 0), z(1, 0), z(0, 0));
        assert_eq!(classify_complex(&l).unwrap().kind, Kind::Loxodromic);
    }

    #[test]
    fn parker_short_examples() {
        let m = qm("[[1, (i+j)/2], [-2i-2j, 3]]");
        let q = ps_quantities(&m).unwrap();
        assert_eq!(q.alpha, int(1));
        let c = classify_quaternionic(&m).unwrap();
        assert_eq!(c.kind, Kind::Loxodromic);

        let m = qm("[[0, -1], [1, -3]]");
        let c = classify_quaternionic(&m).unwrap();
        assert_eq!((c.kind, c.simplicity), (Kind::Loxodromic, Some(1)));

        let m = qm("[[0, -1], [1, -3i-3j]]");
        let q = ps_quantities(&m).unwrap();
        assert_eq!(q.sigma, CliffordElement::one(2));
        assert_eq!(q.beta, q.delta);
        assert_eq!(q.beta, int(0));
        assert_eq!(q.gamma, int(20));
        let c = classify_quaternionic(&m).unwrap();
        assert_eq!((c.kind, c.simplicity), (Kind::Loxodromic, Some(2)));

        let c = classify_quaternionic(&qm("[[1, 1], [0, 1]]")).unwrap();
        assert_eq!((c.kind, c.simplicity), (Kind::Parabolic, Some(1)));

        let id = CliffordMatrix::<Rational>::identity(2);
        let q = ps_quantities(&id).unwrap();
        assert_eq!((q.branch, q.delta.clone()), (4, int(2)));
        assert_eq!(q.sigma, CliffordElement::one(2));
        assert_eq!(q.tau, CliffordElement::from_int(2, 2));
        assert_eq!(classify_quaternionic(&id).unwrap().kind, Kind::Identity);
        assert_eq!(classify_quaternionic(&id.neg()).unwrap().kind, Kind::Identity);

        assert!(matches!(
            classify_quaternionic(&qm("[[2, 0], [0, 1]]")),
            Err(ModError::NotSL2H(_))
        ));
    }

    #[test]
    fn general_a_formula() {
        // [[0, −1], [1, −a]]: σ = 1, τ = −a, β = δ = −Re a
        for a in ["3", "1+2i-j", "2k", "1/2+i"] {
            let m = qm(&format!("[[0, -1], [1, -({a})]]"));
            let q = ps_quantities(&m).unwrap();
            let av = crate::clifford::parse_element(a, 2)
                .unwrap()
                .map(|x| x.to_rational().unwrap());
            assert_eq!(q.alpha, int(1));
            assert_eq!(q.sigma, CliffordElement::one(2));
            assert_eq!(q.tau, -av.clone());
            assert_eq!(q.beta, -av.scalar_part().clone());
            assert_eq!(q.delta, q.beta);
            assert_eq!(q.gamma, av.norm_sq().unwrap() + int(2));
        }
    }
}
