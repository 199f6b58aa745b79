//! The generalised Gauss map `T(p) = [ιp]⁻¹ ιp`, digit extraction, exact
//! period detection and evaluation of finite and periodic expansions.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::clifford::{CliffordMatrix, Ext, MobiusError};
use crate::scalar::{Mat2, QuadExt, Rational, Scalar};
use crate::spaces::{CfSystem, Inversion, IwasawaPoint, Space, SpaceError};

pub mod surd;

pub use surd::{evaluate_periodic_complex, expand_complex, fmt_gq, gq, ComplexRoot, ComplexSurd, Gi, Gq};

/// Default iteration budget.
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CfError {
    #[error("the Gauss map is undefined at 0 (expansion already finite)")]
    ZeroState,
    #[error("point {0} is not in the fundamental domain")]
    NotInDomain(String),
    #[error("periodic spec does not contract: {0}")]
    DivergentPeriodicSpec(String),
    #[error("{0} is not a lattice element")]
    InvalidDigit(String),
    #[error("empty period")]
    EmptyPeriod,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("convergent matrix failed validation: {0}")]
    Validation(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Finite,
    EventuallyPeriodic { preperiod: usize, period: usize },
    Truncated { max_iter: usize },
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Finite => "finite",
            Status::EventuallyPeriodic { .. } => "periodic",
            Status::Truncated { .. } => "truncated",
        }
    }
}

/// Whether points outside `K` get a zeroth digit `[x]` first.
///
/// `Auto` writes `x = [x]·(CF of [x]⁻¹x)`, as in `[1; (−2i, 2)]` for `√(1+i)`.
/// `Never` starts directly with `a₁ = [ιx]`, which is how `R³` expansions of
/// points outside `K` are usually written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeadingDigit {
    #[default]
    Auto,
    Never,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion<S> {
    pub leading: Option<IwasawaPoint<S>>,
    pub digits: Vec<IwasawaPoint<S>>,
    pub status: Status,
}

/// `leading · [preperiod, (period)^∞]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSpec<S> {
    pub leading: Option<IwasawaPoint<S>>,
    pub preperiod: Vec<IwasawaPoint<S>>,
    pub period: Vec<IwasawaPoint<S>>,
}

impl<S: Scalar> PeriodicSpec<S> {
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> PeriodicSpec<T> {
        PeriodicSpec {
            leading: self.leading.as_ref().map(|p| p.map(f)),
            preperiod: self.preperiod.iter().map(|p| p.map(f)).collect(),
            period: self.period.iter().map(|p| p.map(f)).collect(),
        }
    }

    /// Rational digits, when every coordinate is rational.
    pub fn to_rational(&self) -> Option<PeriodicSpec<Rational>> {
        let conv = |p: &IwasawaPoint<S>| -> Option<IwasawaPoint<Rational>> {
            let c: Option<Vec<Rational>> = p.coords().iter().map(|c| c.to_rational()).collect();
            IwasawaPoint::new(p.space(), c?).ok()
        };
        Some(PeriodicSpec {
            leading: match &self.leading {
                Some(l) => Some(conv(l)?),
                None => None,
            },
            preperiod: self.preperiod.iter().map(conv).collect::<Option<_>>()?,
            period: self.period.iter().map(conv).collect::<Option<_>>()?,
        })
    }
}

impl<S: Scalar> Expansion<S> {
    pub fn is_finite(&self) -> bool {
        self.status == Status::Finite
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.status, Status::EventuallyPeriodic { .. })
    }

    pub fn preperiod(&self) -> &[IwasawaPoint<S>] {
        match self.status {
            Status::EventuallyPeriodic { preperiod, .. } => &self.digits[..preperiod],
            _ => &self.digits,
        }
    }

    pub fn period(&self) -> &[IwasawaPoint<S>] {
        match self.status {
            Status::EventuallyPeriodic { preperiod, .. } => &self.digits[preperiod..],
            _ => &[],
        }
    }

    pub fn spec(&self) -> Option<PeriodicSpec<S>> {
        self.is_periodic().then(|| PeriodicSpec {
            leading: self.leading.clone(),
            preperiod: self.preperiod().to_vec(),
            period: self.period().to_vec(),
        })
    }

    pub fn digit_strings(&self) -> Vec<String> {
        self.digits.iter().map(|d| d.to_digit_string()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Expansion<T> {
        Expansion {
            leading: self.leading.as_ref().map(|p| p.map(f)),
            digits: self.digits.iter().map(|p| p.map(f)).collect(),
            status: self.status,
        }
    }
}

impl<S: Scalar> fmt::Display for Expansion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        if let Some(l) = &self.leading {
            write!(f, "{}; ", l.to_digit_string())?;
        }
        let pre: Vec<String> = self.preperiod().iter().map(|d| d.to_digit_string()).collect();
        write!(f, "{}", pre.join(", "))?;
        if self.is_periodic() {
            let per: Vec<String> = self.period().iter().map(|d| d.to_digit_string()).collect();
            if !pre.is_empty() {
                write!(f, ", ")?;
            }
            write!(f, "({})", per.join(", "))?;
        }
        if let Status::Truncated { .. } = self.status {
            write!(f, ", …")?;
        }
        write!(f, "]")
    }
}

fn step<S: Scalar>(
    sys: &CfSystem,
    x: &IwasawaPoint<S>,
) -> Result<(IwasawaPoint<S>, IwasawaPoint<S>), CfError> {
    if x.is_origin() {
        return Err(CfError::ZeroState);
    }
    let ix = sys.invert(x)?;
    let a = sys.round(&ix)?;
    let next = sys.unact(&a, &ix)?;
    Ok((a, next))
}

/// One Gauss step: `(a, T x)` with `a = [ιx]` and `T x = a⁻¹ ιx ∈ K`.
pub fn gauss_step<S: Scalar>(
    sys: &CfSystem,
    x: &IwasawaPoint<S>,
) -> Result<(IwasawaPoint<S>, IwasawaPoint<S>), CfError> {
    if x.is_origin() {
        return Err(CfError::ZeroState);
    }
    if !sys.in_domain(x)? {
        return Err(CfError::NotInDomain(x.to_string()));
    }
    step(sys, x)
}

/// The first `n + 1` states `x, Tx, …, Tⁿx` (stopping early at 0).
pub fn orbit<S: Scalar>(
    sys: &CfSystem,
    x: &IwasawaPoint<S>,
    n: usize,
) -> Result<Vec<IwasawaPoint<S>>, CfError> {
    let mut out = vec![x.clone()];
    let mut s = x.clone();
    for _ in 0..n {
        if s.is_origin() {
            break;
        }
        s = step(sys, &s)?.1;
        out.push(s.clone());
    }
    Ok(out)
}

/// Expand with a leading digit for points outside `K`.
pub fn expand<S: Scalar + Hash + Eq>(
    sys: &CfSystem,
    x: &IwasawaPoint<S>,
    max_iter: usize,
) -> Result<Expansion<S>, CfError> {
    expand_with(sys, x, max_iter, LeadingDigit::Auto)
}

pub fn expand_with<S: Scalar + Hash + Eq>(
    sys: &CfSystem,
    x: &IwasawaPoint<S>,
    max_iter: usize,
    leading: LeadingDigit,
) -> Result<Expansion<S>, CfError> {
    if x.space() != sys.space {
        return Err(SpaceError::SpaceMismatch.into());
    }
    let mut lead = None;
    let mut state = x.clone();
    if leading == LeadingDigit::Auto && !sys.in_domain(x)? {
        let g = sys.round(x)?;
        state = sys.unact(&g, x)?;
        lead = Some(g);
    }
    let mut seen: HashMap<IwasawaPoint<S>, usize> = HashMap::new();
    let mut digits = Vec::new();
    let status = loop {
        if state.is_origin() {
            break Status::Finite;
        }
        if let Some(&i) = seen.get(&state) {
            break Status::EventuallyPeriodic {
                preperiod: i,
                period: digits.len() - i,
            };
        }
        if digits.len() >= max_iter {
            break Status::Truncated { max_iter };
        }
        seen.insert(state.clone(), digits.len());
        let (a, next) = step(sys, &state)?;
        digits.push(a);
        state = next;
    };
    Ok(Expansion {
        leading: lead,
        digits,
        status,
    })
}

/// `E(tail)` continued by `digits`: `ι(a₁ · ι(a₂ · ⋯ ι(a_n · tail)))`.
pub fn evaluate_from<S: Scalar>(
    sys: &CfSystem,
    tail: Ext<IwasawaPoint<S>>,
    digits: &[IwasawaPoint<S>],
) -> Result<Ext<IwasawaPoint<S>>, CfError> {
    let mut v = tail;
    for a in digits.iter().rev() {
        v = match v {
            Ext::Finite(p) => {
                let w = a.mul(&p)?;
                if w.is_origin() {
                    Ext::Infinity
                } else {
                    Ext::Finite(sys.invert(&w)?)
                }
            }
            Ext::Infinity => Ext::Finite(IwasawaPoint::origin(sys.space)),
        };
    }
    Ok(v)
}

/// Exact value of a finite expansion; `[]` is the origin.
pub fn evaluate<S: Scalar>(
    sys: &CfSystem,
    leading: Option<&IwasawaPoint<S>>,
    digits: &[IwasawaPoint<S>],
) -> Result<Ext<IwasawaPoint<S>>, CfError> {
    let v = evaluate_from(sys, Ext::Finite(IwasawaPoint::origin(sys.space)), digits)?;
    apply_leading(leading, v)
}

fn apply_leading<S: Scalar>(
    leading: Option<&IwasawaPoint<S>>,
    v: Ext<IwasawaPoint<S>>,
) -> Result<Ext<IwasawaPoint<S>>, CfError> {
    match (leading, v) {
        (Some(l), Ext::Finite(p)) => Ok(Ext::Finite(l.mul(&p)?)),
        (_, v) => Ok(v),
    }
}

/// Numerical value of a periodic spec by iterating the period map from the
/// origin until successive iterates are within `1e-12` in the gauge metric.
pub fn evaluate_periodic_f64(
    sys: &CfSystem,
    spec: &PeriodicSpec<f64>,
) -> Result<IwasawaPoint<f64>, CfError> {
    if spec.period.is_empty() {
        return Err(CfError::EmptyPeriod);
    }
    let mut v = IwasawaPoint::origin(sys.space);
    let mut converged = false;
    for _ in 0..10_000 {
        let next = match evaluate_from(sys, Ext::Finite(v.clone()), &spec.period)? {
            Ext::Finite(p) => p,
            Ext::Infinity => {
                return Err(CfError::DivergentPeriodicSpec("period map hit ∞".into()))
            }
        };
        let d = next.cygan(&v)?;
        v = next;
        if !d.is_finite() {
            break;
        }
        if d < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(CfError::DivergentPeriodicSpec(
            "no contraction within 10⁴ period iterations".into(),
        ));
    }
    let v = evaluate_from(sys, Ext::Finite(v), &spec.preperiod)?;
    match apply_leading(spec.leading.as_ref(), v)? {
        Ext::Finite(p) => Ok(p),
        Ext::Infinity => Err(CfError::DivergentPeriodicSpec("value is ∞".into())),
    }
}

/// The word `v ↦ ι(a₁ + ι(a₂ + ⋯ ι(a_k + v)))` with `ι(v) = ε/v`.
pub(crate) fn period_word<T>(eps: &T, digits: &[T]) -> Mat2<T>
where
    T: Clone + Zero + One + std::ops::Mul<Output = T> + std::ops::Sub<Output = T>,
{
    digits.iter().fold(Mat2::identity(), |acc, a| {
        acc.mul(&Mat2 {
            a: T::zero(),
            b: eps.clone(),
            c: T::one(),
            d: a.clone(),
        })
    })
}

/// Exact value in `Q(√D)` of a periodic real expansion.
///
/// The period word `M` fixes two quadratic conjugates; the value is the
/// attracting one, `|det M| < (γv + δ)²`.
pub fn evaluate_periodic_real(
    sys: &CfSystem,
    spec: &PeriodicSpec<Rational>,
) -> Result<QuadExt, CfError> {
    let eps = match (&sys.space, &sys.inversion) {
        (Space::Vector(1), Inversion::Signs(s)) => Rational::from_integer(s[0].into()),
        _ => return Err(CfError::Unsupported("exact real evaluation needs a real system".into())),
    };
    if spec.period.is_empty() {
        return Err(CfError::EmptyPeriod);
    }
    let digits: Vec<Rational> = spec.period.iter().map(|p| p.coords()[0].clone()).collect();
    let m = period_word(&eps, &digits);
    let q = QuadExt::rational;
    let det = m.det();
    let abs_det = if det < Rational::zero() { -det } else { det };
    let v = if m.c.is_zero() {
        if m.a == m.d {
            return Err(CfError::DivergentPeriodicSpec("parabolic period word".into()));
        }
        let v = &m.b / (&m.d - &m.a);
        if (&m.a / &m.d) * (&m.a / &m.d) >= Rational::one() {
            return Err(CfError::DivergentPeriodicSpec("fixed point is not attracting".into()));
        }
        q(v)
    } else {
        // γv² + (δ − α)v − β = 0
        let bq = &m.d - &m.a;
        let disc = &bq * &bq + Rational::from_integer(4.into()) * &m.c * &m.b;
        let sd = QuadExt::sqrt_rational(&disc)
            .map_err(|_| CfError::DivergentPeriodicSpec("elliptic period word".into()))?;
        let two_c = q(&m.c * Rational::from_integer(2.into()));
        let mut found = None;
        for sgn in [1i64, -1] {
            let r = (q(-bq.clone()) + sd.clone() * q(Rational::from_integer(sgn.into())))
                .try_div(&two_c)
                .expect("γ ≠ 0");
            let t = q(m.c.clone()) * r.clone() + q(m.d.clone());
            if (t.square() - q(abs_det.clone())).signum() > 0 {
                found = Some(r);
                break;
            }
        }
        found.ok_or_else(|| CfError::DivergentPeriodicSpec("no attracting fixed point".into()))?
    };
    let lift = |p: &IwasawaPoint<Rational>| p.map(|c| q(c.clone()));
    let pre: Vec<IwasawaPoint<QuadExt>> = spec.preperiod.iter().map(lift).collect();
    let r = evaluate_from(sys, Ext::Finite(IwasawaPoint::vector(vec![v])), &pre)?;
    let lead = spec.leading.as_ref().map(lift);
    match apply_leading(lead.as_ref(), r)? {
        Ext::Finite(p) => Ok(p.coords()[0].clone()),
        Ext::Infinity => Err(CfError::DivergentPeriodicSpec("value is ∞".into())),
    }
}

/// `M_n` with `M_n · x = Tⁿ x`: `M_n = Trans(−a_n) · I · M_{n−1}`, `I` the
/// matrix of `ι`. Every partial product is validated.
pub fn convergent_matrices<S: Scalar>(
    sys: &CfSystem,
    digits: &[IwasawaPoint<S>],
) -> Result<Vec<CliffordMatrix<S>>, CfError> {
    let iota: CliffordMatrix<S> = sys.iota_matrix().ok_or_else(|| {
        CfError::Unsupported(format!("{}: ι is not a Clifford matrix", sys.name))
    })?;
    let n = iota.rank();
    let mut acc = CliffordMatrix::identity(n);
    let mut out = Vec::with_capacity(digits.len());
    for a in digits {
        let v = a
            .to_clifford()
            .ok_or_else(|| CfError::InvalidDigit(a.to_string()))?;
        acc = CliffordMatrix::translation(-v) * iota.clone() * acc;
        let report = acc.validate();
        if !report.is_valid() {
            return Err(CfError::Validation(report.failures().join("; ")));
        }
        out.push(acc.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type P = IwasawaPoint<Rational>;
    type Q = IwasawaPoint<QuadExt>;

    fn r1(x: Rational) -> P {
        P::vector(vec![x])
    }

    /// Regular CF digits via the Euclidean algorithm.
    fn euclid(mut p: i64, mut q: i64) -> Vec<i64> {
        let mut out = vec![];
        while q != 0 {
            out.push(p.div_euclid(q));
            let r = p.rem_euclid(q);
            p = q;
            q = r;
        }
        out
    }

    #[test]
    fn regular_step_example() {
        let sys = CfSystem::real_regular();
        let (a, next) = gauss_step(&sys, &r1(rat(3, 7))).unwrap();
        assert_eq!(a, r1(int(2)));
        assert_eq!(next, r1(rat(1, 3)));
        assert_eq!(gauss_step(&sys, &r1(int(0))), Err(CfError::ZeroState));
        assert!(matches!(gauss_step(&sys, &r1(int(2))), Err(CfError::NotInDomain(_))));
    }

    #[test]
    fn regular_expansion_matches_euclid() {
        let sys = CfSystem::real_regular();
        for (p, q) in [(3, 7), (13, 29), (1, 1000), (355, 1130)] {
            let e = expand(&sys, &r1(rat(p, q)), 100).unwrap();
            assert!(e.is_finite());
            let ds: Vec<i64> = e.digits.iter().map(|d| d.to_digit_string().parse().unwrap()).collect();
            let mut want = euclid(p, q);
            assert_eq!(want.remove(0), 0);
            assert_eq!(ds, want);
        }
        let e = expand(&sys, &r1(rat(3, 7)), 10).unwrap();
        assert_eq!(evaluate(&sys, None, &e.digits).unwrap(), Ext::Finite(r1(rat(3, 7))));
    }

    #[test]
    fn nearest_integer_surd_step() {
        let sys = CfSystem::real_nearest();
        let s2 = QuadExt::sqrt_int(2).unwrap();
        let x = Q::vector(vec![s2.clone() - QuadExt::one()]);
        let (a, next) = gauss_step(&sys, &x).unwrap();
        // −1/(√2−1) = −√2−1 ≈ −2.414
        assert_eq!(a, Q::vector(vec![QuadExt::from_int(-2)]));
        assert_eq!(next.coords()[0], -s2.clone() + QuadExt::one());
        assert!(next.gauge4().cmp_exact(&QuadExt::from(rat(1, 16))).is_le());
        let float = -1.0 / (2f64.sqrt() - 1.0);
        assert!((next.coords()[0].as_f64() - (float - (float + 0.5).floor())).abs() < 1e-12);
    }

    #[test]
    fn golden_ratio_regular() {
        let sys = CfSystem::real_regular();
        let phi = (QuadExt::one() + QuadExt::sqrt_int(5).unwrap()) * QuadExt::from(rat(1, 2));
        let e = expand(&sys, &Q::vector(vec![phi.clone()]), 100).unwrap();
        assert_eq!(e.leading, Some(Q::vector(vec![QuadExt::one()])));
        assert_eq!(e.status, Status::EventuallyPeriodic { preperiod: 0, period: 1 });
        assert_eq!(e.digit_strings(), vec!["1"]);
        let spec = e.spec().unwrap().to_rational().unwrap();
        assert_eq!(evaluate_periodic_real(&sys, &spec).unwrap(), phi);
    }

    #[test]
    fn real_surds_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sys in [CfSystem::real_nearest(), CfSystem::real_regular()] {
            for _ in 0..60 {
                let d = loop {
                    let d = rng.gen_range(2..200i64);
                    if (d as f64).sqrt().fract() != 0.0 {
                        break d;
                    }
                };
                let x = QuadExt::from(rat(rng.gen_range(-20..20), rng.gen_range(1..9)))
                    + QuadExt::sqrt_int(d).unwrap() * QuadExt::from(rat(rng.gen_range(1..5), rng.gen_range(1..5)));
                let e = expand(&sys, &Q::vector(vec![x.clone()]), DEFAULT_MAX_ITER).unwrap();
                assert!(e.is_periodic(), "{x}");
                let spec = e.spec().unwrap().to_rational().unwrap();
                assert_eq!(evaluate_periodic_real(&sys, &spec).unwrap(), x);
                let fl = evaluate_periodic_f64(&sys, &spec.map(|c| c.as_f64())).unwrap();
                assert!((fl.coords()[0] - x.as_f64()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn empty_expansion_is_origin() {
        let sys = CfSystem::r3();
        assert_eq!(evaluate::<Rational>(&sys, None, &[]).unwrap(), Ext::Finite(P::origin(sys.space)));
    }

    fn r3_surd(sign: i64) -> Q {
        let c = (QuadExt::from_int(-1) + QuadExt::sqrt_int(3).unwrap() * QuadExt::from_int(sign))
            * QuadExt::from(rat(1, 4));
        Q::vector(vec![QuadExt::zero(), c.clone(), c])
    }

    fn ij(k: i64) -> Q {
        Q::vector(vec![QuadExt::zero(), QuadExt::from_int(k), QuadExt::from_int(k)])
    }

    #[test]
    fn r3_periodic_pair() {
        let sys = CfSystem::r3();
        let e = expand(&sys, &r3_surd(1), 100).unwrap();
        assert_eq!(e.leading, None);
        assert_eq!(e.digits, vec![ij(3), ij(-2), ij(4)]);
        assert_eq!(e.status, Status::EventuallyPeriodic { preperiod: 1, period: 2 });

        let e = expand_with(&sys, &r3_surd(-1), 100, LeadingDigit::Never).unwrap();
        assert_eq!(e.digits, vec![ij(-1), ij(2), ij(-4)]);
        assert_eq!(e.status, Status::EventuallyPeriodic { preperiod: 1, period: 2 });
        let spec = e.spec().unwrap().map(|c| c.as_f64());
        let v = evaluate_periodic_f64(&sys, &spec).unwrap();
        let c = (-1.0 - 3f64.sqrt()) / 4.0;
        assert!(v.cygan(&IwasawaPoint::vector(vec![0.0, c, c])).unwrap() < 1e-10);
        assert_eq!(e.to_string(), "[-i-j, (2i+2j, -4i-4j)]");

        // with a zeroth digit the same point reads −(i+j)·[…]
        let auto = expand(&sys, &r3_surd(-1), 100).unwrap();
        assert_eq!(auto.leading, Some(ij(-1)));
    }

    #[test]
    fn convergents_reproduce_iterates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for sys in [CfSystem::real_nearest(), CfSystem::complex(), CfSystem::r3(), CfSystem::r4_hurwitz()] {
            for _ in 0..10 {
                let dim = sys.space.dim();
                let x = P::vector((0..dim).map(|_| rat(rng.gen_range(-500..500), 1009)).collect());
                let x = sys.unact(&sys.round(&x).unwrap(), &x).unwrap();
                let states = orbit(&sys, &x, 20).unwrap();
                let e = expand(&sys, &x, 20).unwrap();
                let ms = convergent_matrices(&sys, &e.digits).unwrap();
                for (k, m) in ms.iter().enumerate() {
                    assert_eq!(m.pseudo_det(), crate::clifford::CliffordElement::one(m.rank()));
                    let got = m.apply_coords(x.coords()).unwrap();
                    assert_eq!(got, Ext::Finite(states[k + 1].coords().to_vec()), "{} step {k}", sys.name);
                }
            }
        }
        assert!(convergent_matrices::<Rational>(&CfSystem::real_regular(), &[r1(int(2))]).is_err());
    }

    #[test]
    fn minimal_period_by_brute_force() {
        let sys = CfSystem::real_nearest();
        for d in [2i64, 3, 7, 13, 19, 43, 94] {
            let x = Q::vector(vec![QuadExt::sqrt_int(d).unwrap()]);
            let e = expand(&sys, &x, 1000).unwrap();
            let Status::EventuallyPeriodic { preperiod, period } = e.status else { panic!() };
            let x0 = sys.unact(e.leading.as_ref().unwrap(), &x).unwrap();
            let states = orbit(&sys, &x0, preperiod + 2 * period).unwrap();
            // smallest (i, j) with T^i = T^j, lexicographic in j
            let mut best = None;
            'outer: for j in 1..states.len() {
                for i in 0..j {
                    if states[i] == states[j] {
                        best = Some((i, j - i));
                        break 'outer;
                    }
                }
            }
            assert_eq!(best, Some((preperiod, period)), "√{d}");
        }
    }

    fn arb_rat_in(lo: i64) -> impl Strategy<Value = Rational> {
        (0i64..1000, 1i64..1000).prop_map(move |(a, b)| rat(a % b, b) + rat(lo, 2))
    }

    proptest! {
        #[test]
        fn rationals_are_finite_and_shrink(idx in 0usize..4, c in prop::collection::vec(arb_rat_in(-1), 4)) {
            let systems = [CfSystem::real_nearest(), CfSystem::complex(), CfSystem::r3(), CfSystem::r4_hurwitz()];
            let sys = &systems[idx];
            let x = P::vector(c[..sys.space.dim()].to_vec());
            let x = sys.unact(&sys.round(&x).unwrap(), &x).unwrap();
            let e = expand(sys, &x, DEFAULT_MAX_ITER).unwrap();
            prop_assert!(e.is_finite());
            let rad4 = sys.rad4();
            for s in orbit(sys, &x, e.digits.len()).unwrap().iter().skip(1) {
                prop_assert!(s.gauge4() <= rad4);
            }
            prop_assert_eq!(evaluate(sys, None, &e.digits).unwrap(), Ext::Finite(x));
        }
    }
}
