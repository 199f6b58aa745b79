//! Exact complex quadratic surds `z = α + β√Δ` over `Q(i)`.
//!
//! `Δ ∈ Z[i]` is a non-square and `√Δ = u + iv` is its principal root
//! (`u > 0`, or `u = 0, v > 0`). With `M = |Δ|²`:
//!
//! ```text
//! u = √X,  X = (√M + Re Δ)/2
//! v = ±√Z, Z = (√M − Re Δ)/2,   sign of v = sign of Im Δ
//! ```
//!
//! so `X, Z ∈ Q(√M)` and `√(XZ) = |Im Δ|/2` is rational. The real and
//! imaginary parts of `z` have the shape `k + a√X + b√Z` with `k, a, b ∈ Q`,
//! and their signs (hence floors) are decided exactly by two squarings
//! inside `Q(√M)`. This handles the Hurwitz complex CF (`Z[i]`, `1/z` or
//! `−1/z`) of any Gaussian quadratic surd without a quartic tower.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{period_word, CfError, Expansion, LeadingDigit, PeriodicSpec, Status};
use crate::scalar::{int, ratio_to_f64, QuadExt, Rational, Scalar, Zid};
use crate::spaces::{fmt_linear, CfSystem, Domain, Inversion, IwasawaPoint, Lattice, Space};

/// Gaussian rationals.
pub type Gq = Complex<Rational>;
/// Gaussian integers.
pub type Gi = Complex<BigInt>;

pub fn gq(re: Rational, im: Rational) -> Gq {
    Complex::new(re, im)
}

fn gq_from_gi(z: &Gi) -> Gq {
    Complex::new(
        Rational::from_integer(z.re.clone()),
        Rational::from_integer(z.im.clone()),
    )
}

fn gq_to_c64(z: &Gq) -> Complex64 {
    Complex64::new(ratio_to_f64(&z.re), ratio_to_f64(&z.im))
}

/// `√z` in `Z[i]`, if `z` is a Gaussian square.
pub fn gaussian_sqrt(z: &Gi) -> Option<Gi> {
    Zid::new(z.re.clone(), z.im.clone(), 1)
        .sqrt()
        .map(|r| Complex::new(r.p, r.q))
}

#[derive(Clone, Debug)]
struct Radicals {
    x: QuadExt,
    z: QuadExt,
    sqrt_xz: Rational,
    v_sign: i8,
    u: f64,
    v: f64,
}

impl Radicals {
    fn new(delta: &Gi) -> Self {
        let re = Rational::from_integer(delta.re.clone());
        let im = Rational::from_integer(delta.im.clone());
        let m = &re * &re + &im * &im;
        let sm = QuadExt::sqrt_rational(&m).expect("|Δ|² ≥ 0");
        let h = QuadExt::rational(Rational::new(1.into(), 2.into()));
        let x = (sm.clone() + QuadExt::rational(re.clone())) * h.clone();
        let z = (sm - QuadExt::rational(re)) * h;
        let v_sign = if im.is_negative() { -1 } else { 1 };
        Radicals {
            u: x.as_f64().max(0.0).sqrt(),
            v: v_sign as f64 * z.as_f64().max(0.0).sqrt(),
            sqrt_xz: im.abs() / int(2),
            x,
            z,
            v_sign,
        }
    }

    /// Exact sign of `k + a√X + b√Z`.
    fn sign(&self, k: &Rational, a: &Rational, b: &Rational) -> i8 {
        let sgn = |r: &Rational| -> i8 {
            if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            }
        };
        let q = |r: &Rational| QuadExt::rational(r.clone());
        let sa = if self.x.is_zero() { 0 } else { sgn(a) };
        let sb = if self.z.is_zero() { 0 } else { sgn(b) };
        let ax = q(&(a * a)) * self.x.clone();
        let bz = q(&(b * b)) * self.z.clone();
        let sp = match (sa, sb) {
            (0, s) | (s, 0) => s,
            (s, t) if s == t => s,
            _ => match (ax.clone() - bz.clone()).signum() {
                1 => sa,
                -1 => sb,
                _ => 0,
            },
        };
        let sk = sgn(k);
        if sp == 0 {
            return sk;
        }
        if sk == 0 || sk == sp {
            return sp;
        }
        // opposite signs: compare k² with P² = a²X + b²Z + 2ab√(XZ)
        let p2 = ax + bz + q(&(int(2) * a * b * &self.sqrt_xz));
        match (q(&(k * k)) - p2).signum() {
            1 => sk,
            -1 => sp,
            _ => 0,
        }
    }

    fn floor(&self, k: &Rational, a: &Rational, b: &Rational) -> BigInt {
        let approx = ratio_to_f64(k) + ratio_to_f64(a) * self.x.as_f64().max(0.0).sqrt()
            + ratio_to_f64(b) * self.z.as_f64().max(0.0).sqrt();
        let mut f = if approx.is_finite() {
            BigInt::from(approx.floor() as i64)
        } else {
            k.floor().to_integer()
        };
        let at = |f: &BigInt| self.sign(&(k - Rational::from_integer(f.clone())), a, b);
        while at(&f) < 0 {
            f -= 1;
        }
        while at(&(&f + 1)) >= 0 {
            f += 1;
        }
        f
    }
}

/// `α + β√Δ` with `β ≠ 0` and `Δ` not a Gaussian square.
#[derive(Clone, Debug)]
pub struct ComplexSurd {
    alpha: Gq,
    beta: Gq,
    delta: Gi,
    rads: Radicals,
}

impl PartialEq for ComplexSurd {
    fn eq(&self, o: &Self) -> bool {
        self.alpha == o.alpha && self.beta == o.beta && self.delta == o.delta
    }
}

impl Eq for ComplexSurd {}

impl Hash for ComplexSurd {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.alpha.hash(h);
        self.beta.hash(h);
        self.delta.hash(h);
    }
}

/// A root of a quadratic over `Q(i)`: Gaussian rational or genuine surd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ComplexRoot {
    Rational(Gq),
    Surd(ComplexSurd),
}

/// `1/2-3i`, the compact Gaussian syntax used for digits.
pub fn fmt_gq(z: &Gq) -> String {
    fmt_linear(&[z.re.clone(), z.im.clone()], &["", "i"])
}

impl fmt::Display for ComplexRoot {
    /// `α + β√(Δ)` with the principal branch of the root.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexRoot::Rational(z) => f.write_str(&fmt_gq(z)),
            ComplexRoot::Surd(s) => {
                let d = gq_from_gi(&s.delta);
                let beta = fmt_gq(&s.beta);
                let beta = if beta == "1" { String::new() } else { format!("({beta})") };
                if s.alpha.is_zero() {
                    write!(f, "{beta}√({})", fmt_gq(&d))
                } else {
                    write!(f, "{} + {beta}√({})", fmt_gq(&s.alpha), fmt_gq(&d))
                }
            }
        }
    }
}

impl ComplexSurd {
    pub fn alpha(&self) -> &Gq {
        &self.alpha
    }

    pub fn beta(&self) -> &Gq {
        &self.beta
    }

    pub fn delta(&self) -> &Gi {
        &self.delta
    }

    fn with(&self, alpha: Gq, beta: Gq) -> ComplexSurd {
        ComplexSurd {
            alpha,
            beta,
            delta: self.delta.clone(),
            rads: self.rads.clone(),
        }
    }

    /// `Re z = Re α + Re β·u − Im β·v` as `(k, a, b)` over `(1, √X, √Z)`.
    fn re_parts(&self) -> (Rational, Rational, Rational) {
        let s = Rational::from_integer(self.rads.v_sign.into());
        (
            self.alpha.re.clone(),
            self.beta.re.clone(),
            -(&self.beta.im * &s),
        )
    }

    /// `Im z = Im α + Re β·v + Im β·u`.
    fn im_parts(&self) -> (Rational, Rational, Rational) {
        let s = Rational::from_integer(self.rads.v_sign.into());
        (
            self.alpha.im.clone(),
            self.beta.im.clone(),
            &self.beta.re * &s,
        )
    }

    pub fn floor_re(&self, shift: &Rational) -> BigInt {
        let (k, a, b) = self.re_parts();
        self.rads.floor(&(k - shift), &a, &b)
    }

    pub fn floor_im(&self, shift: &Rational) -> BigInt {
        let (k, a, b) = self.im_parts();
        self.rads.floor(&(k - shift), &a, &b)
    }

    pub fn to_c64(&self) -> Complex64 {
        let w = Complex64::new(self.rads.u, self.rads.v);
        gq_to_c64(&self.alpha) + gq_to_c64(&self.beta) * w
    }

    pub fn sub(&self, g: &Gq) -> ComplexSurd {
        self.with(&self.alpha - g, self.beta.clone())
    }

    pub fn neg(&self) -> ComplexSurd {
        self.with(-self.alpha.clone(), -self.beta.clone())
    }

    /// `1/z = (α − β√Δ)/(α² − β²Δ)`; the denominator is nonzero because `√Δ ∉ Q(i)`.
    pub fn recip(&self) -> ComplexSurd {
        let n = &self.alpha * &self.alpha - &self.beta * &self.beta * gq_from_gi(&self.delta);
        self.with(&self.alpha / &n, -(&self.beta / &n))
    }

    /// `z²` exactly, when it lies in `Q(i)`.
    pub fn square_in_qi(&self) -> Option<Gq> {
        let cross = &self.alpha * &self.beta;
        cross
            .is_zero()
            .then(|| &self.alpha * &self.alpha + &self.beta * &self.beta * gq_from_gi(&self.delta))
    }

    /// `(a z + b)/(c z + d)`, `None` at ∞.
    pub fn mobius(&self, m: &[Gq; 4]) -> Option<ComplexRoot> {
        let [a, b, c, d] = m;
        let p = a * &self.alpha + b;
        let q = a * &self.beta;
        let r = c * &self.alpha + d;
        let s = c * &self.beta;
        if r.is_zero() && s.is_zero() {
            return None;
        }
        let dl = gq_from_gi(&self.delta);
        let n = &r * &r - &s * &s * &dl;
        let alpha = (&p * &r - &q * &s * &dl) / &n;
        let beta = (&q * &r - &p * &s) / &n;
        Some(if beta.is_zero() {
            ComplexRoot::Rational(alpha)
        } else {
            ComplexRoot::Surd(self.with(alpha, beta))
        })
    }
}

impl ComplexRoot {
    /// `α + β√Δ` for Gaussian-rational `Δ`, normalised to `Δ ∈ Z[i]`.
    pub fn new(alpha: Gq, beta: Gq, delta: Gq) -> ComplexRoot {
        if beta.is_zero() || delta.is_zero() {
            return ComplexRoot::Rational(alpha);
        }
        // √(Δ'/q²) = √Δ'/q for a positive integer q
        let q = delta.re.denom().lcm(delta.im.denom());
        let qr = Rational::from_integer(q.clone());
        let scaled = &delta * gq(&qr * &qr, Rational::zero());
        let di: Gi = Complex::new(scaled.re.to_integer(), scaled.im.to_integer());
        let beta = beta / gq(qr, Rational::zero());
        if let Some(s) = gaussian_sqrt(&di) {
            // the principal root of a square may differ from s by a sign
            let s = principal(&s);
            return ComplexRoot::Rational(alpha + beta * gq_from_gi(&s));
        }
        ComplexRoot::Surd(ComplexSurd {
            alpha,
            beta,
            rads: Radicals::new(&di),
            delta: di,
        })
    }

    /// Roots of `A z² + B z + C = 0` over `Q(i)`, `A ≠ 0`.
    ///
    /// The first root uses `+√Δ`, the second `−√Δ`.
    pub fn quadratic_roots(a: &Gq, b: &Gq, c: &Gq) -> Result<[ComplexRoot; 2], CfError> {
        if a.is_zero() {
            return Err(CfError::Unsupported("degenerate quadratic (A = 0)".into()));
        }
        let four = gq(int(4), Rational::zero());
        let two_a = a * gq(int(2), Rational::zero());
        let delta = b * b - four * a * c;
        let alpha = -(b / &two_a);
        let beta = Complex::<Rational>::one() / &two_a;
        Ok([
            ComplexRoot::new(alpha.clone(), beta.clone(), delta.clone()),
            ComplexRoot::new(alpha, -beta, delta),
        ])
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            ComplexRoot::Rational(z) => gq_to_c64(z),
            ComplexRoot::Surd(s) => s.to_c64(),
        }
    }

    pub fn mobius(&self, m: &[Gq; 4]) -> Option<ComplexRoot> {
        match self {
            ComplexRoot::Surd(s) => s.mobius(m),
            ComplexRoot::Rational(z) => {
                let [a, b, c, d] = m;
                let den = c * z + d;
                if den.is_zero() {
                    None
                } else {
                    Some(ComplexRoot::Rational((a * z + b) / den))
                }
            }
        }
    }

    /// Exact equality of values, allowing different (square-equivalent) `Δ`.
    pub fn same_value(&self, o: &ComplexRoot) -> bool {
        match (self, o) {
            (ComplexRoot::Rational(a), ComplexRoot::Rational(b)) => a == b,
            (ComplexRoot::Surd(x), ComplexRoot::Surd(y)) => {
                if x.alpha != y.alpha {
                    return false;
                }
                // β₁√Δ₁ = ±β₂√Δ₂ iff the squares agree; the sign is then
                // decided numerically (the two candidates differ by 2|β√Δ|).
                let l = &x.beta * &x.beta * gq_from_gi(&x.delta);
                let r = &y.beta * &y.beta * gq_from_gi(&y.delta);
                l == r && (x.to_c64() - y.to_c64()).norm() < (x.to_c64() - gq_to_c64(&x.alpha)).norm()
            }
            _ => false,
        }
    }

    pub fn to_point(&self) -> Option<IwasawaPoint<Rational>> {
        match self {
            ComplexRoot::Rational(z) => Some(IwasawaPoint::vector(vec![z.re.clone(), z.im.clone()])),
            ComplexRoot::Surd(_) => None,
        }
    }
}

fn principal(s: &Gi) -> Gi {
    if s.re.is_negative() || (s.re.is_zero() && s.im.is_negative()) {
        -s.clone()
    } else {
        s.clone()
    }
}

/// `(ε, lo)` for the Hurwitz complex system with `ι(z) = ε/z`.
fn holomorphic(sys: &CfSystem) -> Result<(i8, Rational, Rational), CfError> {
    let ok_lattice = matches!(sys.lattice, Lattice::Integer { m: 2, step: 1 });
    match (&sys.space, &sys.inversion, &sys.domain) {
        (Space::Vector(2), Inversion::Signs(s), Domain::Box { lo }) if ok_lattice && s[0] == -s[1] => {
            Ok((s[0], lo[0].clone(), lo[1].clone()))
        }
        _ => Err(CfError::Unsupported(format!(
            "{}: complex surds need digits Z[i], a box domain and ι(z) = ±1/z",
            sys.name
        ))),
    }
}

fn gi_point(re: BigInt, im: BigInt) -> IwasawaPoint<Rational> {
    IwasawaPoint::vector(vec![Rational::from_integer(re), Rational::from_integer(im)])
}

/// Expansion of a complex quadratic irrationality (or Gaussian rational).
pub fn expand_complex(
    sys: &CfSystem,
    z: &ComplexRoot,
    max_iter: usize,
    leading: LeadingDigit,
) -> Result<Expansion<Rational>, CfError> {
    let (eps, lo_re, lo_im) = holomorphic(sys)?;
    let z = match z {
        ComplexRoot::Rational(_) => {
            return super::expand_with(sys, &z.to_point().expect("rational"), max_iter, leading)
        }
        ComplexRoot::Surd(s) => s,
    };
    let round = |s: &ComplexSurd| -> (BigInt, BigInt) { (s.floor_re(&lo_re), s.floor_im(&lo_im)) };
    let mut state = z.clone();
    let mut lead = None;
    if leading == LeadingDigit::Auto {
        let (a, b) = round(&state);
        if !a.is_zero() || !b.is_zero() {
            state = state.sub(&gq_from_gi(&Complex::new(a.clone(), b.clone())));
            lead = Some(gi_point(a, b));
        }
    }
    let mut seen: HashMap<ComplexSurd, usize> = HashMap::new();
    let mut digits = Vec::new();
    let status = loop {
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
        let mut w = state.recip();
        if eps < 0 {
            w = w.neg();
        }
        let (a, b) = round(&w);
        state = w.sub(&gq_from_gi(&Complex::new(a.clone(), b.clone())));
        digits.push(gi_point(a, b));
    };
    Ok(Expansion {
        leading: lead,
        digits,
        status,
    })
}

fn point_gq(p: &IwasawaPoint<Rational>) -> Gq {
    gq(p.coords()[0].clone(), p.coords()[1].clone())
}

/// Exact value of a periodic complex expansion: the attracting fixed point
/// of the period word, pushed through the preperiod and the leading digit.
pub fn evaluate_periodic_complex(
    sys: &CfSystem,
    spec: &PeriodicSpec<Rational>,
) -> Result<ComplexRoot, CfError> {
    let (eps, _, _) = holomorphic(sys)?;
    if spec.period.is_empty() {
        return Err(CfError::EmptyPeriod);
    }
    let e = gq(int(eps as i64), Rational::zero());
    let digits: Vec<Gq> = spec.period.iter().map(point_gq).collect();
    let m = period_word(&e, &digits);
    let det = gq_to_c64(&m.det()).norm();
    let roots: Vec<ComplexRoot> = if m.c.is_zero() {
        if m.a == m.d {
            return Err(CfError::DivergentPeriodicSpec("parabolic period word".into()));
        }
        vec![ComplexRoot::Rational(&m.b / (&m.d - &m.a))]
    } else {
        ComplexRoot::quadratic_roots(&m.c, &(&m.d - &m.a), &-m.b.clone())?.to_vec()
    };
    let cc = gq_to_c64(&m.c);
    let dd = gq_to_c64(&m.d);
    let v = roots
        .into_iter()
        .filter(|r| (cc * r.to_c64() + dd).norm_sqr() > det)
        .max_by(|x, y| {
            (cc * x.to_c64() + dd)
                .norm_sqr()
                .total_cmp(&(cc * y.to_c64() + dd).norm_sqr())
        })
        .ok_or_else(|| CfError::DivergentPeriodicSpec("no attracting fixed point".into()))?;
    let zero = Gq::zero();
    let one = Gq::one();
    let mut v = v;
    for a in spec.preperiod.iter().rev() {
        v = v
            .mobius(&[zero.clone(), e.clone(), one.clone(), point_gq(a)])
            .ok_or_else(|| CfError::DivergentPeriodicSpec("value is ∞".into()))?;
    }
    if let Some(l) = &spec.leading {
        v = v
            .mobius(&[one.clone(), point_gq(l), zero.clone(), one.clone()])
            .expect("translation is finite");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(re: i64, im: i64) -> Gq {
        gq(int(re), int(im))
    }

    fn sqrt_1_plus_i() -> ComplexRoot {
        let [r, _] = ComplexRoot::quadratic_roots(&g(1, 0), &g(0, 0), &g(-1, -1)).unwrap();
        r
    }

    #[test]
    fn principal_root_of_one_plus_i() {
        let z = sqrt_1_plus_i();
        let want = Complex64::new(1.0, 1.0).sqrt();
        assert!((z.to_c64() - want).norm() < 1e-15);
        let ComplexRoot::Surd(s) = &z else { panic!() };
        assert_eq!(s.square_in_qi(), Some(g(1, 1)));
    }

    #[test]
    fn hurwitz_expansion_of_sqrt_one_plus_i() {
        let sys = CfSystem::complex();
        let e = expand_complex(&sys, &sqrt_1_plus_i(), 100, LeadingDigit::Auto).unwrap();
        assert_eq!(e.leading, Some(gi_point(1.into(), 0.into())));
        assert_eq!(e.digits, vec![gi_point(0.into(), (-2).into()), gi_point(2.into(), 0.into())]);
        assert_eq!(e.status, Status::EventuallyPeriodic { preperiod: 0, period: 2 });
        assert_eq!(e.to_string(), "[1; (-2i, 2)]");
        let v = evaluate_periodic_complex(&sys, &e.spec().unwrap()).unwrap();
        assert!(v.same_value(&sqrt_1_plus_i()));
        let ComplexRoot::Surd(s) = &v else { panic!() };
        assert_eq!(s.square_in_qi(), Some(g(1, 1)));
    }

    /// The exact floors agree with a high-precision float oracle away from
    /// integer boundaries.
    #[test]
    fn floors_match_floats() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 2000 {
            let d = Complex::new(BigInt::from(rng.gen_range(-50..50)), BigInt::from(rng.gen_range(-50..50)));
            let alpha = gq(rat(rng.gen_range(-30..30), rng.gen_range(1..7)), rat(rng.gen_range(-30..30), rng.gen_range(1..7)));
            let beta = gq(rat(rng.gen_range(-9..9), rng.gen_range(1..5)), rat(rng.gen_range(-9..9), rng.gen_range(1..5)));
            let ComplexRoot::Surd(s) = ComplexRoot::new(alpha, beta, gq_from_gi(&d)) else { continue };
            let f = s.to_c64();
            if (f.re - f.re.round()).abs() < 1e-9 || (f.im - f.im.round()).abs() < 1e-9 {
                continue;
            }
            assert_eq!(s.floor_re(&Rational::zero()), BigInt::from(f.re.floor() as i64), "{d} {f}");
            assert_eq!(s.floor_im(&Rational::zero()), BigInt::from(f.im.floor() as i64), "{d} {f}");
            checked += 1;
        }
    }

    #[test]
    fn random_complex_surds_are_periodic() {
        let sys = CfSystem::complex();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 100 {
            let mut r = || g(rng.gen_range(-6..7), rng.gen_range(-6..7));
            let (a, b, c) = (r(), r(), r());
            if a.is_zero() {
                continue;
            }
            let [z, _] = ComplexRoot::quadratic_roots(&a, &b, &c).unwrap();
            if !matches!(z, ComplexRoot::Surd(_)) {
                continue;
            }
            let e = expand_complex(&sys, &z, 10_000, LeadingDigit::Auto).unwrap();
            assert!(e.is_periodic(), "{a} {b} {c}: {:?}", e.status);
            let v = evaluate_periodic_complex(&sys, &e.spec().unwrap()).unwrap();
            assert!(v.same_value(&z), "{a} {b} {c}");
            assert!((v.to_c64() - z.to_c64()).norm() < 1e-10);
            done += 1;
        }
    }

    #[test]
    fn negative_inversion_pattern() {
        let mut sys = CfSystem::complex();
        sys.inversion = Inversion::Signs(vec![-1, 1]);
        let e = expand_complex(&sys, &sqrt_1_plus_i(), 100, LeadingDigit::Auto).unwrap();
        assert!(e.is_periodic());
        let v = evaluate_periodic_complex(&sys, &e.spec().unwrap()).unwrap();
        assert!(v.same_value(&sqrt_1_plus_i()));
    }

    #[test]
    fn rational_roots_take_the_rational_path() {
        // (z − 1)(z − i) = z² − (1+i) z + i
        let [r1, r2] = ComplexRoot::quadratic_roots(&g(1, 0), &g(-1, -1), &g(0, 1)).unwrap();
        let mut got = [r1, r2].map(|r| match r {
            ComplexRoot::Rational(z) => (z.re, z.im),
            _ => panic!("expected rational"),
        });
        got.sort();
        assert_eq!(got, [(int(0), int(1)), (int(1), int(0))]);
        assert!(holomorphic(&CfSystem::r3()).is_err());
    }
}
