//! The upper half-space `X × R₊`: horoheights, the extended inversion,
//! horoball tracking along the Gauss map, and geodesics through the gauge
//! unit sphere.

use std::fmt;

use thiserror::Error;

use crate::cf::CfError;
use crate::clifford::Ext;
use crate::par::Exec;
use crate::scalar::{Rational, Scalar};
use crate::spaces::{CfSystem, Inversion, IwasawaPoint, Space, SpaceError};

mod geodesic;

pub use geodesic::{
    geodesic_sphere_min_height, sphere_crossing_height, GeodesicConfig, GeodesicMin, Model,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypError {
    #[error("horoheight must be positive")]
    NonPositiveHeight,
    #[error("horoball based at the origin has no finite image height")]
    ZeroBase,
    #[error("the extended inversion is undefined at its pole")]
    InversionOfPole,
    #[error("coordinate {0} is not rational")]
    NotRational(String),
    #[error("point {0} is not in the fundamental domain")]
    NotInDomain(String),
    #[error("horoball trace did not terminate within {0} steps")]
    Truncated(usize),
    #[error("geodesic does not cross the unit sphere: {0}")]
    NoIntersection(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// A point `(p, s)` of the upper half-space, `s > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpperHalfPoint<S> {
    pub p: IwasawaPoint<S>,
    pub s: S,
}

impl<S: Scalar> UpperHalfPoint<S> {
    pub fn new(p: IwasawaPoint<S>, s: S) -> Result<Self, HypError> {
        if s.signum() <= 0 {
            return Err(HypError::NonPositiveHeight);
        }
        Ok(UpperHalfPoint { p, s })
    }

    /// `‖z‖² + s` and `t` (zero on vector models): `w = s + t`, `W = ‖z‖² + w`.
    fn big_w(&self) -> (S, S) {
        match self.p.space() {
            Space::Vector(_) => (self.p.norm_sq() + self.s.clone(), S::zero()),
            Space::Heisenberg => {
                let c = self.p.coords();
                (
                    c[0].square() + c[1].square() + self.s.clone(),
                    c[2].clone(),
                )
            }
        }
    }

    /// `‖(z, w)‖⁴ = |‖z‖² + w|²`, extending the boundary gauge.
    pub fn gauge4(&self) -> S {
        let (re, im) = self.big_w();
        re.square() + im.square()
    }

    /// `(g * p, s)`.
    pub fn translate(&self, g: &IwasawaPoint<S>) -> Result<Self, HypError> {
        Ok(UpperHalfPoint {
            p: g.mul(&self.p)?,
            s: self.s.clone(),
        })
    }

    /// `(δ_r p, r² s)`.
    pub fn dilate(&self, r: &S) -> Result<Self, HypError> {
        Ok(UpperHalfPoint {
            p: self.p.dilate(r)?,
            s: self.s.clone() * r.square(),
        })
    }

    pub fn to_f64(&self) -> UpperHalfPoint<f64> {
        UpperHalfPoint {
            p: self.p.to_f64(),
            s: self.s.as_f64(),
        }
    }
}

impl<S: Scalar> fmt::Display for UpperHalfPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, s = {})", self.p, self.s)
    }
}

pub fn horoheight<S: Scalar>(x: &UpperHalfPoint<S>) -> S {
    x.s.clone()
}

/// The extended inversion `ι(z, w) = (−z/W, w̄/|W|²)`, `W = ‖z‖² + w`.
///
/// On the Heisenberg model this is the extended Koranyi inversion; on `R^m`
/// the sign pattern `σ` of `inv` is applied to `z`. The new horoheight is
/// `s/|W|²`, so `‖ιx‖ = ‖x‖⁻¹`.
pub fn extended_invert<S: Scalar>(
    x: &UpperHalfPoint<S>,
    inv: &Inversion,
) -> Result<UpperHalfPoint<S>, HypError> {
    let n = x.gauge4();
    if n.is_zero() {
        return Err(HypError::InversionOfPole);
    }
    let div = |v: S| v.try_div(&n).expect("nonzero gauge");
    let (re, im) = x.big_w();
    let c = x.p.coords();
    let p = match (x.p.space(), inv) {
        (Space::Vector(m), Inversion::Signs(sig)) if sig.len() == m => {
            // σz/W, matching ι(x) = σ(x)/‖x‖² on the boundary
            let coords = c
                .iter()
                .zip(sig)
                .map(|(v, &s)| {
                    let v = if s < 0 { -v.clone() } else { v.clone() };
                    div(v * re.clone())
                })
                .collect();
            IwasawaPoint::vector(coords)
        }
        (Space::Heisenberg, Inversion::Koranyi) => {
            // −z W̄ / |W|²
            let (a, b) = (&c[0], &c[1]);
            let zr = a.clone() * re.clone() + b.clone() * im.clone();
            let zi = b.clone() * re.clone() - a.clone() * im.clone();
            IwasawaPoint::heisenberg(div(-zr), div(-zi), div(-im.clone()))
        }
        _ => {
            return Err(SpaceError::Unsupported("inversion does not match the space".into()).into())
        }
    };
    let s = div(x.s.clone());
    UpperHalfPoint::new(p, s)
}

/// `p ∈ K` and `d_C((p, s), (0, 0)) ≥ 1`.
pub fn in_goalpost_region<S: Scalar>(x: &UpperHalfPoint<S>, sys: &CfSystem) -> Result<bool, HypError> {
    if x.p.space() != sys.space {
        return Err(SpaceError::SpaceMismatch.into());
    }
    Ok(sys.in_domain(&x.p)? && !x.gauge4().cmp_exact(&S::one()).is_lt())
}

/// A horoball height kept as its exact fourth power, so that the
/// multipliers `‖p‖⁻¹` (irrational in general) compose exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HoroHeight<S> {
    pub fourth: S,
}

impl<S: Scalar> HoroHeight<S> {
    pub fn from_height(h: &S) -> Result<Self, HypError> {
        if h.signum() <= 0 {
            return Err(HypError::NonPositiveHeight);
        }
        Ok(HoroHeight {
            fourth: h.square().square(),
        })
    }

    pub fn approx(&self) -> f64 {
        self.fourth.as_f64().powf(0.25)
    }
}

/// `ht_∞(ι B_p) = ‖p‖⁻¹ ht_∞(B_p)`.
pub fn horoball_invert_height<S: Scalar>(
    base: &IwasawaPoint<S>,
    h: &HoroHeight<S>,
) -> Result<HoroHeight<S>, HypError> {
    let g4 = base.gauge4();
    if g4.is_zero() {
        return Err(HypError::ZeroBase);
    }
    Ok(HoroHeight {
        fourth: h.fourth.try_div(&g4).expect("nonzero gauge"),
    })
}

// `ι(B_p)` at base `ι(p)`; the next normalisation translates it back into
// `K` without changing the height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoroStep {
    /// Base point in `K` before the inversion.
    pub base: IwasawaPoint<Rational>,
    pub digit: IwasawaPoint<Rational>,
    /// Height after the inversion.
    pub height: HoroHeight<Rational>,
    /// `(h_i / h_{i−1})⁴ = ‖base‖⁻⁴`.
    pub multiplier4: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoroTrace {
    pub start: IwasawaPoint<Rational>,
    pub h0: HoroHeight<Rational>,
    pub steps: Vec<HoroStep>,
    pub rad4: Rational,
}

impl HoroTrace {
    /// Every multiplier is at least `rad(K)⁻¹` (checked on fourth powers).
    pub fn certificate_holds(&self) -> bool {
        let bound = Rational::from_integer(1.into()) / &self.rad4;
        self.steps.iter().all(|s| s.multiplier4 >= bound)
    }

    /// `h_i ≥ rad(K)^{−i} h_0` for every step.
    pub fn lower_bounds_hold(&self) -> bool {
        let mut want = self.h0.fourth.clone();
        self.steps.iter().all(|s| {
            want = &want / &self.rad4;
            s.height.fourth >= want
        })
    }

    pub fn heights(&self) -> Vec<f64> {
        std::iter::once(self.h0.approx())
            .chain(self.steps.iter().map(|s| s.height.approx()))
            .collect()
    }

    /// Polyline SVG of `log h_i` against `i`.
    pub fn to_svg(&self) -> String {
        let hs: Vec<f64> = self.heights().iter().map(|h| h.ln()).collect();
        let (lo, hi) = hs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &h| (a.min(h), b.max(h)));
        let span = (hi - lo).max(1e-9);
        let w = 40.0 * (hs.len().max(2) - 1) as f64;
        let pts: Vec<String> = hs
            .iter()
            .enumerate()
            .map(|(i, h)| format!("{:.2},{:.2}", 40.0 * i as f64, 200.0 - 180.0 * (h - lo) / span))
            .collect();
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"210\">\
             <polyline fill=\"none\" stroke=\"black\" points=\"{}\"/></svg>",
            w + 10.0,
            pts.join(" ")
        )
    }
}

fn rational_point<S: Scalar>(x: &IwasawaPoint<S>) -> Result<IwasawaPoint<Rational>, HypError> {
    let coords = x
        .coords()
        .iter()
        .map(|c| c.to_rational().ok_or_else(|| HypError::NotRational(c.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IwasawaPoint::new(x.space(), coords)?)
}

/// Follow a horoball at `x ∈ K` through the Gauss map until the base
/// reaches `0`, recording heights after each inversion.
pub fn track_horoball<S: Scalar>(
    sys: &CfSystem,
    x: &IwasawaPoint<S>,
    h0: &Rational,
    max_iter: usize,
) -> Result<HoroTrace, HypError> {
    let start = rational_point(x)?;
    if !sys.in_domain(&start)? {
        return Err(HypError::NotInDomain(start.to_string()));
    }
    let h0 = HoroHeight::from_height(h0)?;
    let mut h = h0.clone();
    let mut steps = Vec::new();
    let mut state = start.clone();
    while !state.is_origin() {
        if steps.len() >= max_iter {
            return Err(HypError::Truncated(max_iter));
        }
        let next_h = horoball_invert_height(&state, &h)?;
        let multiplier4 = Rational::from_integer(1.into()) / state.gauge4();
        let (digit, next) = crate::cf::gauss_step(sys, &state)?;
        steps.push(HoroStep {
            base: state,
            digit,
            height: next_h.clone(),
            multiplier4,
        });
        h = next_h;
        state = next;
    }
    Ok(HoroTrace {
        start,
        h0,
        steps,
        rad4: sys.rad4(),
    })
}

/// `‖a‖ < rad(K)` and `‖b‖ > rad(K)^{−1/2}`, compared on fourth powers:
/// `‖a‖⁴ < rad⁴` and `‖b‖⁸ · rad⁴ > 1`.
pub fn is_widely_spaced<S: Scalar>(
    a: &Ext<IwasawaPoint<S>>,
    b: &Ext<IwasawaPoint<S>>,
    rad4: &Rational,
) -> bool {
    let r4 = S::from_rational(rad4);
    let a_ok = match a {
        Ext::Finite(p) => p.gauge4().cmp_exact(&r4).is_lt(),
        Ext::Infinity => false,
    };
    let b_ok = match b {
        Ext::Finite(p) => (p.gauge4().square() * r4).cmp_exact(&S::one()).is_gt(),
        Ext::Infinity => true,
    };
    a_ok && b_ok
}

/// Number of points whose horoball trace fails to terminate or to certify
/// the `rad(K)^{−i}` growth.
pub fn count_certificate_failures(
    sys: &CfSystem,
    points: &[IwasawaPoint<Rational>],
    max_iter: usize,
    exec: Exec,
) -> usize {
    let one = Rational::from_integer(1.into());
    exec.map_slice(points, |p| {
        track_horoball(sys, p, &one, max_iter)
            .map(|t| t.certificate_holds() && t.lower_bounds_hold())
            .unwrap_or(false)
    })
    .into_iter()
    .filter(|ok| !ok)
    .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn real(x: Rational) -> IwasawaPoint<Rational> {
        IwasawaPoint::vector(vec![x])
    }

    #[test]
    fn horoheight_laws() {
        let x = UpperHalfPoint::new(real(int(0)), int(1)).unwrap();
        assert_eq!(horoheight(&x), int(1));
        let y = UpperHalfPoint::new(real(rat(1, 3)), rat(2, 7)).unwrap();
        assert_eq!(horoheight(&y.translate(&real(int(5))).unwrap()), rat(2, 7));
        assert_eq!(horoheight(&y.dilate(&int(3)).unwrap()), rat(18, 7));
        assert!(UpperHalfPoint::new(real(int(0)), int(0)).is_err());
    }

    #[test]
    fn invert_heights() {
        let h = HoroHeight::from_height(&int(1)).unwrap();
        let out = horoball_invert_height(&real(rat(1, 2)), &h).unwrap();
        assert_eq!(out.fourth, int(16));
        assert!((out.approx() - 2.0).abs() < 1e-15);
        assert_eq!(horoball_invert_height(&real(int(1)), &h).unwrap(), h);
        assert_eq!(horoball_invert_height(&real(int(0)), &h), Err(HypError::ZeroBase));
    }

    #[test]
    fn tracking() {
        let sys = CfSystem::real_nearest();
        let t = track_horoball(&sys, &real(rat(1, 3)), &int(1), 100).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].multiplier4, int(81));
        assert!(t.certificate_holds() && t.lower_bounds_hold());
        let t = track_horoball(&sys, &real(int(0)), &int(1), 100).unwrap();
        assert!(t.steps.is_empty());
        let t = track_horoball(&sys, &real(rat(355, 1130)), &int(1), 100).unwrap();
        let hs = t.heights();
        assert!(hs.windows(2).all(|w| w[1] >= 2.0 * w[0] - 1e-12), "{hs:?}");

        let sys = CfSystem::complex();
        let z = IwasawaPoint::vector(vec![rat(1, 3), rat(1, 5)]);
        let t = track_horoball(&sys, &z, &int(1), 100).unwrap();
        assert!(!t.steps.is_empty() && t.certificate_holds());

        let irr = IwasawaPoint::vector(vec![crate::scalar::QuadExt::sqrt_int(2).unwrap()
            - crate::scalar::QuadExt::from(int(1))]);
        assert!(matches!(
            track_horoball(&CfSystem::real_nearest(), &irr, &int(1), 10),
            Err(HypError::NotRational(_))
        ));
        assert!(matches!(
            track_horoball(&CfSystem::real_nearest(), &real(int(3)), &int(1), 10),
            Err(HypError::NotInDomain(_))
        ));
    }

    #[test]
    fn heisenberg_tracking() {
        let sys = CfSystem::heisenberg();
        let p = IwasawaPoint::heisenberg(rat(1, 3), rat(-1, 4), rat(2, 5));
        let t = track_horoball(&sys, &p, &int(1), 1000).unwrap();
        assert!(t.certificate_holds() && t.lower_bounds_hold());
    }

    #[test]
    fn widely_spaced() {
        let r4 = rat(1, 16);
        let f = |x| Ext::Finite(real(x));
        assert!(is_widely_spaced(&f(int(0)), &Ext::Infinity, &r4));
        assert!(is_widely_spaced(&f(rat(1, 4)), &f(rat(3, 2)), &r4));
        assert!(!is_widely_spaced(&f(rat(1, 4)), &f(rat(5, 4)), &r4));
        assert!(!is_widely_spaced(&Ext::Infinity, &f(int(5)), &r4));
    }

    #[test]
    fn goalposts() {
        let sys = CfSystem::real_nearest();
        let p = |x, s| UpperHalfPoint::new(real(x), s).unwrap();
        assert!(in_goalpost_region(&p(int(0), int(2)), &sys).unwrap());
        assert!(!in_goalpost_region(&p(int(0), rat(1, 2)), &sys).unwrap());
        assert!(!in_goalpost_region(&p(int(3), int(100)), &sys).unwrap());
    }

    #[test]
    fn extended_inversion_basics() {
        let sys = CfSystem::real_nearest();
        let x = UpperHalfPoint::new(real(int(0)), int(1)).unwrap();
        assert_eq!(extended_invert(&x, &sys.inversion).unwrap(), x);
        // Poincaré: x + iy ↦ −1/(x + iy) with s = y²
        let x = UpperHalfPoint::new(real(rat(1, 2)), rat(1, 4)).unwrap();
        let y = extended_invert(&x, &sys.inversion).unwrap();
        assert_eq!(y.p, real(int(-1)));
        assert_eq!(y.s, int(1));
        let h = UpperHalfPoint::new(IwasawaPoint::heisenberg(int(0), int(0), int(0)), int(1)).unwrap();
        assert_eq!(extended_invert(&h, &Inversion::Koranyi).unwrap(), h);
    }

    fn exact_point(space: Space, coords: Vec<i64>, s: i64) -> UpperHalfPoint<Rational> {
        let p = IwasawaPoint::new(space, coords.iter().map(|&c| rat(c, 7)).collect()).unwrap();
        UpperHalfPoint::new(p, rat(s, 5)).unwrap()
    }

    proptest! {
        #[test]
        fn inversion_is_involutive_and_inverts_gauge(
            c in proptest::collection::vec(-30i64..30, 3),
            s in 1i64..40,
            heis in any::<bool>(),
        ) {
            let (x, inv) = if heis {
                (exact_point(Space::Heisenberg, c.clone(), s), Inversion::Koranyi)
            } else {
                (exact_point(Space::Vector(3), c.clone(), s), CfSystem::r3().inversion)
            };
            let y = extended_invert(&x, &inv).unwrap();
            prop_assert_eq!(extended_invert(&y, &inv).unwrap(), x.clone());
            prop_assert_eq!(y.gauge4() * x.gauge4(), int(1));
        }

        #[test]
        fn boundary_limit_matches_koranyi(
            c in proptest::collection::vec(-30i64..30, 3),
        ) {
            prop_assume!(c.iter().any(|&v| v != 0));
            let p = IwasawaPoint::heisenberg(rat(c[0], 7), rat(c[1], 7), rat(c[2], 7)).to_f64();
            let x = UpperHalfPoint::new(p.clone(), 1e-12).unwrap();
            let y = extended_invert(&x, &Inversion::Koranyi).unwrap();
            let want = p.invert(&Inversion::Koranyi).unwrap();
            for (a, b) in y.p.coords().iter().zip(want.coords()) {
                prop_assert!((a - b).abs() < 1e-6, "{} vs {}", a, b);
            }
            prop_assert!(y.s < 1e-6);

            let q = IwasawaPoint::vector(vec![c[0] as f64 / 7.0, c[1] as f64 / 7.0]);
            let sys = CfSystem::complex();
            let x = UpperHalfPoint::new(q.clone(), 1e-12).unwrap();
            let y = extended_invert(&x, &sys.inversion).unwrap();
            if !q.is_origin() {
                let want = q.invert(&sys.inversion).unwrap();
                for (a, b) in y.p.coords().iter().zip(want.coords()) {
                    prop_assert!((a - b).abs() < 1e-6);
                }
            }
        }

        #[test]
        fn translation_and_dilation_laws(
            c in proptest::collection::vec(-30i64..30, 3),
            s in 1i64..40,
            r in 1i64..9,
        ) {
            let x = exact_point(Space::Heisenberg, c.clone(), s);
            let g = IwasawaPoint::heisenberg(int(c[2]), int(c[0]), int(c[1]));
            prop_assert_eq!(horoheight(&x.translate(&g).unwrap()), x.s.clone());
            let r = rat(r, 3);
            prop_assert_eq!(horoheight(&x.dilate(&r).unwrap()), x.s.clone() * r.clone() * r);
        }
    }
}
