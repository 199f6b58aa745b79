//! Inversion spaces: the vector models `R^m` and the Heisenberg group
//! `C × R`, with gauge norms, Cygan distance, inversions, lattices,
//! fundamental domains and rounding.
//!
//! Gauge values are handled as exact fourth powers (`gauge4`) so that all
//! comparisons stay rational; roots are only taken for display.

mod lattice;

pub use lattice::{rad4_box, CfSystem, Domain, Lattice, ProperReport};

use std::fmt;

use thiserror::Error;

use crate::clifford::CliffordElement;
use crate::scalar::{int, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("inversion of the origin")]
    InversionOfZero,
    #[error("points live in different spaces")]
    SpaceMismatch,
    #[error("dilation factor must be positive")]
    NonPositiveFactor,
    #[error("expected {expected} coordinates, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("{0}")]
    Unsupported(String),
}

/// The ambient space `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// `R^m`, `1 ≤ m ≤ 4`.
    Vector(usize),
    /// `C × R` with coordinates `(x, y, t)`, `z = x + iy`.
    Heisenberg,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::Vector(m) => m,
            Space::Heisenberg => 3,
        }
    }
}

/// The inversion `ι`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Inversion {
    /// `ι(x) = σ(x)/‖x‖²` on `R^m`, `σ` flipping the coordinates marked −1.
    Signs(Vec<i8>),
    /// Koranyi inversion of the Heisenberg group.
    Koranyi,
}

impl Inversion {
    /// Orientation-preserving sign patterns (an odd number of flips,
    /// composed with the orientation-reversing `x ↦ x/‖x‖²`) admit a
    /// Clifford matrix.
    pub fn is_orientation_preserving(&self) -> bool {
        match self {
            Inversion::Signs(s) => s.iter().filter(|&&x| x < 0).count() % 2 == 1,
            Inversion::Koranyi => true,
        }
    }
}

/// A point of `X`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IwasawaPoint<S> {
    space: Space,
    coords: Vec<S>,
}

impl<S: Scalar> IwasawaPoint<S> {
    pub fn new(space: Space, coords: Vec<S>) -> Result<Self, SpaceError> {
        if coords.len() != space.dim() {
            return Err(SpaceError::WrongArity {
                expected: space.dim(),
                got: coords.len(),
            });
        }
        Ok(IwasawaPoint { space, coords })
    }

    pub fn vector(coords: Vec<S>) -> Self {
        let m = coords.len();
        IwasawaPoint {
            space: Space::Vector(m),
            coords,
        }
    }

    pub fn heisenberg(x: S, y: S, t: S) -> Self {
        IwasawaPoint {
            space: Space::Heisenberg,
            coords: vec![x, y, t],
        }
    }

    pub fn origin(space: Space) -> Self {
        IwasawaPoint {
            space,
            coords: vec![S::zero(); space.dim()],
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn zsq(&self) -> S {
        self.coords[0].square() + self.coords[1].square()
    }

    /// `‖p‖²` for vector models (the Euclidean norm squared).
    pub fn norm_sq(&self) -> S {
        self.coords
            .iter()
            .fold(S::zero(), |acc, c| acc + c.square())
    }

    /// `‖p‖⁴`: `(Σ x²)²` on `R^m`, `|z|⁴ + t²` on the Heisenberg group.
    pub fn gauge4(&self) -> S {
        match self.space {
            Space::Vector(_) => self.norm_sq().square(),
            Space::Heisenberg => self.zsq().square() + self.coords[2].square(),
        }
    }

    /// The gauge norm itself, as a float.
    pub fn gauge(&self) -> f64 {
        self.gauge4().as_f64().max(0.0).powf(0.25)
    }

    /// Group product: vector addition on `R^m`,
    /// `(z,t)(z′,t′) = (z+z′, t+t′+2 Im(z̄ z′))` on the Heisenberg group.
    pub fn mul(&self, q: &Self) -> Result<Self, SpaceError> {
        if self.space != q.space {
            return Err(SpaceError::SpaceMismatch);
        }
        let coords = match self.space {
            Space::Vector(_) => self
                .coords
                .iter()
                .zip(&q.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            Space::Heisenberg => {
                let (x, y, t) = (&self.coords[0], &self.coords[1], &self.coords[2]);
                let (x2, y2, t2) = (&q.coords[0], &q.coords[1], &q.coords[2]);
                // Im(z̄ z′) = x y′ − y x′
                let im = x.clone() * y2.clone() - y.clone() * x2.clone();
                vec![
                    x.clone() + x2.clone(),
                    y.clone() + y2.clone(),
                    t.clone() + t2.clone() + S::from_int(2) * im,
                ]
            }
        };
        Ok(IwasawaPoint {
            space: self.space,
            coords,
        })
    }

    /// Group inverse (`−p` in both models).
    pub fn inv(&self) -> Self {
        IwasawaPoint {
            space: self.space,
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// `p⁻¹ * q`.
    pub fn left_diff(&self, q: &Self) -> Result<Self, SpaceError> {
        self.inv().mul(q)
    }

    /// `d(p, q)⁴ = ‖p⁻¹ q‖⁴`.
    pub fn cygan4(&self, q: &Self) -> Result<S, SpaceError> {
        Ok(self.left_diff(q)?.gauge4())
    }

    pub fn cygan(&self, q: &Self) -> Result<f64, SpaceError> {
        Ok(self.cygan4(q)?.as_f64().max(0.0).powf(0.25))
    }

    /// `δ_r`: `x ↦ r x` on `R^m`, `(z, t) ↦ (r z, r² t)` on the Heisenberg group.
    pub fn dilate(&self, r: &S) -> Result<Self, SpaceError> {
        if r.signum() <= 0 {
            return Err(SpaceError::NonPositiveFactor);
        }
        let mut coords: Vec<S> = self.coords.iter().map(|c| c.clone() * r.clone()).collect();
        if self.space == Space::Heisenberg {
            coords[2] = coords[2].clone() * r.clone();
        }
        Ok(IwasawaPoint {
            space: self.space,
            coords,
        })
    }

    pub fn invert(&self, inv: &Inversion) -> Result<Self, SpaceError> {
        if self.is_origin() {
            return Err(SpaceError::InversionOfZero);
        }
        match (self.space, inv) {
            (Space::Vector(m), Inversion::Signs(sig)) if sig.len() == m => {
                let n2 = self.norm_sq();
                let coords = self
                    .coords
                    .iter()
                    .zip(sig)
                    .map(|(c, &s)| {
                        let c = if s < 0 { -c.clone() } else { c.clone() };
                        c.try_div(&n2).expect("nonzero norm")
                    })
                    .collect();
                Ok(IwasawaPoint {
                    space: self.space,
                    coords,
                })
            }
            (Space::Heisenberg, Inversion::Koranyi) => {
                // ι(z, t) = (−z/(|z|² + i t), −t/(|z|⁴ + t²))
                let (x, y, t) = (&self.coords[0], &self.coords[1], &self.coords[2]);
                let r = self.zsq();
                let n = self.gauge4();
                let re = x.clone() * r.clone() + y.clone() * t.clone();
                let im = y.clone() * r - x.clone() * t.clone();
                Ok(IwasawaPoint::heisenberg(
                    (-re).try_div(&n).expect("nonzero gauge"),
                    (-im).try_div(&n).expect("nonzero gauge"),
                    (-t.clone()).try_div(&n).expect("nonzero gauge"),
                ))
            }
            _ => Err(SpaceError::Unsupported(
                "inversion does not match the space".into(),
            )),
        }
    }

    /// The vector `x0 + x1 e1 + …` of `A_{m−1}` for a point of `R^m`.
    pub fn to_clifford(&self) -> Option<CliffordElement<S>> {
        match self.space {
            Space::Vector(m) => Some(CliffordElement::vector(m - 1, &self.coords)),
            Space::Heisenberg => None,
        }
    }

    pub fn from_clifford(e: &CliffordElement<S>) -> Self {
        IwasawaPoint::vector(e.vector_coords())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> IwasawaPoint<T> {
        IwasawaPoint {
            space: self.space,
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> IwasawaPoint<f64> {
        self.map(|c| c.as_f64())
    }

    /// Compact digit syntax: `3`, `1-2i`, `3i+3j`, `1/2+1/2e1+1/2e2+1/2e3`,
    /// `(1+i, 2)` for the Heisenberg group. Parses back with the element
    /// parser.
    pub fn to_digit_string(&self) -> String {
        match self.space {
            Space::Vector(m) => {
                let names: &[&str] = if m <= 3 {
                    &["", "i", "j"]
                } else {
                    &["", "e1", "e2", "e3"]
                };
                fmt_linear(&self.coords, names)
            }
            Space::Heisenberg => format!(
                "({}, {})",
                fmt_linear(&self.coords[..2], &["", "i"]),
                self.coords[2]
            ),
        }
    }
}

/// `c0 + c1 u1 + c2 u2 …` with unit names, compact, `0` when empty.
pub fn fmt_linear<S: Scalar>(coords: &[S], names: &[&str]) -> String {
    let mut out = String::new();
    for (c, name) in coords.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let neg = c.signum() < 0;
        let mag = if neg { -c.clone() } else { c.clone() };
        let mut s = mag.to_string();
        if s.chars().skip(1).any(|ch| ch == '+' || ch == '-') {
            s = format!("({s})");
        }
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if name.is_empty() {
            out.push_str(&s);
        } else {
            if s != "1" {
                out.push_str(&s);
            }
            out.push_str(name);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl<S: Scalar> fmt::Display for IwasawaPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The real-line inversion identity `|x||y||1/x − 1/y| = |x − y|`, squared.
pub fn real_inversion_identity_holds<S: Scalar>(x: &S, y: &S) -> bool {
    let ix = S::one().try_div(x).expect("nonzero");
    let iy = S::one().try_div(y).expect("nonzero");
    let lhs = x.square() * y.square() * (ix - iy).square();
    let rhs = (x.clone() - y.clone()).square();
    lhs == rhs
}

pub(crate) fn half<S: Scalar>() -> S {
    S::from_rational(&(int(1) / int(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, QuadExt, Rational};
    use proptest::prelude::*;

    type P = IwasawaPoint<Rational>;

    fn r3() -> Inversion {
        Inversion::Signs(vec![-1, 1, 1])
    }

    #[test]
    fn gauge_examples() {
        assert_eq!(P::vector(vec![rat(1, 1), rat(0, 1), rat(0, 1)]).gauge4(), rat(1, 1));
        let h = P::heisenberg(rat(0, 1), rat(0, 1), rat(4, 1));
        assert_eq!(h.gauge4(), rat(16, 1));
        assert!((h.gauge() - 2.0).abs() < 1e-15);
        let h = P::heisenberg(rat(1, 1), rat(0, 1), rat(1, 1));
        assert!((h.gauge() - 2f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn heisenberg_group_law() {
        let p = P::heisenberg(rat(1, 1), rat(0, 1), rat(0, 1));
        let q = P::heisenberg(rat(0, 1), rat(1, 1), rat(0, 1));
        assert_eq!(p.mul(&q).unwrap(), P::heisenberg(rat(1, 1), rat(1, 1), rat(2, 1)));
        let z = P::heisenberg(rat(2, 3), rat(-1, 5), rat(7, 2));
        assert_eq!(z.mul(&z.inv()).unwrap(), P::origin(Space::Heisenberg));
        assert_eq!(z.mul(&P::origin(Space::Heisenberg)).unwrap(), z);
        assert_eq!(z.cygan4(&z).unwrap(), rat(0, 1));
        assert_eq!(p.mul(&P::vector(vec![rat(1, 1)])), Err(SpaceError::SpaceMismatch));
    }

    #[test]
    fn r3_inversion_examples() {
        let p = P::vector(vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(p.invert(&r3()).unwrap(), P::vector(vec![rat(-1, 1), rat(0, 1), rat(0, 1)]));
        let p = P::vector(vec![rat(1, 2), rat(0, 1), rat(0, 1)]);
        assert_eq!(p.invert(&r3()).unwrap(), P::vector(vec![rat(-2, 1), rat(0, 1), rat(0, 1)]));
        assert_eq!(
            P::origin(Space::Vector(3)).invert(&r3()),
            Err(SpaceError::InversionOfZero)
        );
    }

    #[test]
    fn dilation() {
        let p = P::heisenberg(rat(1, 1), rat(0, 1), rat(1, 1));
        assert_eq!(p.dilate(&rat(1, 1)).unwrap(), p);
        assert_eq!(p.dilate(&rat(2, 1)).unwrap(), P::heisenberg(rat(2, 1), rat(0, 1), rat(4, 1)));
        assert_eq!(p.dilate(&rat(0, 1)), Err(SpaceError::NonPositiveFactor));
    }

    #[test]
    fn digit_strings_parse_back() {
        use crate::clifford::parse_element;
        for coords in [
            vec![rat(1, 1), rat(-2, 1)],
            vec![rat(0, 1), rat(3, 1), rat(3, 1)],
            vec![rat(1, 2), rat(1, 2), rat(1, 2), rat(-1, 2)],
        ] {
            let p = P::vector(coords.clone());
            let s = p.to_digit_string();
            let e = parse_element(&s, coords.len() - 1).unwrap();
            let back: Vec<Rational> = e
                .vector_coords()
                .iter()
                .map(|q| q.to_rational().unwrap())
                .collect();
            assert_eq!(back, coords, "{s}");
        }
        assert_eq!(P::vector(vec![rat(0, 1), rat(-2, 1)]).to_digit_string(), "-2i");
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..9).prop_map(|(a, b)| rat(a, b))
    }

    fn arb_point(space: Space) -> impl Strategy<Value = P> {
        prop::collection::vec(arb_rat(), space.dim())
            .prop_map(move |c| P::new(space, c).unwrap())
    }

    fn models() -> Vec<(Space, Inversion)> {
        vec![
            (Space::Vector(1), Inversion::Signs(vec![-1])),
            (Space::Vector(2), Inversion::Signs(vec![1, -1])),
            (Space::Vector(3), r3()),
            (Space::Vector(4), Inversion::Signs(vec![-1, 1, 1, 1])),
            (Space::Heisenberg, Inversion::Koranyi),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn inversion_identities((inv, p, q) in (0usize..5).prop_flat_map(|idx| {
            let (space, inv) = models()[idx].clone();
            (Just(inv), arb_point(space), arb_point(space))
        })) {
            prop_assume!(!p.is_origin() && !q.is_origin());
            let ip = p.invert(&inv).unwrap();
            let iq = q.invert(&inv).unwrap();
            // ‖ιp‖ = ‖p‖⁻¹
            prop_assert_eq!(ip.gauge4() * p.gauge4(), rat(1, 1));
            // ι∘ι = id
            prop_assert_eq!(ip.invert(&inv).unwrap(), p.clone());
            // d(ιp, ιq)⁴ ‖p‖⁴ ‖q‖⁴ = d(p, q)⁴
            prop_assert_eq!(ip.cygan4(&iq).unwrap() * p.gauge4() * q.gauge4(), p.cygan4(&q).unwrap());
        }
    }

    proptest! {
        #[test]
        fn cygan_left_invariant(g in arb_point(Space::Heisenberg), p in arb_point(Space::Heisenberg),
                                q in arb_point(Space::Heisenberg)) {
            let gp = g.mul(&p).unwrap();
            let gq = g.mul(&q).unwrap();
            prop_assert_eq!(gp.cygan4(&gq).unwrap(), p.cygan4(&q).unwrap());
        }

        #[test]
        fn dilation_scales_gauge(p in arb_point(Space::Heisenberg), r in (1i64..9, 1i64..9)) {
            let r = rat(r.0, r.1);
            let d = p.dilate(&r).unwrap();
            prop_assert_eq!(d.gauge4(), p.gauge4() * r.clone() * r.clone() * r.clone() * r);
        }

        #[test]
        fn real_identity(x in arb_rat(), y in arb_rat()) {
            prop_assume!(x != rat(0, 1) && y != rat(0, 1));
            prop_assert!(real_inversion_identity_holds(&x, &y));
        }
    }

    #[test]
    fn surd_coordinates_stay_in_field() {
        let s3 = QuadExt::sqrt_int(3).unwrap();
        let c = (s3 - QuadExt::from(rat(1, 1))) * QuadExt::from(rat(1, 4));
        let p = IwasawaPoint::vector(vec![QuadExt::from(rat(0, 1)), c.clone(), c]);
        let ip = p.invert(&r3()).unwrap();
        assert_eq!(ip.invert(&r3()).unwrap(), p);
    }
}
