use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::{half, Inversion, IwasawaPoint, Space, SpaceError};
use crate::clifford::{CliffordElement, CliffordMatrix};
use crate::scalar::{int, rat, Rational, Scalar};

/// Digit lattices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lattice {
    /// `(step·Z)^m` in `R^m`.
    Integer { m: usize, step: u32 },
    /// `Z[i√d] = Z + i√d Z` in `R²`.
    GaussianImaginary { d: u64 },
    /// Hurwitz integers `Z⁴ ∪ (Z⁴ + h)`, `h = (1/2, 1/2, 1/2, 1/2)`.
    Hurwitz,
    /// `Z[i] × Z` inside the Heisenberg group.
    HeisenbergInteger,
}

/// Fundamental domains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Domain {
    /// `Π [lo_k, lo_k + 1)` in units of the lattice basis.
    Box { lo: Vec<Rational> },
    /// Voronoi cell of the origin (24-cell for the Hurwitz lattice).
    Voronoi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProperReport {
    pub rad4: Rational,
    pub rad: f64,
    pub proper: bool,
    pub warnings: Vec<String>,
}

/// `rad(K)⁴` of a box `Π [lo, lo+1)` whose axes have squared lengths `steps2`.
pub fn rad4_box(lo: &[Rational], steps2: &[Rational]) -> Rational {
    let r2: Rational = lo
        .iter()
        .zip(steps2)
        .map(|(l, s)| {
            let hi = l + int(1);
            let m = if l * l > &hi * &hi { l * l } else { &hi * &hi };
            m * s
        })
        .sum();
    &r2 * &r2
}

/// The relevant vectors of the Hurwitz lattice: its 24 units.
fn hurwitz_units() -> Vec<[Rational; 4]> {
    let mut out = Vec::with_capacity(24);
    for k in 0..4 {
        for s in [1, -1] {
            let mut v: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
            v[k] = int(s);
            out.push(v);
        }
    }
    for mask in 0..16 {
        out.push(std::array::from_fn(|k| {
            if mask & (1 << k) != 0 {
                rat(-1, 2)
            } else {
                rat(1, 2)
            }
        }));
    }
    out
}

/// `rad(K)²` of the Hurwitz Voronoi cell by enumerating its vertices on the
/// `(1/4)Z⁴` grid: points of the closed cell where at least four of the 24
/// facet inequalities `2⟨x, λ⟩ ≤ ‖λ‖² = 1` are tight.
pub fn hurwitz_cell_rad2() -> Rational {
    static R: OnceLock<Rational> = OnceLock::new();
    R.get_or_init(|| {
        let units = hurwitz_units();
        let grid: Vec<Rational> = (-4..=4).map(|k| rat(k, 4)).collect();
        let mut best = Rational::zero();
        for a in &grid {
            for b in &grid {
                for c in &grid {
                    for d in &grid {
                        let x = [a, b, c, d];
                        let mut tight = 0;
                        let mut inside = true;
                        for u in &units {
                            let dot: Rational =
                                x.iter().zip(u).map(|(p, q)| *p * q).sum::<Rational>() * int(2);
                            if dot > int(1) {
                                inside = false;
                                break;
                            }
                            if dot == int(1) {
                                tight += 1;
                            }
                        }
                        if inside && tight >= 4 {
                            let n2: Rational = x.iter().map(|p| *p * *p).sum();
                            if n2 > best {
                                best = n2;
                            }
                        }
                    }
                }
            }
        }
        best
    })
    .clone()
}

/// A complete CF system `(X, Z, ι, K)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CfSystem {
    pub name: String,
    pub space: Space,
    pub lattice: Lattice,
    pub domain: Domain,
    pub inversion: Inversion,
}

impl CfSystem {
    /// Nearest-integer CF: `ι(x) = −1/x`, `K = [−1/2, 1/2)`.
    pub fn real_nearest() -> Self {
        CfSystem {
            name: "real".into(),
            space: Space::Vector(1),
            lattice: Lattice::Integer { m: 1, step: 1 },
            domain: Domain::Box { lo: vec![rat(-1, 2)] },
            inversion: Inversion::Signs(vec![-1]),
        }
    }

    /// Regular CF: `ι(x) = 1/x`, `K = [0, 1)`.
    pub fn real_regular() -> Self {
        CfSystem {
            name: "real-regular".into(),
            space: Space::Vector(1),
            lattice: Lattice::Integer { m: 1, step: 1 },
            domain: Domain::Box { lo: vec![Rational::zero()] },
            inversion: Inversion::Signs(vec![1]),
        }
    }

    /// Even CF: digits in `2Z`, `K = [−1, 1)` — not proper.
    pub fn real_even() -> Self {
        CfSystem {
            name: "real-even".into(),
            space: Space::Vector(1),
            lattice: Lattice::Integer { m: 1, step: 2 },
            domain: Domain::Box { lo: vec![rat(-1, 2)] },
            inversion: Inversion::Signs(vec![1]),
        }
    }

    /// Hurwitz complex CF: `ι(z) = 1/z`, digits `Z[i]`, `K` the centred square.
    pub fn complex() -> Self {
        Self::complex_zid(1)
    }

    /// Complex CFs over `Z[i√d]` with the centred rectangle (proper iff `d ≤ 2`).
    pub fn complex_zid(d: u64) -> Self {
        CfSystem {
            name: if d == 1 {
                "complex".into()
            } else {
                format!("complex-zid{d}")
            },
            space: Space::Vector(2),
            lattice: if d == 1 {
                Lattice::Integer { m: 2, step: 1 }
            } else {
                Lattice::GaussianImaginary { d }
            },
            domain: Domain::Box {
                lo: vec![rat(-1, 2), rat(-1, 2)],
            },
            inversion: Inversion::Signs(vec![1, -1]),
        }
    }

    /// `R³` with `ι(x, y, z) = (−x, y, z)/‖·‖²`, digits `Z³`, `K` the centred cube.
    pub fn r3() -> Self {
        CfSystem {
            name: "r3".into(),
            space: Space::Vector(3),
            lattice: Lattice::Integer { m: 3, step: 1 },
            domain: Domain::Box {
                lo: vec![rat(-1, 2); 3],
            },
            inversion: Inversion::Signs(vec![-1, 1, 1]),
        }
    }

    /// `R⁴` with `ι(v) = −1/v`, Hurwitz digits, Voronoi domain.
    pub fn r4_hurwitz() -> Self {
        CfSystem {
            name: "r4-hurwitz".into(),
            space: Space::Vector(4),
            lattice: Lattice::Hurwitz,
            domain: Domain::Voronoi,
            inversion: Inversion::Signs(vec![-1, 1, 1, 1]),
        }
    }

    /// Heisenberg CF with the Koranyi inversion, digits `Z[i] × Z` and the
    /// box `[−1/2, 1/2)³` (a configuration choice, reported as such).
    pub fn heisenberg() -> Self {
        CfSystem {
            name: "heisenberg".into(),
            space: Space::Heisenberg,
            lattice: Lattice::HeisenbergInteger,
            domain: Domain::Box {
                lo: vec![rat(-1, 2); 3],
            },
            inversion: Inversion::Koranyi,
        }
    }

    /// Look up a preset by its CLI name.
    pub fn by_name(name: &str, imaginary_d: Option<u64>) -> Option<Self> {
        Some(match name {
            "real" | "real-nearest" => Self::real_nearest(),
            "real-regular" => Self::real_regular(),
            "real-even" => Self::real_even(),
            "complex" => Self::complex_zid(imaginary_d.unwrap_or(1)),
            "r3" => Self::r3(),
            "r4-hurwitz" | "r4" => Self::r4_hurwitz(),
            "heisenberg" => Self::heisenberg(),
            _ => return None,
        })
    }

    fn steps2(&self) -> Vec<Rational> {
        match &self.lattice {
            Lattice::Integer { m, step } => vec![int(*step as i64 * *step as i64); *m],
            Lattice::GaussianImaginary { d } => vec![int(1), int(*d as i64)],
            Lattice::Hurwitz | Lattice::HeisenbergInteger => vec![int(1); 4],
        }
    }

    /// `rad(K)⁴` exactly.
    pub fn rad4(&self) -> Rational {
        match (&self.domain, &self.lattice) {
            (Domain::Voronoi, _) => {
                let r2 = hurwitz_cell_rad2();
                &r2 * &r2
            }
            (Domain::Box { lo }, Lattice::HeisenbergInteger) => {
                let m = |l: &Rational| {
                    let hi = l + int(1);
                    if l * l > &hi * &hi {
                        l * l
                    } else {
                        &hi * &hi
                    }
                };
                let z2 = m(&lo[0]) + m(&lo[1]);
                &z2 * &z2 + m(&lo[2])
            }
            (Domain::Box { lo }, _) => rad4_box(lo, &self.steps2()),
        }
    }

    pub fn proper_report(&self) -> ProperReport {
        let rad4 = self.rad4();
        let proper = rad4 < Rational::one();
        let mut warnings = Vec::new();
        if !proper {
            warnings.push(format!("rad(K) = {:.6} ≥ 1: the system is not proper", rad4.as_f64().powf(0.25)));
        }
        if self.space == Space::Heisenberg {
            warnings.push(
                "Heisenberg lattice/domain pair is a configuration choice (Z[i]×Z with the unit box)"
                    .into(),
            );
        }
        ProperReport {
            rad: rad4.as_f64().powf(0.25),
            rad4,
            proper,
            warnings,
        }
    }

    pub fn is_proper(&self) -> bool {
        self.rad4() < Rational::one()
    }

    pub fn invert<S: Scalar>(&self, p: &IwasawaPoint<S>) -> Result<IwasawaPoint<S>, SpaceError> {
        p.invert(&self.inversion)
    }

    fn scale_of<S: Scalar>(&self, axis: usize) -> Result<S, SpaceError> {
        match (&self.lattice, axis) {
            (Lattice::Integer { step, .. }, _) => Ok(S::from_int(*step as i64)),
            (Lattice::GaussianImaginary { d }, 1) => S::sqrt_of(&int(*d as i64)).ok_or_else(|| {
                SpaceError::Unsupported(format!("√{d} is not representable in this scalar type"))
            }),
            _ => Ok(S::one()),
        }
    }

    /// The lattice element `[p]_K` with `[p]⁻¹ p ∈ K`.
    pub fn round<S: Scalar>(&self, p: &IwasawaPoint<S>) -> Result<IwasawaPoint<S>, SpaceError> {
        if p.space() != self.space {
            return Err(SpaceError::SpaceMismatch);
        }
        let x = p.coords();
        match (&self.lattice, &self.domain) {
            (Lattice::Hurwitz, _) => {
                let a: Vec<S> = x.iter().map(|c| S::from_bigint(&c.round_half_up())).collect();
                let h = half::<S>();
                let b: Vec<S> = x
                    .iter()
                    .map(|c| {
                        S::from_bigint(&(c.clone() - h.clone()).round_half_up()) + h.clone()
                    })
                    .collect();
                let da = dist2(x, &a);
                let db = dist2(x, &b);
                Ok(IwasawaPoint::vector(if da.cmp_exact(&db).is_le() { a } else { b }))
            }
            (Lattice::HeisenbergInteger, Domain::Box { lo }) => {
                let lo: Vec<S> = lo.iter().map(S::from_rational).collect();
                let mx = S::from_bigint(&(x[0].clone() - lo[0].clone()).floor_int());
                let my = S::from_bigint(&(x[1].clone() - lo[1].clone()).floor_int());
                let im = mx.clone() * x[1].clone() - my.clone() * x[0].clone();
                let t = x[2].clone() - S::from_int(2) * im;
                let n = S::from_bigint(&(t - lo[2].clone()).floor_int());
                Ok(IwasawaPoint::heisenberg(mx, my, n))
            }
            (_, Domain::Box { lo }) => {
                let mut g = Vec::with_capacity(x.len());
                for (k, c) in x.iter().enumerate() {
                    let s: S = self.scale_of(k)?;
                    let u = c.try_div(&s).expect("nonzero step") - S::from_rational(&lo[k]);
                    g.push(S::from_bigint(&u.floor_int()) * s);
                }
                Ok(IwasawaPoint::vector(g))
            }
            _ => Err(SpaceError::Unsupported("lattice/domain pair".into())),
        }
    }

    /// Exact membership in `K`.
    pub fn in_domain<S: Scalar>(&self, p: &IwasawaPoint<S>) -> Result<bool, SpaceError> {
        let x = p.coords();
        match &self.domain {
            Domain::Voronoi => {
                for u in hurwitz_units() {
                    let dot = x
                        .iter()
                        .zip(&u)
                        .fold(S::zero(), |acc, (c, q)| acc + c.clone() * S::from_rational(q));
                    if (S::from_int(2) * dot).cmp_exact(&S::one()).is_gt() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Domain::Box { lo } => {
                for (k, c) in x.iter().enumerate() {
                    let s: S = if self.space == Space::Heisenberg {
                        S::one()
                    } else {
                        self.scale_of(k)?
                    };
                    let u = c.try_div(&s).expect("nonzero step") - S::from_rational(&lo[k]);
                    if u.signum() < 0 || u.cmp_exact(&S::one()).is_ge() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Whether `g` is a lattice element.
    pub fn contains<S: Scalar>(&self, g: &IwasawaPoint<S>) -> bool {
        let is_int = |c: &S| S::from_bigint(&c.floor_int()) == *c;
        let x = g.coords();
        match &self.lattice {
            Lattice::Integer { step, .. } => x.iter().all(|c| {
                c.try_div(&S::from_int(*step as i64)).map(|u| is_int(&u)).unwrap_or(false)
            }),
            Lattice::GaussianImaginary { .. } => {
                is_int(&x[0])
                    && self
                        .scale_of::<S>(1)
                        .ok()
                        .and_then(|s| x[1].try_div(&s).ok())
                        .is_some_and(|u| is_int(&u))
            }
            Lattice::Hurwitz => {
                x.iter().all(is_int) || x.iter().all(|c| is_int(&(c.clone() - half::<S>())))
            }
            Lattice::HeisenbergInteger => x.iter().all(is_int),
        }
    }

    /// `g * p` (left translation by a lattice element).
    pub fn act<S: Scalar>(
        &self,
        g: &IwasawaPoint<S>,
        p: &IwasawaPoint<S>,
    ) -> Result<IwasawaPoint<S>, SpaceError> {
        g.mul(p)
    }

    /// `g⁻¹ * p`.
    pub fn unact<S: Scalar>(
        &self,
        g: &IwasawaPoint<S>,
        p: &IwasawaPoint<S>,
    ) -> Result<IwasawaPoint<S>, SpaceError> {
        g.left_diff(p)
    }

    /// Clifford matrix of `ι` (vector models with orientation-preserving ι).
    ///
    /// `S = [[0, −1], [1, 0]]` realises the pattern `(−, +, …, +)`; every other
    /// admissible pattern differs by an even number of flips, realised in
    /// pairs by `diag(e_k, −e_k)` (flip `x0` and `xk`) and
    /// `diag(e_j e_k, e_j e_k)` (flip `xj` and `xk`).
    pub fn iota_matrix<S: Scalar>(&self) -> Option<CliffordMatrix<S>> {
        let (Space::Vector(m), Inversion::Signs(sig)) = (self.space, &self.inversion) else {
            return None;
        };
        if !self.inversion.is_orientation_preserving() {
            return None;
        }
        let n = m - 1;
        let flips: Vec<usize> = (0..m)
            .filter(|&k| (sig[k] < 0) != (k == 0))
            .collect();
        let mut acc = CliffordMatrix::identity(n);
        for pair in flips.chunks(2) {
            let (j, k) = (pair[0], pair[1]);
            let r = if j == 0 {
                let ek = CliffordElement::e(n, k);
                CliffordMatrix::diag(ek.clone(), -ek)
            } else {
                let u = CliffordElement::e(n, j) * CliffordElement::e(n, k);
                CliffordMatrix::diag(u.clone(), u)
            };
            acc = acc * r;
        }
        Some(acc * CliffordMatrix::inversion(n))
    }

    /// Translation matrix `[[1, g], [0, 1]]` of a vector digit.
    pub fn translation_matrix<S: Scalar>(&self, g: &IwasawaPoint<S>) -> Option<CliffordMatrix<S>> {
        g.to_clifford().map(CliffordMatrix::translation)
    }
}

fn dist2<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).square())
}
