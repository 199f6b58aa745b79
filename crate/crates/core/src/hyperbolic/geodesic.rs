use super::HypError;
use crate::par::Exec;

/// The boundary model: `R` or `C`. Higher-rank geodesics are not closed-form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicConfig {
    pub model: Model,
    /// `‖a‖ ≤ eps`.
    pub eps: f64,
    /// `‖b‖ ≥ eps_prime` (or `b = ∞`).
    pub eps_prime: f64,
    /// Samples per endpoint.
    pub grid: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicMin {
    /// Minimal Poincaré height `y = √s` over the sampled geodesics.
    pub height: f64,
    pub a: [f64; 2],
    /// `None` for `b = ∞`.
    pub b: Option<[f64; 2]>,
    pub pairs: usize,
}

/// Poincaré height of the point where the geodesic from `a` to `b` meets the
/// gauge unit sphere `|z|² + y² = 1`.
///
/// The geodesic is the vertical semicircle over `[a, b]` with centre `c`
/// and radius `r`; writing its points as `c + ρu + y·(vertical)` with
/// `ρ² + y² = r²`, the sphere condition is linear in `ρ`:
/// `|c|² + 2ρ⟨c, u⟩ + r² = 1`.
pub fn sphere_crossing_height(a: [f64; 2], b: Option<[f64; 2]>) -> Result<f64, HypError> {
    let na = a[0] * a[0] + a[1] * a[1];
    let Some(b) = b else {
        return if na < 1.0 {
            Ok((1.0 - na).sqrt())
        } else {
            Err(HypError::NoIntersection(format!("{a:?} → ∞")))
        };
    };
    let nb = b[0] * b[0] + b[1] * b[1];
    if (na < 1.0) == (nb < 1.0) {
        return Err(HypError::NoIntersection(format!("{a:?} → {b:?}")));
    }
    let d = [b[0] - a[0], b[1] - a[1]];
    let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
    let r = len / 2.0;
    // ⟨c, u⟩·r = (|b|² − |a|²)/4, |c|² + r² = (|a|² + |b|²)/2
    let cu = (nb - na) / (2.0 * len);
    let rho = (1.0 - (na + nb) / 2.0) / (2.0 * cu);
    let y2 = r * r - rho * rho;
    if y2 < 0.0 {
        return Err(HypError::NoIntersection(format!("{a:?} → {b:?}")));
    }
    Ok(y2.sqrt())
}

/// Inner endpoints: a uniform grid on `[−ε, ε]`, or a polar grid on the
/// closed `ε`-disc.
fn inner_points(cfg: &GeodesicConfig) -> Vec<[f64; 2]> {
    let n = cfg.grid.max(2);
    match cfg.model {
        Model::Real => (0..n)
            .map(|i| [-cfg.eps + 2.0 * cfg.eps * i as f64 / (n - 1) as f64, 0.0])
            .collect(),
        Model::Complex => polar(n, |u| cfg.eps * u),
    }
}

/// Outer endpoints `ε′/u`, `u ∈ [−1, 1]` (`u = 0` is `∞`).
fn outer_points(cfg: &GeodesicConfig) -> Vec<Option<[f64; 2]>> {
    let n = cfg.grid.max(2);
    let inv = |u: f64| cfg.eps_prime / u;
    match cfg.model {
        Model::Real => (0..n)
            .map(|j| {
                let u = -1.0 + 2.0 * j as f64 / (n - 1) as f64;
                (u != 0.0).then(|| [inv(u), 0.0])
            })
            .collect(),
        Model::Complex => {
            let mut v: Vec<Option<[f64; 2]>> = polar(n, |u| 1.0 - u)
                .into_iter()
                .map(|p| {
                    let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
                    (r > 0.0).then(|| [p[0] / r * inv(r), p[1] / r * inv(r)])
                })
                .collect();
            v.retain(|p| p.is_some());
            v.push(None);
            v
        }
    }
}

/// About `n` points: `k ≈ √n` radii `radius(i/(k−1))` times `k` angles.
fn polar(n: usize, radius: impl Fn(f64) -> f64) -> Vec<[f64; 2]> {
    let k = ((n as f64).sqrt().ceil() as usize).max(2);
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        let r = radius(i as f64 / (k - 1) as f64);
        for j in 0..k {
            let t = std::f64::consts::TAU * j as f64 / k as f64;
            out.push([r * t.cos(), r * t.sin()]);
        }
    }
    out
}

/// Minimum Poincaré height at which geodesics joining `‖a‖ ≤ ε` to
/// `‖b‖ ≥ ε′` cross the unit sphere, over a grid that includes the boundary
/// circles `‖a‖ = ε`, `‖b‖ = ε′` (where the infimum is attained).
pub fn geodesic_sphere_min_height(cfg: &GeodesicConfig, exec: Exec) -> Result<GeodesicMin, HypError> {
    if !(cfg.eps > 0.0 && cfg.eps < 1.0 && cfg.eps_prime > 1.0) {
        return Err(HypError::BadConfig(format!(
            "need 0 < ε < 1 < ε′, got ε = {}, ε′ = {}",
            cfg.eps, cfg.eps_prime
        )));
    }
    let inner = inner_points(cfg);
    let outer = outer_points(cfg);
    let rows = exec.map_slice(&inner, |&a| {
        let mut best: Option<(f64, Option<[f64; 2]>)> = None;
        for &b in &outer {
            let h = sphere_crossing_height(a, b)?;
            if best.is_none_or(|(m, _)| h < m) {
                best = Some((h, b));
            }
        }
        Ok::<_, HypError>(best.map(|(h, b)| (h, a, b)))
    });
    let mut out: Option<GeodesicMin> = None;
    for row in rows {
        if let Some((h, a, b)) = row? {
            if out.as_ref().is_none_or(|m| h < m.height) {
                out = Some(GeodesicMin {
                    height: h,
                    a,
                    b,
                    pairs: 0,
                });
            }
        }
    }
    let mut m = out.ok_or_else(|| HypError::BadConfig("empty grid".into()))?;
    m.pairs = inner.len() * outer.len();
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c_const() -> f64 {
        (3.0 * (9.0 - 4.0 * 2f64.sqrt())).sqrt() / 7.0
    }

    #[test]
    fn crossing_examples() {
        assert!((sphere_crossing_height([0.0, 0.0], None).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (sphere_crossing_height([0.0, 0.0], Some([2.0, 0.0])).unwrap() - 3f64.sqrt() / 2.0).abs()
                < 1e-15
        );
        // corner of the widely-spaced region
        let h = sphere_crossing_height([0.5, 0.0], Some([2f64.sqrt(), 0.0])).unwrap();
        assert!((h - c_const()).abs() < 1e-12, "{h}");
        assert!(sphere_crossing_height([0.2, 0.0], Some([0.5, 0.0])).is_err());
        // rotation invariance in C
        let t: f64 = 0.7;
        let rot = |p: [f64; 2]| [p[0] * t.cos() - p[1] * t.sin(), p[0] * t.sin() + p[1] * t.cos()];
        let (a, b) = ([0.3, -0.1], [-1.4, 2.0]);
        let h1 = sphere_crossing_height(a, Some(b)).unwrap();
        let h2 = sphere_crossing_height(rot(a), Some(rot(b))).unwrap();
        assert!((h1 - h2).abs() < 1e-12);
    }

    #[test]
    fn crossing_oracle_by_bisection() {
        // independent check: parametrise the semicircle by angle, bisect on |z|² + y² − 1
        let cases: [([f64; 2], [f64; 2]); 3] = [([0.1, 0.2], [1.5, -0.4]), ([-0.45, 0.0], [3.0, 0.0]), ([0.0, 0.3], [0.0, -1.2])];
        for (a, b) in cases {
            let c = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            let r = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt() / 2.0;
            let u = [(b[0] - a[0]) / (2.0 * r), (b[1] - a[1]) / (2.0 * r)];
            let f = |th: f64| {
                let z = [c[0] - r * th.cos() * u[0], c[1] - r * th.cos() * u[1]];
                z[0] * z[0] + z[1] * z[1] + (r * th.sin()).powi(2) - 1.0
            };
            let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
            for _ in 0..200 {
                let mid = (lo + hi) / 2.0;
                if (f(lo) < 0.0) == (f(mid) < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let want = r * lo.sin();
            let got = sphere_crossing_height(a, Some(b)).unwrap();
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn widely_spaced_minimum() {
        let cfg = GeodesicConfig {
            model: Model::Real,
            eps: 0.5,
            eps_prime: 2f64.sqrt(),
            grid: 400,
        };
        let m = geodesic_sphere_min_height(&cfg, Exec::default()).unwrap();
        assert!((m.height - c_const()).abs() < 1e-3, "{m:?}");
        assert!((m.a[0].abs() - 0.5).abs() < 1e-12);
        let b = m.b.unwrap();
        assert!((b[0].abs() - 2f64.sqrt()).abs() < 1e-9 && b[0].signum() == m.a[0].signum());
        let seq = geodesic_sphere_min_height(&cfg, Exec::Sequential).unwrap();
        assert_eq!(seq, m);
    }

    #[test]
    fn monotone_in_eps() {
        let run = |eps, eps_prime, model| {
            geodesic_sphere_min_height(
                &GeodesicConfig { model, eps, eps_prime, grid: 101 },
                Exec::default(),
            )
            .unwrap()
            .height
        };
        for model in [Model::Real, Model::Complex] {
            let base = run(0.5, 1.5, model);
            assert!(run(0.4, 1.5, model) >= base);
            assert!(run(0.5, 2.0, model) >= base);
        }
        // the complex minimum is the real one (attained on a line through 0)
        let c = run(0.5, 2f64.sqrt(), Model::Complex);
        assert!((c - c_const()).abs() < 1e-3, "{c}");
        assert!(geodesic_sphere_min_height(
            &GeodesicConfig { model: Model::Real, eps: 1.5, eps_prime: 2.0, grid: 10 },
            Exec::default()
        )
        .is_err());
    }
}
