//! The acceptance suite, shared by the integration test and the CLI.
//!
//! Every randomized criterion derives one ChaCha stream per sample from the
//! configured seed, so results do not depend on the execution mode.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cf::{
    self, evaluate_periodic_complex, expand_complex, gq, ComplexRoot, LeadingDigit, Status,
};
use crate::clifford::{parse_matrix, CliffordElement, CliffordMatrix, Ext};
use crate::hyperbolic::{
    count_certificate_failures, geodesic_sphere_min_height, GeodesicConfig, Model,
};
use crate::identities::{check_depth_identity, depth_sequence, interval_check};
use crate::modgroup::{
    classify_quaternionic, classify_real, fixed_points_real, hurwitz_closure_check, ps_quantities,
    reduce_to_generators, surd_to_loxodromic, unit_diagonal_word, GeneratorWord, Kind, Token,
};
use crate::par::Exec;
use crate::scalar::{exact_isqrt, int, rat, QuadExt, Rational, Scalar};
use crate::spaces::{CfSystem, Inversion, IwasawaPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfcheckConfig {
    pub seed: u64,
    /// Reduced sample counts.
    pub quick: bool,
    pub exec: Exec,
    pub max_iter: usize,
}

impl Default for SelfcheckConfig {
    fn default() -> Self {
        SelfcheckConfig {
            seed: 2024,
            quick: false,
            exec: Exec::default(),
            max_iter: cf::DEFAULT_MAX_ITER,
        }
    }
}

impl SelfcheckConfig {
    fn samples(&self, n: usize) -> usize {
        if self.quick {
            (n / 10).max(1)
        } else {
            n
        }
    }

    fn rng(&self, criterion: u64, i: usize) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(criterion << 32 | i as u64);
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    /// The property itself held.
    pub passed: bool,
    pub elapsed: Duration,
    pub budget: Duration,
    pub detail: String,
}

impl CriterionReport {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_budget()
    }

    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {} ({:.3} s / {:.1} s budget): {}",
            if self.ok() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs_f64(),
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str, f64); 10] = [
    (1, "complex CF of sqrt(1+i)", 1.0),
    (2, "R^3 periodic pair", 1.0),
    (3, "Parker-Short classification", 0.1),
    (4, "quadratic surd <-> loxodromic round trip", 30.0),
    (5, "rationals expand finitely with horoball certificates", 60.0),
    (6, "widely-spaced geodesic constant", 30.0),
    (7, "quaternionic depth identities", 5.0),
    (8, "reduction to generators", 30.0),
    (9, "Hurwitz order closure", 10.0),
    (10, "Koranyi identity, group action, conjugation invariance", 60.0),
];

pub fn run_all(cfg: &SelfcheckConfig) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|&(id, _, _)| run_criterion(id, cfg)).collect()
}

pub fn run_criterion(id: u8, cfg: &SelfcheckConfig) -> CriterionReport {
    let &(_, name, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .unwrap_or_else(|| panic!("no criterion {id}"));
    let t = Instant::now();
    let outcome = match id {
        1 => c1_sqrt_one_plus_i(),
        2 => c2_r3_pair(),
        3 => c3_parker_short(),
        4 => c4_surd_round_trip(cfg),
        5 => c5_rationals_finite(cfg),
        6 => c6_geodesic_constant(cfg),
        7 => c7_identities(),
        8 => c8_reduction(cfg, &CfSystem::r3()),
        9 => c9_hurwitz(cfg),
        10 => c10_properties(cfg),
        _ => unreachable!(),
    };
    let elapsed = t.elapsed();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionReport {
        id,
        name,
        passed,
        elapsed,
        budget: Duration::from_secs_f64(budget),
        detail,
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_sqrt_one_plus_i() -> Outcome {
    let sys = CfSystem::complex();
    let g = |a: i64, b: i64| gq(int(a), int(b));
    let [z, _] = ComplexRoot::quadratic_roots(&g(1, 0), &g(0, 0), &g(-1, -1)).map_err(|e| e.to_string())?;
    let e = expand_complex(&sys, &z, 100, LeadingDigit::Auto).map_err(|e| e.to_string())?;
    let shown = e.to_string();
    ensure(shown == "[1; (-2i, 2)]", || format!("expansion {shown}"))?;
    ensure(e.status == Status::EventuallyPeriodic { preperiod: 0, period: 2 }, || {
        format!("status {:?}", e.status)
    })?;
    let spec = e.spec().ok_or("no periodic spec")?;
    let v = evaluate_periodic_complex(&sys, &spec).map_err(|e| e.to_string())?;
    let c = v.to_c64();
    let err = (c * c - num_complex::Complex64::new(1.0, 1.0)).norm();
    ensure(err < 1e-12, || format!("|v² − (1+i)| = {err:e}"))?;
    ensure(v.same_value(&z), || "evaluated root differs from the input".into())?;
    Ok(format!("{shown}; |v² − (1+i)| = {err:.1e}"))
}

fn c2_r3_pair() -> Outcome {
    let sys = CfSystem::r3();
    let point = |sign: i64| {
        let c = (QuadExt::from_int(-1) + QuadExt::sqrt_int(3).unwrap() * QuadExt::from_int(sign))
            * QuadExt::from(rat(1, 4));
        IwasawaPoint::vector(vec![QuadExt::zero(), c.clone(), c])
    };
    let e1 = cf::expand(&sys, &point(1), 100).map_err(|e| e.to_string())?;
    let e2 = cf::expand_with(&sys, &point(-1), 100, LeadingDigit::Never).map_err(|e| e.to_string())?;
    let (s1, s2) = (e1.to_string(), e2.to_string());
    ensure(s1 == "[3i+3j, (-2i-2j, 4i+4j)]", || format!("first point: {s1}"))?;
    ensure(s2 == "[-i-j, (2i+2j, -4i-4j)]", || format!("second point: {s2}"))?;
    Ok(format!("{s1} and {s2}"))
}

fn qmat(s: &str) -> Result<CliffordMatrix<Rational>, String> {
    let m = parse_matrix(s, 2).map_err(|e| e.to_string())?;
    let conv = |x: &QuadExt| x.to_rational();
    let all: Option<Vec<_>> = m.entries().iter().flat_map(|e| e.coeffs().iter().map(conv)).collect();
    all.ok_or("irrational entry")?;
    Ok(m.map(|x| x.to_rational().unwrap()))
}

fn c3_parker_short() -> Outcome {
    let m = qmat("[[1,(i+j)/2],[-2i-2j,3]]")?;
    let q = ps_quantities(&m).map_err(|e| e.to_string())?;
    ensure(q.alpha == int(1), || format!("α = {}", q.alpha))?;
    let check = |s: &str, kind: Kind, simple: Option<u8>| -> Result<(), String> {
        let c = classify_quaternionic(&qmat(s)?).map_err(|e| e.to_string())?;
        ensure(c.kind == kind && simple.is_none_or(|k| c.simplicity == Some(k)), || {
            format!("{s}: {} {:?}", c.kind, c.simplicity)
        })
    };
    check("[[1,(i+j)/2],[-2i-2j,3]]", Kind::Loxodromic, None)?;
    check("[[0,-1],[1,-3]]", Kind::Loxodromic, Some(1))?;
    check("[[0,-1],[1,-3i-3j]]", Kind::Loxodromic, Some(2))?;
    check("[[1,1],[0,1]]", Kind::Parabolic, None)?;
    Ok("α = 1 loxodromic; 1-simple and 2-simple loxodromic; parabolic".into())
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> (BigInt, BigInt, BigInt, BigInt) {
    loop {
        let a = rng.gen_range(-30i64..=30);
        let b = rng.gen_range(-100i64..=100);
        let c = rng.gen_range(-100i64..=100);
        let delta = b * b - 4 * a * c;
        if a == 0 || delta <= 0 || delta > 10_000 {
            continue;
        }
        let d = BigInt::from(delta);
        if exact_isqrt(&d).is_some() {
            continue;
        }
        return (a.into(), b.into(), c.into(), d);
    }
}

fn c4_surd_round_trip(cfg: &SelfcheckConfig) -> Outcome {
    let n = cfg.samples(50);
    let sys = CfSystem::real_nearest();
    let results = cfg.exec.map_range(n, |i| -> Result<(), String> {
        let mut rng = cfg.rng(4, i);
        let (a, b, c, delta) = random_quadratic(&mut rng);
        let tag = format!("({a}, {b}, {c})");
        let m = surd_to_loxodromic(&a, &b, &c).map_err(|e| format!("{tag}: {e}"))?;
        let mr = m.map(|x| Rational::from_integer(x.clone()));
        ensure(m.det() == BigInt::one(), || format!("{tag}: det {}", m.det()))?;
        ensure(m.trace().abs() > BigInt::from(2), || format!("{tag}: trace {}", m.trace()))?;
        ensure(
            classify_real(&mr).map(|c| c.kind) == Ok(Kind::Loxodromic),
            || format!("{tag}: not loxodromic"),
        )?;
        let sd = QuadExt::sqrt_rational(&Rational::from_integer(delta)).map_err(|e| e.to_string())?;
        let two_a = QuadExt::from(Rational::from_integer(BigInt::from(2) * &a));
        let minus_b = QuadExt::from(Rational::from_integer(-b.clone()));
        let roots = [
            (minus_b.clone() + sd.clone()).try_div(&two_a).unwrap(),
            (minus_b - sd).try_div(&two_a).unwrap(),
        ];
        let fixed = fixed_points_real(&mr).map_err(|e| format!("{tag}: {e}"))?;
        let mut fixed: Vec<QuadExt> = fixed.into_iter().filter_map(Ext::finite).collect();
        let mut want = roots.to_vec();
        let key = |x: &QuadExt| x.as_f64();
        fixed.sort_by(|x, y| key(x).total_cmp(&key(y)));
        want.sort_by(|x, y| key(x).total_cmp(&key(y)));
        ensure(fixed == want, || format!("{tag}: fixed points {fixed:?}"))?;
        for r in &roots {
            let e = cf::expand(&sys, &IwasawaPoint::vector(vec![r.clone()]), cfg.max_iter)
                .map_err(|e| format!("{tag}: {e}"))?;
            ensure(e.is_periodic(), || format!("{tag}: root {r} expansion {:?}", e.status))?;
        }
        Ok(())
    });
    let bad: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    ensure(bad.is_empty(), || format!("{} failures, first: {}", bad.len(), bad[0]))?;
    Ok(format!("{n} quadratics: det 1, |tr| > 2, exact fixed points, periodic roots"))
}

fn random_rational_in_k(rng: &mut ChaCha8Rng, sys: &CfSystem) -> IwasawaPoint<Rational> {
    let dim = sys.space.dim();
    let coords = (0..dim)
        .map(|_| {
            let q = rng.gen_range(2i64..=2000);
            rat(rng.gen_range(-3 * q..=3 * q), q)
        })
        .collect();
    let x = IwasawaPoint::new(sys.space, coords).expect("arity");
    let g = sys.round(&x).expect("lattice rounding");
    sys.unact(&g, &x).expect("translation")
}

fn c5_rationals_finite(cfg: &SelfcheckConfig) -> Outcome {
    let n = cfg.samples(500);
    let mut parts = Vec::new();
    for (k, sys) in [CfSystem::real_nearest(), CfSystem::complex(), CfSystem::r3()].iter().enumerate() {
        let pts: Vec<IwasawaPoint<Rational>> = (0..n)
            .map(|i| random_rational_in_k(&mut cfg.rng(50 + k as u64, i), sys))
            .collect();
        let not_finite = cfg
            .exec
            .map_slice(&pts, |p| {
                cf::expand(sys, p, cfg.max_iter).map(|e| e.is_finite()).unwrap_or(false)
            })
            .into_iter()
            .filter(|ok| !ok)
            .count();
        let bad_cert = count_certificate_failures(sys, &pts, cfg.max_iter, cfg.exec);
        ensure(not_finite == 0 && bad_cert == 0, || {
            format!("{}: {not_finite} non-finite, {bad_cert} certificate failures", sys.name)
        })?;
        parts.push(format!("{} ×{n}", sys.name));
    }
    Ok(format!("finite with monotone certificates: {}", parts.join(", ")))
}

/// `(1/7)√(3(9 − 4√2))`.
pub fn widely_spaced_constant() -> f64 {
    (3.0 * (9.0 - 4.0 * 2f64.sqrt())).sqrt() / 7.0
}

fn c6_geodesic_constant(cfg: &SelfcheckConfig) -> Outcome {
    let g = GeodesicConfig {
        model: Model::Real,
        eps: 0.5,
        eps_prime: 2f64.sqrt(),
        grid: 400,
    };
    let m = geodesic_sphere_min_height(&g, cfg.exec).map_err(|e| e.to_string())?;
    let c = widely_spaced_constant();
    let err = (m.height - c).abs();
    ensure(err < 1e-3, || format!("min height {} vs C = {c}", m.height))?;
    Ok(format!("min height {:.6} (C = {c:.6}, |Δ| = {err:.1e}) over {} pairs", m.height, m.pairs))
}

fn c7_identities() -> Outcome {
    let mut msgs = Vec::new();
    let mut failed = false;
    for d in 2..=4 {
        let r = check_depth_identity(d).map_err(|e| e.to_string())?;
        if !r.holds() {
            failed = true;
            msgs.push(format!("d = {d}: {}", r.failures[0]));
        }
    }
    let s = depth_sequence(5, 100).map_err(|e| e.to_string())?;
    let ok5 = s
        .values
        .iter()
        .enumerate()
        .all(|(k, x)| *x == rat(k as i64 + 2, 2 * (k as i64 + 1)));
    if !ok5 {
        failed = true;
        msgs.push("d = 5 sequence differs from (n+1)/(2n)".into());
    }
    let mut outside = Vec::new();
    for d in 6..=12 {
        let r = interval_check(d, 1000).map_err(|e| e.to_string())?;
        if !r.never_zero {
            failed = true;
            msgs.push(format!("d = {d}: sequence vanishes"));
        }
        if let Some((n, x)) = &r.first_outside {
            outside.push(format!("d={d}: x_{n} = {x} > x₊ ≈ {:.4}", r.x_plus.as_f64()));
        }
    }
    if !outside.is_empty() {
        failed = true;
        msgs.push(format!(
            "interval [x₋, x₊] not invariant along the orbit ({}); sequences never vanish",
            outside[0]
        ));
    }
    if failed {
        Err(msgs.join("; "))
    } else {
        Ok("identities exact for d = 2, 3, 4 (2/8/48 variants); d = 5 matches; d = 6..12 stay in [x₋, x₊]".into())
    }
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> GeneratorWord {
    let tokens = (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Token::Inv
            } else {
                let c: Vec<Rational> = (0..=rank).map(|_| int(rng.gen_range(-3..=3))).collect();
                Token::Trans(CliffordElement::vector(rank, &c))
            }
        })
        .collect();
    GeneratorWord::new(rank, tokens)
}

fn c8_reduction(cfg: &SelfcheckConfig, sys: &CfSystem) -> Outcome {
    let n = cfg.samples(200);
    let rank = sys.space.dim() - 1;
    let results = cfg.exec.map_range(n, |i| -> Result<(), String> {
        let mut rng = cfg.rng(8, i);
        let len = rng.gen_range(0..=12);
        let m = random_word(&mut rng, rank, len).product();
        let w = reduce_to_generators(sys, &m).map_err(|e| format!("{m}: {e}"))?;
        ensure(w.product() == m, || format!("{m}: product mismatch"))
    });
    let bad: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    ensure(bad.is_empty(), || format!("{}/{n} round-trip failures, first: {}", bad.len(), bad[0]))?;
    use crate::clifford::quat;
    let one = CliffordElement::<Rational>::one(2);
    let units = [
        one.clone(),
        -one,
        quat::i(),
        -quat::i(),
        quat::j(),
        -quat::j(),
        quat::k(),
        -quat::k(),
    ];
    for a in &units {
        let w = unit_diagonal_word(sys, a).map_err(|e| format!("{a}: {e}"))?;
        let d = a.reversion().inverse().map_err(|e| e.to_string())?;
        ensure(w.product() == CliffordMatrix::diag(a.clone(), d), || format!("unit {a}"))?;
    }
    let wk = unit_diagonal_word(sys, &quat::k()).map_err(|e| e.to_string())?;
    ensure(wk.len() == 12, || format!("k word has {} tokens, expected two hidden-symmetry words", wk.len()))?;
    Ok(format!("{n} words reduce exactly; 8 unit diagonals (k via i·j)"))
}

fn c9_hurwitz(cfg: &SelfcheckConfig) -> Outcome {
    let n = cfg.samples(10_000);
    let r = hurwitz_closure_check(n, cfg.seed);
    ensure(r.h_squared_equiv_h, || "h² ≢ h".into())?;
    ensure(r.commutes.iter().all(|&b| b), || format!("e_i h ≢ h e_i: {:?}", r.commutes))?;
    ensure(r.violations.is_empty(), || {
        format!("{} products escape, first: {}", r.violations.len(), r.violations[0])
    })?;
    Ok(format!("h² ≡ h, e_i h ≡ h e_i, {n} products closed"))
}

fn random_nonzero(rng: &mut ChaCha8Rng, sys: &CfSystem) -> IwasawaPoint<Rational> {
    loop {
        let coords = (0..sys.space.dim())
            .map(|_| rat(rng.gen_range(-40..=40), rng.gen_range(1..=12)))
            .collect();
        let p = IwasawaPoint::new(sys.space, coords).expect("arity");
        if !p.is_origin() {
            return p;
        }
    }
}

fn c10_properties(cfg: &SelfcheckConfig) -> Outcome {
    let n = cfg.samples(1000);
    let count_bad = |v: Vec<bool>| v.into_iter().filter(|ok| !ok).count();
    // Koranyi identity, exact on fourth powers
    let mut koranyi = Vec::new();
    for (k, sys) in [CfSystem::r3(), CfSystem::heisenberg()].iter().enumerate() {
        let bad = count_bad(cfg.exec.map_range(n, |i| {
            let mut rng = cfg.rng(100 + k as u64, i);
            let (p, q) = (random_nonzero(&mut rng, sys), random_nonzero(&mut rng, sys));
            let (ip, iq) = (sys.invert(&p).unwrap(), sys.invert(&q).unwrap());
            let lhs = ip.cygan4(&iq).unwrap();
            let rhs = p.cygan4(&q).unwrap() / (p.gauge4() * q.gauge4());
            lhs == rhs
        }));
        koranyi.push(bad);
        ensure(bad == 0, || format!("Koranyi identity fails on {bad} {} pairs", sys.name))?;
    }
    let _ = Inversion::Koranyi;
    // group action on R³
    let bad_action = count_bad(cfg.exec.map_range(n, |i| {
        let mut rng = cfg.rng(110, i);
        let a = { let len = rng.gen_range(0..=5); random_word(&mut rng, 2, len) }.product();
        let b = { let len = rng.gen_range(0..=5); random_word(&mut rng, 2, len) }.product();
        let x = random_nonzero(&mut rng, &CfSystem::r3()).to_clifford().unwrap();
        let x = Ext::Finite(x);
        let lhs = b.apply(&x).and_then(|y| a.apply(&y));
        let rhs = (a.clone() * b).apply(&x);
        let id = CliffordMatrix::identity(2).apply(&x);
        matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r) && id == Ok(x)
    }));
    ensure(bad_action == 0, || format!("group action fails on {bad_action} pairs"))?;
    // conjugation invariance of the classification
    let bad_conj = count_bad(cfg.exec.map_range(n, |i| {
        let mut rng = cfg.rng(120, i);
        let m = { let len = rng.gen_range(1..=6); random_word(&mut rng, 2, len) }.product();
        let g = { let len = rng.gen_range(1..=4); random_word(&mut rng, 2, len) }.product();
        let c = g.clone() * m.clone() * g.inverse();
        match (classify_quaternionic(&m), classify_quaternionic(&c)) {
            (Ok(x), Ok(y)) => x.kind == y.kind && x.simplicity == y.simplicity,
            _ => false,
        }
    }));
    ensure(bad_conj == 0, || format!("classification changes under {bad_conj} conjugations"))?;
    Ok(format!(
        "Koranyi identity on {n} pairs × 2 models; action on {n} pairs; {n} conjugates"
    ))
}
