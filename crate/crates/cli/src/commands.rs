use std::path::PathBuf;

use cfx_core::cf::{
    self, evaluate_periodic_complex, evaluate_periodic_f64, evaluate_periodic_real, expand_complex,
    CfError, ComplexRoot, Expansion, LeadingDigit, PeriodicSpec, Status,
};
use cfx_core::clifford::{CliffordMatrix, Ext};
use cfx_core::hyperbolic::{
    geodesic_sphere_min_height, track_horoball, GeodesicConfig, HypError, Model,
};
use cfx_core::identities::{
    check_depth_identity, depth_sequence, identity_depth, interval_check, raw_depth_sequence,
};
use cfx_core::modgroup::{
    classify_complex, classify_quaternionic, classify_real, complex_pell_search,
    fixed_points_clifford, fixed_points_complex, fixed_points_real, pell_solve,
    reduce_to_generators, surd_to_loxodromic, Classification, ModError,
};
use cfx_core::par::Exec;
use cfx_core::scalar::{rat, Mat2, QuadExt, Rational, Scalar, Zid};
use cfx_core::selfcheck::{run_all, run_criterion, widely_spaced_constant, SelfcheckConfig};
use cfx_core::spaces::{CfSystem, IwasawaPoint, Lattice, Space};
use serde_json::{json, Map, Value};

use crate::input;
use crate::output::{approx, approxs, domain, s, strs, usage, CliError, Report};

pub struct Ctx {
    pub max_iter: usize,
    pub seed: u64,
}

fn cf_err(e: CfError) -> CliError {
    domain(e)
}

fn mod_err(e: ModError) -> CliError {
    match e {
        ModError::NotFoundWithinBound(_) | ModError::NoConvergence(_) => CliError::Budget(e.to_string()),
        e => domain(e),
    }
}

fn hyp_err(e: HypError) -> CliError {
    match e {
        HypError::Truncated(_) => CliError::Budget(e.to_string()),
        e => domain(e),
    }
}

fn status_fields(r: &mut Report, st: &Status) {
    r.set("status", st.as_str());
    match *st {
        Status::EventuallyPeriodic { preperiod, period } => {
            r.set("preperiod", preperiod).set("period", period);
        }
        Status::Truncated { max_iter } => {
            r.set("max_iter", max_iter);
            r.code = 3;
        }
        Status::Finite => {}
    }
}

fn expansion_fields<S: Scalar>(r: &mut Report, e: &Expansion<S>) {
    r.set("digits", Value::Array(e.digit_strings().into_iter().map(Value::String).collect()));
    r.set("leading", e.leading.as_ref().map_or(Value::Null, |l| s(l.to_digit_string())));
    r.set("expansion", s(e));
    status_fields(r, &e.status);
    r.line(e.to_string());
    r.line(format!("status: {}", e.status.as_str()));
}

const EXPAND_REF: &str =
    "digits a_i = [ι T^{i−1} x]; rational points expand finitely, quadratic surds eventually periodically";

pub fn expand(
    ctx: &Ctx,
    sys: &CfSystem,
    point: Option<&str>,
    quadratic: Option<&str>,
    minus_root: bool,
    no_leading: bool,
) -> Result<Report, CliError> {
    let mut r = Report::new("expand", EXPAND_REF);
    r.set("space", sys.name.as_str());
    let leading = if no_leading { LeadingDigit::Never } else { LeadingDigit::Auto };
    match (point, quadratic) {
        (Some(p), None) => {
            let x = input::point(sys, p)?;
            r.set("point", strs(x.coords()));
            let e = cf::expand_with(sys, &x, ctx.max_iter, leading).map_err(cf_err)?;
            expansion_fields(&mut r, &e);
        }
        (None, Some(q)) => {
            if sys.space != Space::Vector(2) {
                return Err(usage("--quadratic expands roots over Q(i) and needs --space complex"));
            }
            let [a, b, c] = input::triple(q)?;
            let (a, b, c) = (input::gaussian(&a)?, input::gaussian(&b)?, input::gaussian(&c)?);
            let roots = ComplexRoot::quadratic_roots(&a, &b, &c).map_err(cf_err)?;
            let z = roots[usize::from(minus_root)].clone();
            r.set("root", s(&z));
            let zc = z.to_c64();
            r.set("root_approx", approxs(&[zc.re, zc.im]));
            let e = expand_complex(sys, &z, ctx.max_iter, leading).map_err(cf_err)?;
            expansion_fields(&mut r, &e);
        }
        _ => return Err(usage("give exactly one of --point or --quadratic")),
    }
    Ok(r)
}

fn digit_list(sys: &CfSystem, s: &str) -> Result<Vec<IwasawaPoint<Rational>>, CliError> {
    cfx_core::clifford::split_top_level(s, ';')
        .iter()
        .filter(|d| !d.trim().is_empty())
        .map(|d| input::point(sys, d).and_then(|p| input::rational_point(&p)))
        .collect()
}

pub fn evaluate(
    sys: &CfSystem,
    leading: Option<&str>,
    digits: &str,
    period: Option<&str>,
) -> Result<Report, CliError> {
    let mut r = Report::new("evaluate", "the CF bracket: x = a₀ · ι⁻¹(a₁ · ι⁻¹(a₂ · …)) over the digit lattice");
    r.set("space", sys.name.as_str());
    let leading = leading
        .map(|l| input::point(sys, l).and_then(|p| input::rational_point(&p)))
        .transpose()?;
    let pre = digit_list(sys, digits)?;
    for d in pre.iter().chain(leading.iter()) {
        if !sys.contains(d) {
            return Err(domain(format!("{d} is not a lattice element of {}", sys.name)));
        }
    }
    match period {
        None => {
            let v = cf::evaluate(sys, leading.as_ref(), &pre).map_err(cf_err)?;
            let (value, ap) = match &v {
                Ext::Infinity => (Value::String("∞".into()), Value::Null),
                Ext::Finite(p) => (strs(p.coords()), approxs(p.to_f64().coords())),
            };
            r.set("value", value).set("value_approx", ap).set("exact", true);
            r.line(format!("value: {v}"));
        }
        Some(per) => {
            let spec = PeriodicSpec {
                leading,
                preperiod: pre,
                period: digit_list(sys, per)?,
            };
            if spec.period.is_empty() {
                return Err(usage("--period is empty"));
            }
            let exact = match (sys.space, &sys.lattice) {
                (Space::Vector(1), _) => {
                    let v = evaluate_periodic_real(sys, &spec).map_err(cf_err)?;
                    r.set("value_approx", approxs(&[v.as_f64()]));
                    Some(vec![v.to_string()])
                }
                (Space::Vector(2), Lattice::Integer { .. }) => {
                    let v = evaluate_periodic_complex(sys, &spec).map_err(cf_err)?;
                    let c = v.to_c64();
                    r.set("value_approx", approxs(&[c.re, c.im]));
                    Some(vec![v.to_string()])
                }
                _ => None,
            };
            match exact {
                Some(v) => {
                    r.line(format!("value: {}", v[0]));
                    r.set("value", strs(v)).set("exact", true);
                }
                None => {
                    let v = evaluate_periodic_f64(sys, &spec.map(|c| c.as_f64())).map_err(cf_err)?;
                    r.line(format!("value ≈ {v}"));
                    r.set("value", Value::Null)
                        .set("value_approx", approxs(v.coords()))
                        .set("exact", false);
                }
            }
        }
    }
    Ok(r)
}

fn classification_fields(r: &mut Report, c: &Classification) {
    r.set("kind", c.kind.as_str());
    r.set("simplicity", c.simplicity.map_or(Value::Null, Value::from));
    let cert: Map<String, Value> = c.certificate.iter().map(|(k, v)| (k.clone(), s(v))).collect();
    r.set("certificate", Value::Object(cert));
    let simple = c.simplicity.map(|k| format!("{k}-simple ")).unwrap_or_default();
    r.line(format!("{simple}{}", c.kind));
    for (k, v) in &c.certificate {
        r.line(format!("  {k} = {v}"));
    }
}

pub fn classify(ring: &str, imaginary_d: Option<u64>, matrix: &str) -> Result<Report, CliError> {
    let (c, mj) = match ring {
        "z" => {
            let m = input::real_matrix(matrix)?;
            (classify_real(&m).map_err(mod_err)?, mat2_json(&m))
        }
        "zi" | "zid" => {
            let d = match (ring, imaginary_d) {
                ("zi", None | Some(1)) => 1,
                ("zi", Some(_)) => return Err(usage("--ring zi has d = 1; use --ring zid")),
                (_, Some(d)) => d,
                (_, None) => return Err(usage("--ring zid needs --imaginary-d")),
            };
            let m = input::zid_matrix(matrix, d)?;
            (classify_complex(&m).map_err(mod_err)?, mat2_json(&m))
        }
        "quat" => {
            let m = cfx_core::clifford::parse_matrix(matrix, 2).map_err(usage)?;
            (classify_quaternionic(&m).map_err(mod_err)?, matrix_json(&m))
        }
        _ => return Err(usage(format!("unknown ring `{ring}` (z, zi, zid, quat)"))),
    };
    let paper_ref = if ring == "quat" {
        "Parker–Short classification of SL(2,H) by α, β, γ, δ, σ, τ"
    } else {
        "trace classification of SL(2) elements"
    };
    let mut r = Report::new("classify", paper_ref);
    r.set("ring", ring).set("matrix", mj);
    classification_fields(&mut r, &c);
    Ok(r)
}

fn matrix_json<S: Scalar>(m: &CliffordMatrix<S>) -> Value {
    json!([[s(&m.a), s(&m.b)], [s(&m.c), s(&m.d)]])
}

fn mat2_json<T: std::fmt::Display>(m: &Mat2<T>) -> Value {
    json!([[s(&m.a), s(&m.b)], [s(&m.c), s(&m.d)]])
}

pub fn reduce(sys: &CfSystem, matrix: &str) -> Result<Report, CliError> {
    let Space::Vector(dim) = sys.space else {
        return Err(usage("reduction needs a vector space (real, complex, r3)"));
    };
    let m = input::rational_matrix(matrix, dim - 1)?;
    let w = reduce_to_generators(sys, &m).map_err(mod_err)?;
    let mut r = Report::new(
        "reduce",
        "Euclidean algorithm in R³: integer Clifford matrices are words in translations and inversion",
    );
    r.set("space", sys.name.as_str())
        .set("matrix", matrix_json(&m))
        .set("word", strs(&w.tokens))
        .set("length", w.len())
        .set("verified", w.product() == m);
    r.line(w.to_string());
    Ok(r)
}

pub fn pell(ctx: &Ctx, delta: &str, imaginary_d: Option<u64>, bound: u64) -> Result<Report, CliError> {
    let _ = ctx;
    match imaginary_d {
        None => {
            let d = input::integer(delta)?;
            let (mu, n) = pell_solve(&d).map_err(mod_err)?;
            let mut r = Report::new("pell", "minimal solution of μ²Δ + 1 = n² from the regular CF of √Δ");
            r.set("delta", s(&d)).set("mu", s(&mu)).set("n", s(&n));
            r.line(format!("μ = {mu}, n = {n}: {mu}²·{d} + 1 = {n}²"));
            Ok(r)
        }
        Some(d) => {
            let e = input::rational_matrix(&format!("[[{delta},0],[0,1]]"), 1)?;
            let (p, q) = (e.a.coeff(0), e.a.coeff(1));
            if !p.is_integer() || !q.is_integer() {
                return Err(usage(format!("Δ = {delta} is not in Z[i√{d}]")));
            }
            let dz = Zid::new(p.to_integer(), q.to_integer(), d);
            let mut r = Report::new("pell", "x² + Δy² = 1 over Z[i√d] (bounded search, literal sign convention)");
            r.set("delta", s(&dz)).set("imaginary_d", d).set("bound", bound);
            let (x, y) = complex_pell_search(&dz, bound).map_err(mod_err)?;
            r.set("x", s(&x)).set("y", s(&y));
            r.line(format!("x = {x}, y = {y}"));
            Ok(r)
        }
    }
}

fn fixed_strings(fps: &[Ext<QuadExt>]) -> Vec<String> {
    fps.iter()
        .map(|p| match p {
            Ext::Infinity => "∞".to_string(),
            Ext::Finite(x) => x.to_string(),
        })
        .collect()
}

pub fn surd2mat(ctx: &Ctx, quadratic: &str) -> Result<Report, CliError> {
    let [a, b, c] = input::triple(quadratic)?;
    let (a, b, c) = (input::integer(&a)?, input::integer(&b)?, input::integer(&c)?);
    let m = surd_to_loxodromic(&a, &b, &c).map_err(mod_err)?;
    let mr = m.map(|x| Rational::from_integer(x.clone()));
    let class = classify_real(&mr).map_err(mod_err)?;
    let fps = fixed_points_real(&mr).map_err(mod_err)?;
    let sys = CfSystem::real_nearest();
    let mut r = Report::new(
        "surd2mat",
        "every real quadratic surd is a fixed point of a loxodromic element of SL(2,Z) (via Pell)",
    );
    let delta = &b * &b - num_bigint::BigInt::from(4) * &a * &c;
    r.set("quadratic", strs([&a, &b, &c]))
        .set("delta", s(&delta))
        .set("matrix", mat2_json(&m))
        .set("det", s(m.det()))
        .set("trace", s(m.trace()))
        .set("kind", class.kind.as_str())
        .set("fixed_points", strs(fixed_strings(&fps)));
    let mut exps = Vec::new();
    for p in fps.iter().filter_map(|p| p.as_ref().finite()) {
        let e = cf::expand(&sys, &IwasawaPoint::vector(vec![p.clone()]), ctx.max_iter).map_err(cf_err)?;
        exps.push(json!({ "root": s(p), "expansion": s(&e), "status": e.status.as_str() }));
    }
    r.set("root_expansions", Value::Array(exps));
    r.line(format!("{m}  (trace {}, {})", m.trace(), class.kind));
    r.line(format!("fixed points: {}", fixed_strings(&fps).join(", ")));
    Ok(r)
}

pub fn fixed(ctx: &Ctx, ring: &str, matrix: &str) -> Result<Report, CliError> {
    let mut r = Report::new("fixed", "fixed points of x ↦ (ax + b)(cx + d)⁻¹");
    r.set("ring", ring);
    match ring {
        "z" | "q" => {
            let m = input::rational_matrix(matrix, 0)?;
            let m = Mat2::new(m.a.coeff(0).clone(), m.b.coeff(0).clone(), m.c.coeff(0).clone(), m.d.coeff(0).clone());
            let fps = fixed_strings(&fixed_points_real(&m).map_err(mod_err)?);
            r.line(format!("fixed points: {}", fps.join(", ")));
            r.set("fixed_points", strs(fps)).set("exact", true);
        }
        "zi" | "qi" => {
            let m = input::rational_matrix(matrix, 1)?;
            let g = |e: &cfx_core::clifford::CliffordElement<Rational>| cfx_core::cf::gq(e.coeff(0).clone(), e.coeff(1).clone());
            let m = Mat2::new(g(&m.a), g(&m.b), g(&m.c), g(&m.d));
            let fps = fixed_points_complex(&m).map_err(mod_err)?;
            let names: Vec<String> = fps.iter().map(|p| p.to_string()).collect();
            let ap: Vec<Value> = fps
                .iter()
                .map(|p| match p {
                    Ext::Infinity => Value::Null,
                    Ext::Finite(z) => {
                        let c = z.to_c64();
                        approxs(&[c.re, c.im])
                    }
                })
                .collect();
            r.line(format!("fixed points: {}", names.join(", ")));
            r.set("fixed_points", strs(names))
                .set("fixed_points_approx", Value::Array(ap))
                .set("exact", true);
        }
        "quat" | "r3" => {
            let m = input::rational_matrix(matrix, 2)?;
            let (att, rep) = fixed_points_clifford(&m, ctx.seed).map_err(mod_err)?;
            r.line(format!("attracting ≈ {att:?}, repelling ≈ {rep:?}"));
            r.set("attracting_approx", approxs(&att))
                .set("repelling_approx", approxs(&rep))
                .set("seed", ctx.seed)
                .set("exact", false);
        }
        _ => return Err(usage(format!("unknown ring `{ring}` (z, zi, quat)"))),
    }
    Ok(r)
}

pub fn horoball_trace(
    ctx: &Ctx,
    sys: &CfSystem,
    point: &str,
    height: &str,
    svg: Option<&PathBuf>,
) -> Result<Report, CliError> {
    let x = input::rational_point(&input::point(sys, point)?)?;
    let h0 = input::rational(height)?;
    // move the point into K first; the translation does not change heights
    let g = sys.round(&x).map_err(domain)?;
    let x0 = sys.unact(&g, &x).map_err(domain)?;
    let t = track_horoball(sys, &x0, &h0, ctx.max_iter).map_err(hyp_err)?;
    let mut r = Report::new(
        "horoball-trace",
        "horoball heights at rational points grow by at least rad(K)⁻¹ per inversion, so the expansion is finite",
    );
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|st| {
            json!({
                "base": strs(st.base.coords()),
                "digit": s(st.digit.to_digit_string()),
                "height4": s(&st.height.fourth),
                "height_approx": approx(st.height.approx()),
                "multiplier4": s(&st.multiplier4),
            })
        })
        .collect();
    r.set("space", sys.name.as_str())
        .set("point", strs(x.coords()))
        .set("translated_by", s(g.to_digit_string()))
        .set("start", strs(t.start.coords()))
        .set("h0_4", s(&t.h0.fourth))
        .set("rad4", s(&t.rad4))
        .set("steps", Value::Array(steps))
        .set("certificate_holds", t.certificate_holds())
        .set("lower_bounds_hold", t.lower_bounds_hold());
    r.line(format!("{} inversion steps, rad(K)⁴ = {}", t.steps.len(), t.rad4));
    for st in &t.steps {
        r.line(format!(
            "  base {}  digit {}  height ≈ {:.6}  multiplier⁴ = {}",
            st.base,
            st.digit.to_digit_string(),
            st.height.approx(),
            st.multiplier4
        ));
    }
    r.line(format!("certificate: {}", if t.certificate_holds() { "holds" } else { "fails" }));
    if let Some(path) = svg {
        std::fs::write(path, t.to_svg()).map_err(|e| domain(format!("{}: {e}", path.display())))?;
        r.set("svg", s(path.display()));
    }
    Ok(r)
}

pub fn geodesic_min_height(
    model: &str,
    eps: &str,
    eps_prime: &str,
    grid: usize,
    exec: Exec,
) -> Result<Report, CliError> {
    let model = match model {
        "real" => Model::Real,
        "complex" => Model::Complex,
        _ => return Err(usage(format!("unknown model `{model}` (real, complex)"))),
    };
    let cfg = GeodesicConfig {
        model,
        eps: input::real(eps)?,
        eps_prime: input::real(eps_prime)?,
        grid,
    };
    let m = geodesic_sphere_min_height(&cfg, exec).map_err(hyp_err)?;
    let c = widely_spaced_constant();
    let mut r = Report::new(
        "geodesic-min-height",
        "geodesics between widely spaced endpoints cross the unit sphere at height ≥ C = (1/7)√(3(9−4√2))",
    );
    r.set("eps", eps)
        .set("eps_prime", eps_prime)
        .set("grid", grid)
        .set("pairs", m.pairs)
        .set("height_approx", approx(m.height))
        .set("a_approx", approxs(&m.a))
        .set("b_approx", m.b.map_or(Value::Null, |b| approxs(&b)))
        .set("c_approx", approx(c));
    r.line(format!("min height ≈ {:.9} over {} pairs (C ≈ {c:.9})", m.height, m.pairs));
    Ok(r)
}

pub fn identities(d: usize, steps: usize) -> Result<Report, CliError> {
    let mut r = Report::new(
        "identities",
        "a + [a, …, a] = 0 in dimensions 2, 3, 4 and the recurrence x_{n+1} = 1 − 1/((d−1)x_n) beyond",
    );
    r.set("d", d).set("steps", steps);
    if identity_depth(d).is_some() {
        let id = check_depth_identity(d).map_err(domain)?;
        let (vals, zero) = raw_depth_sequence(d, steps.max(1));
        r.set("depth", id.depth)
            .set("variants", id.variants)
            .set("holds", id.holds())
            .set("failures", strs(&id.failures))
            .set("sequence", strs(&vals))
            .set("first_zero", zero.map_or(Value::Null, Value::from));
        r.line(format!(
            "depth {}: {} over {} sign/permutation variants",
            id.depth,
            if id.holds() { "exact zero" } else { "FAILS" },
            id.variants
        ));
        return Ok(r);
    }
    let seq = depth_sequence(d, steps).map_err(domain)?;
    let table: Vec<Value> = seq
        .values
        .iter()
        .enumerate()
        .map(|(k, x)| json!({ "n": k + 1, "x": s(x) }))
        .collect();
    r.set("sequence", Value::Array(table));
    if d == 5 {
        let closed = seq
            .values
            .iter()
            .enumerate()
            .all(|(k, x)| *x == rat(k as i64 + 2, 2 * (k as i64 + 1)));
        r.set("matches_closed_form", closed);
        r.line(format!("x_n = (n+1)/(2n) for n ≤ {steps}: {closed}"));
    } else {
        let rep = interval_check(d, steps).map_err(domain)?;
        r.set("x_minus", s(&rep.x_minus))
            .set("x_plus", s(&rep.x_plus))
            .set("never_zero", rep.never_zero)
            .set("stays_in_interval", rep.stays_in_interval())
            .set("above_upper", rep.above_upper)
            .set(
                "first_outside",
                rep.first_outside.as_ref().map_or(Value::Null, |(n, x)| json!({ "n": n, "x": s(x) })),
            );
        r.line(format!(
            "x± = {}, {}; never zero: {}; in [x₋, x₊]: {}; above x₊: {}",
            rep.x_minus,
            rep.x_plus,
            rep.never_zero,
            rep.stays_in_interval(),
            rep.above_upper
        ));
    }
    for (k, x) in seq.values.iter().enumerate().take(12) {
        r.line(format!("  x_{} = {x}", k + 1));
    }
    Ok(r)
}

pub fn selfcheck(ctx: &Ctx, quick: bool, only: &[u8], exec: Exec) -> Result<Report, CliError> {
    let cfg = SelfcheckConfig {
        seed: ctx.seed,
        quick,
        exec,
        max_iter: ctx.max_iter,
    };
    let results = if only.is_empty() {
        run_all(&cfg)
    } else {
        only.iter().map(|&id| run_criterion(id, &cfg)).collect()
    };
    let mut r = Report::new("selfcheck", "acceptance suite");
    let rows: Vec<Value> = results
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "name": c.name,
                "passed": c.ok(),
                "detail": c.detail,
                "elapsed_s_approx": approx(c.elapsed.as_secs_f64()),
                "budget_s_approx": approx(c.budget.as_secs_f64()),
            })
        })
        .collect();
    let failed = results.iter().filter(|c| !c.ok()).count();
    r.set("seed", ctx.seed)
        .set("quick", quick)
        .set("criteria", Value::Array(rows))
        .set("failed", failed);
    for c in &results {
        r.line(c.line());
    }
    r.line(format!("{}/{} criteria pass", results.len() - failed, results.len()));
    if failed > 0 {
        r.code = 2;
    }
    Ok(r)
}
