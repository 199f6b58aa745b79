//! Flag values into exact core types.

use cfx_core::clifford::{parse_element, parse_matrix, parse_point, parse_scalar, CliffordMatrix};
use cfx_core::scalar::{parse_rational, Mat2, QuadExt, Rational, Scalar, Zid};
use cfx_core::spaces::{CfSystem, IwasawaPoint, Lattice, Space};
use num_bigint::BigInt;

use crate::output::{usage, CliError};

/// `--space` plus `--imaginary-d`, checked against an optional `--lattice`.
pub fn system(space: &str, imaginary_d: Option<u64>, lattice: Option<&str>) -> Result<CfSystem, CliError> {
    if imaginary_d.is_some() && space != "complex" {
        return Err(usage("--imaginary-d only applies to --space complex"));
    }
    let sys = CfSystem::by_name(space, imaginary_d).ok_or_else(|| {
        usage(format!(
            "unknown space `{space}` (real, real-regular, real-even, complex, r3, r4-hurwitz, heisenberg)"
        ))
    })?;
    if let Some(l) = lattice {
        let expected: &[&str] = match &sys.lattice {
            Lattice::Integer { m: 1, step: 1 } => &["z"],
            Lattice::Integer { m: 1, .. } => &["2z"],
            Lattice::Integer { m: 2, .. } => &["zi", "z[i]"],
            Lattice::Integer { .. } => &["z3", "z^3"],
            Lattice::GaussianImaginary { .. } => &["zid", "z[i√d]"],
            Lattice::Hurwitz => &["hurwitz"],
            Lattice::HeisenbergInteger => &["heisenberg"],
        };
        if !expected.contains(&l.to_ascii_lowercase().as_str()) {
            return Err(usage(format!("--lattice {l} does not match --space {space} (expected {})", expected[0])));
        }
    }
    Ok(sys)
}

pub fn point(sys: &CfSystem, s: &str) -> Result<IwasawaPoint<QuadExt>, CliError> {
    let coords = if s.trim_start().starts_with('(') {
        parse_point(s).map_err(usage)?
    } else {
        digit_coords(sys, s)?
    };
    IwasawaPoint::new(sys.space, coords).map_err(usage)
}

/// A lattice element in blade syntax (`3i+3j`, `1-2i`) or a tuple.
fn digit_coords(sys: &CfSystem, s: &str) -> Result<Vec<QuadExt>, CliError> {
    match sys.space {
        Space::Vector(m) => {
            let e = parse_element(s, m - 1).map_err(usage)?;
            e.to_vector().ok_or_else(|| usage(format!("`{s}` is not a vector")))
        }
        Space::Heisenberg => Err(usage(format!("Heisenberg points need tuple syntax, got `{s}`"))),
    }
}

pub fn rational_point(p: &IwasawaPoint<QuadExt>) -> Result<IwasawaPoint<Rational>, CliError> {
    let c: Option<Vec<Rational>> = p.coords().iter().map(|c| c.to_rational()).collect();
    let c = c.ok_or_else(|| usage(format!("{p} must have rational coordinates")))?;
    IwasawaPoint::new(p.space(), c).map_err(usage)
}

pub fn rational(s: &str) -> Result<Rational, CliError> {
    parse_scalar(s)
        .map_err(usage)?
        .to_rational()
        .ok_or_else(|| usage(format!("`{s}` must be rational")))
}

pub fn integer(s: &str) -> Result<BigInt, CliError> {
    let r = parse_rational(s.trim()).map_err(usage)?;
    if !r.is_integer() {
        return Err(usage(format!("`{s}` must be an integer")));
    }
    Ok(r.to_integer())
}

pub fn real(s: &str) -> Result<f64, CliError> {
    Ok(parse_scalar(s).map_err(usage)?.as_f64())
}

/// `"a,b,c"`.
pub fn triple(s: &str) -> Result<[String; 3], CliError> {
    let parts: Vec<String> = cfx_core::clifford::split_top_level(s, ',');
    <[String; 3]>::try_from(parts).map_err(|_| usage(format!("expected `a,b,c`, got `{s}`")))
}

pub fn rational_matrix(s: &str, rank: usize) -> Result<CliffordMatrix<Rational>, CliError> {
    let m = parse_matrix(s, rank).map_err(usage)?;
    if m.entries().iter().any(|e| e.coeffs().iter().any(|c| c.to_rational().is_none())) {
        return Err(usage("matrix entries must be rational"));
    }
    Ok(m.map(|c| c.to_rational().expect("checked")))
}

pub fn real_matrix(s: &str) -> Result<Mat2<QuadExt>, CliError> {
    let m = parse_matrix(s, 0).map_err(usage)?;
    Ok(Mat2::new(
        m.a.scalar_part().clone(),
        m.b.scalar_part().clone(),
        m.c.scalar_part().clone(),
        m.d.scalar_part().clone(),
    ))
}

/// Entries `p + q i` with `i` standing for the generator `i√d`.
pub fn zid_matrix(s: &str, d: u64) -> Result<Mat2<Zid>, CliError> {
    let m = rational_matrix(s, 1)?;
    let conv = |e: &cfx_core::clifford::CliffordElement<Rational>| -> Result<Zid, CliError> {
        let (p, q) = (e.coeff(0), e.coeff(1));
        if !p.is_integer() || !q.is_integer() {
            return Err(usage(format!("{e} is not in Z[i√{d}]")));
        }
        Ok(Zid::new(p.to_integer(), q.to_integer(), d))
    };
    Ok(Mat2::new(conv(&m.a)?, conv(&m.b)?, conv(&m.c)?, conv(&m.d)?))
}

/// A Gaussian rational `p + q i`.
pub fn gaussian(s: &str) -> Result<cfx_core::cf::Gq, CliError> {
    let e = parse_element(s, 1).map_err(usage)?;
    let re = e.coeff(0).to_rational();
    let im = e.coeff(1).to_rational();
    match (re, im) {
        (Some(a), Some(b)) => Ok(cfx_core::cf::gq(a, b)),
        _ => Err(usage(format!("`{s}` must be a Gaussian rational"))),
    }
}
