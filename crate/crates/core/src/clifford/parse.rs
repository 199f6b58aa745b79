//! Text syntax for exact scalars, Clifford elements, points and matrices.
//!
//! Grammar (whitespace-insensitive, implicit multiplication allowed):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/' | <juxtaposition>) factor)*
//! factor := ('+' | '-') factor | atom
//! atom   := INT | '√' INT | 'sqrt' '(' expr ')' | unit | '(' expr ')'
//! unit   := 'i' | 'j' | 'k' | 'e' DIGITS        (e12 = e1e2)
//! ```
//!
//! `i, j, k` are `e1, e2, e1e2`. Division is right division `x y⁻¹`.

use num_bigint::BigInt;
use thiserror::Error;

use super::{CliffordElement, CliffordError, CliffordMatrix};
use crate::scalar::{QuadExt, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected input at `{0}`")]
    Unexpected(String),
    #[error("unexpected end of input")]
    Eof,
    #[error("`{unit}` needs an algebra of rank ≥ {need}, have {have}")]
    UnitOutOfRank {
        unit: String,
        need: usize,
        have: usize,
    },
    #[error("√ of a non-rational or negative value")]
    BadRadical,
    #[error("divisor is not invertible")]
    NotInvertible,
    #[error("expected {expected}, found {found}")]
    Shape { expected: String, found: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<CliffordError> for ParseError {
    fn from(_: CliffordError) -> Self {
        ParseError::NotInvertible
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Sqrt,
    SqrtFn,
    Unit(usize, String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                out.push(Tok::Int(lit.parse().expect("digits")));
            }
            '√' => {
                out.push(Tok::Sqrt);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            'i' | 'j' | 'k' => {
                out.push(Tok::Unit(
                    match c {
                        'i' => 0b01,
                        'j' => 0b10,
                        _ => 0b11,
                    },
                    c.to_string(),
                ));
                i += 1;
            }
            's' if chars[i..].iter().take(4).collect::<String>() == "sqrt" => {
                out.push(Tok::SqrtFn);
                i += 4;
            }
            'e' => {
                let start = i;
                i += 1;
                let mut word = Vec::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    word.push(chars[i].to_digit(10).expect("digit") as usize);
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                if word.is_empty() || word.iter().any(|&k| k == 0 || k > 3) {
                    return Err(ParseError::Unexpected(name));
                }
                // A word of generators becomes a parenthesised product.
                out.push(Tok::LParen);
                for (idx, k) in word.iter().enumerate() {
                    if idx > 0 {
                        out.push(Tok::Star);
                    }
                    out.push(Tok::Unit(1 << (k - 1), format!("e{k}")));
                }
                out.push(Tok::RParen);
            }
            _ => return Err(ParseError::Unexpected(chars[i..].iter().collect())),
        }
    }
    Ok(out)
}

type El = CliffordElement<QuadExt>;

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    n: usize,
}

fn radicand(x: &El) -> Option<BigInt> {
    x.coeffs()
        .iter()
        .find(|c| !c.is_rational())
        .map(|c| c.radicand().clone())
}

fn check_compatible(x: &El, y: &El) -> Result<(), ParseError> {
    match (radicand(x), radicand(y)) {
        (Some(a), Some(b)) if a != b => Err(ScalarError::MixedRadicand(a, b).into()),
        _ => Ok(()),
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            Some(got) => Err(ParseError::Unexpected(format!("{got:?}"))),
            None => Err(ParseError::Eof),
        }
    }

    fn expr(&mut self) -> Result<El, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    check_compatible(&acc, &t)?;
                    acc = acc + t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    check_compatible(&acc, &t)?;
                    acc = acc - t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<El, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    check_compatible(&acc, &f)?;
                    acc = acc * f;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    check_compatible(&acc, &f)?;
                    if f.is_zero() {
                        return Err(ScalarError::DivisionByZero.into());
                    }
                    acc = acc * f.inverse()?;
                }
                Some(Tok::Int(_) | Tok::Sqrt | Tok::SqrtFn | Tok::Unit(..) | Tok::LParen) => {
                    let f = self.factor()?;
                    check_compatible(&acc, &f)?;
                    acc = acc * f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<El, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<El, ParseError> {
        let n = self.n;
        match self.next() {
            Some(Tok::Int(k)) => Ok(El::scalar(n, QuadExt::from(Rational::from_integer(k)))),
            Some(Tok::Sqrt) => match self.next() {
                Some(Tok::Int(k)) => Ok(El::scalar(n, QuadExt::sqrt_int(k)?)),
                Some(Tok::LParen) => {
                    let inner = self.expr()?;
                    self.expect(Tok::RParen)?;
                    self.radical(inner)
                }
                Some(t) => Err(ParseError::Unexpected(format!("{t:?}"))),
                None => Err(ParseError::Eof),
            },
            Some(Tok::SqrtFn) => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                self.radical(inner)
            }
            Some(Tok::Unit(mask, name)) => {
                let need = usize::BITS as usize - mask.leading_zeros() as usize;
                if need > n {
                    return Err(ParseError::UnitOutOfRank {
                        unit: name,
                        need,
                        have: n,
                    });
                }
                Ok(El::blade(n, mask))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(t) => Err(ParseError::Unexpected(format!("{t:?}"))),
            None => Err(ParseError::Eof),
        }
    }

    fn radical(&self, inner: El) -> Result<El, ParseError> {
        let r = match (inner.is_scalar(), inner.scalar_part().to_rational()) {
            (true, Some(r)) if r.signum() >= 0 => r,
            _ => return Err(ParseError::BadRadical),
        };
        Ok(El::scalar(self.n, QuadExt::sqrt_rational(&r)?))
    }
}

/// Parse an element of `A_n` with `QuadExt` coefficients.
pub fn parse_element(s: &str, n: usize) -> Result<El, ParseError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(ParseError::Eof);
    }
    let mut p = Parser { toks, pos: 0, n };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::Unexpected(format!("{:?}", p.toks[p.pos])));
    }
    Ok(e)
}

pub fn parse_scalar(s: &str) -> Result<QuadExt, ParseError> {
    Ok(parse_element(s, 0)?.scalar_part().clone())
}

/// Split on `sep` at nesting depth zero (parentheses and brackets).
pub fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

fn strip_outer<'a>(s: &'a str, open: char, close: char) -> Option<&'a str> {
    let t = s.trim();
    let inner = t.strip_prefix(open)?.strip_suffix(close)?;
    // make sure the outer pair actually matches
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    Some(inner)
}

/// Parse a point `"(s1, s2, …)"` of exact scalars.
pub fn parse_point(s: &str) -> Result<Vec<QuadExt>, ParseError> {
    let inner = strip_outer(s, '(', ')').ok_or_else(|| ParseError::Shape {
        expected: "a point `(s, s, …)`".into(),
        found: s.to_string(),
    })?;
    let parts = split_top_level(inner, ',');
    let mut out = Vec::with_capacity(parts.len());
    for p in &parts {
        out.push(parse_scalar(p)?);
    }
    let probe: Vec<El> = out.iter().map(|q| El::scalar(0, q.clone())).collect();
    for w in probe.windows(2) {
        check_compatible(&w[0], &w[1])?;
    }
    if let Some(first) = probe.iter().find(|e| radicand(e).is_some()) {
        for e in &probe {
            check_compatible(first, e)?;
        }
    }
    Ok(out)
}

/// Parse `"[[a, b], [c, d]]"` with entries in `A_n`.
pub fn parse_matrix(s: &str, n: usize) -> Result<CliffordMatrix<QuadExt>, ParseError> {
    let shape_err = || ParseError::Shape {
        expected: "a matrix `[[a, b], [c, d]]`".into(),
        found: s.to_string(),
    };
    let inner = strip_outer(s, '[', ']').ok_or_else(shape_err)?;
    let rows = split_top_level(inner, ',');
    if rows.len() != 2 {
        return Err(shape_err());
    }
    let mut entries = Vec::new();
    for r in &rows {
        let r = strip_outer(r, '[', ']').ok_or_else(shape_err)?;
        let cols = split_top_level(r, ',');
        if cols.len() != 2 {
            return Err(shape_err());
        }
        for c in &cols {
            entries.push(parse_element(c, n)?);
        }
    }
    for e in &entries[1..] {
        check_compatible(&entries[0], e)?;
    }
    let mut it = entries.into_iter();
    let (a, b, c, d) = (
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    );
    Ok(CliffordMatrix::new(a, b, c, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn q(s: &str) -> QuadExt {
        parse_scalar(s).unwrap()
    }

    #[test]
    fn scalars() {
        assert_eq!(q("3/6"), QuadExt::from(rat(1, 2)));
        assert_eq!(q("1/2+1/2√5"), QuadExt::new(rat(1, 2), rat(1, 2), 5).unwrap());
        assert_eq!(q("1/2 + 1/2*sqrt(5)"), q("1/2+1/2√5"));
        assert_eq!(q("sqrt(8)"), QuadExt::new(rat(0, 1), rat(2, 1), 2).unwrap());
        assert_eq!(q("√(1/2)"), QuadExt::new(rat(0, 1), rat(1, 2), 2).unwrap());
        assert_eq!(q("(-1+√3)/4"), QuadExt::new(rat(-1, 4), rat(1, 4), 3).unwrap());
        assert!(matches!(
            parse_scalar("√2+√3"),
            Err(ParseError::Scalar(ScalarError::MixedRadicand(..)))
        ));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("1+").is_err());
        assert!(parse_scalar("i").is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["1/2+1/2√5", "-√3", "-1/4-3/4√3", "7", "-22/7", "3/4√2"] {
            assert_eq!(q(s).to_string(), s);
        }
    }

    #[test]
    fn elements() {
        let p = parse_element("(i+j)/2", 2).unwrap();
        assert_eq!(p.coeff(1), &QuadExt::from(rat(1, 2)));
        assert_eq!(p.coeff(2), &QuadExt::from(rat(1, 2)));
        let k = parse_element("e1e2", 2).unwrap();
        assert_eq!(k, parse_element("k", 2).unwrap());
        assert_eq!(parse_element("e21", 2).unwrap(), -k.clone());
        assert_eq!(parse_element("i j", 2).unwrap(), k);
        let x = parse_element("-2i-2j", 2).unwrap();
        assert_eq!(x.coeff(1), &QuadExt::from(rat(-2, 1)));
        assert!(matches!(
            parse_element("k", 1),
            Err(ParseError::UnitOutOfRank { .. })
        ));
        let h = parse_element("(1+e1+e2+e3)/2", 3).unwrap();
        assert_eq!(h.coeffs().len(), 8);
        // printed form parses back
        for s in ["1 - 1/2 e1 + e1e2", "(1/2+1/2√5) + e1", "-e1 - e2"] {
            let e = parse_element(s, 2).unwrap();
            assert_eq!(e.to_string(), s);
        }
    }

    #[test]
    fn points_and_matrices() {
        let p = parse_point("(1/3, 1/5)").unwrap();
        assert_eq!(p.len(), 2);
        assert!(parse_point("(√2, √3)").is_err());
        let m = parse_matrix("[[1,(i+j)/2],[-2i-2j,3]]", 2).unwrap();
        assert_eq!(m.d, El::from_int(2, 3));
        assert!(parse_matrix("[[1,2],[3]]", 0).is_err());
        assert_eq!(split_top_level("(a,b),c", ','), vec!["(a,b)", "c"]);
    }
}
