use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use super::ModError;
use crate::clifford::{CliffordElement, CliffordMatrix};
use crate::scalar::{rat, Rational};
use crate::spaces::{CfSystem, IwasawaPoint, Lattice};

type El = CliffordElement<Rational>;
type Mat = CliffordMatrix<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    /// `[[0, −1], [1, 0]]`.
    Inv,
    /// `[[1, v], [0, 1]]`.
    Trans(El),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Inv => f.write_str("Inv"),
            Token::Trans(v) => write!(f, "Trans({v})"),
        }
    }
}

/// A product of generators, read left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord {
    pub rank: usize,
    pub tokens: Vec<Token>,
}

impl GeneratorWord {
    pub fn new(rank: usize, tokens: Vec<Token>) -> Self {
        GeneratorWord { rank, tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token_matrix(&self, t: &Token) -> Mat {
        match t {
            Token::Inv => Mat::inversion(self.rank),
            Token::Trans(v) => Mat::translation(v.clone()),
        }
    }

    pub fn product(&self) -> Mat {
        self.tokens
            .iter()
            .fold(Mat::identity(self.rank), |acc, t| acc * self.token_matrix(t))
    }

    /// Merge adjacent translations, drop `Trans(0)`, and cancel `Inv⁴ = Id`.
    pub fn simplify(&self) -> GeneratorWord {
        let mut out: Vec<Token> = Vec::with_capacity(self.tokens.len());
        for t in &self.tokens {
            match (out.last(), t) {
                (Some(Token::Trans(u)), Token::Trans(v)) => {
                    let w = u.clone() + v.clone();
                    out.pop();
                    if !w.is_zero() {
                        out.push(Token::Trans(w));
                    }
                }
                (_, Token::Trans(v)) if v.is_zero() => {}
                _ => out.push(t.clone()),
            }
            let n = out.len();
            if n >= 4 && out[n - 4..].iter().all(|t| *t == Token::Inv) {
                out.truncate(n - 4);
            }
        }
        GeneratorWord::new(self.rank, out)
    }

    /// The inverse word (`Inv⁻¹ = Inv³`, `Trans(v)⁻¹ = Trans(−v)`).
    pub fn inverse(&self) -> GeneratorWord {
        let mut out = Vec::new();
        for t in self.tokens.iter().rev() {
            match t {
                Token::Inv => out.extend([Token::Inv, Token::Inv, Token::Inv]),
                Token::Trans(v) => out.push(Token::Trans(-v.clone())),
            }
        }
        GeneratorWord::new(self.rank, out)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return f.write_str("Id");
        }
        let s: Vec<String> = self.tokens.iter().map(|t| t.to_string()).collect();
        f.write_str(&s.join(" · "))
    }
}

/// `Inv · Trans(−b) · Inv · Trans(−a) · Inv · Trans(−b) = diag(a, b)` for `ab = 1`.
pub fn hidden_symmetry_word(a: &El, b: &El) -> Result<GeneratorWord, ModError> {
    let n = a.rank();
    if a.clone() * b.clone() != El::one(n) {
        return Err(ModError::NotInverses);
    }
    Ok(GeneratorWord::new(
        n,
        vec![
            Token::Inv,
            Token::Trans(-b.clone()),
            Token::Inv,
            Token::Trans(-a.clone()),
            Token::Inv,
            Token::Trans(-b.clone()),
        ],
    ))
}

/// Norm-one vectors of the digit lattice.
pub fn lattice_units(sys: &CfSystem) -> Vec<El> {
    let dim = sys.space.dim();
    let n = dim - 1;
    let mut out = Vec::new();
    for k in 0..dim {
        for s in [1, -1] {
            let mut c = vec![Rational::zero(); dim];
            c[k] = Rational::from_integer(s.into());
            out.push(El::vector(n, &c));
        }
    }
    if sys.lattice == Lattice::Hurwitz {
        for mask in 0..16 {
            let c: Vec<Rational> = (0..4)
                .map(|k| if mask & (1 << k) != 0 { rat(-1, 2) } else { rat(1, 2) })
                .collect();
            out.push(El::vector(n, &c));
        }
    }
    out
}

/// A generator word for `diag(a, (a*)⁻¹)`, `‖a‖ = 1`, as a product of
/// hidden-symmetry words for lattice units (breadth-first, so the shortest
/// factorisation of `a` into units is used; `k = ij` needs two).
pub fn unit_diagonal_word(sys: &CfSystem, a: &El) -> Result<GeneratorWord, ModError> {
    let n = a.rank();
    let units = lattice_units(sys);
    let mut seen: HashMap<El, Vec<usize>> = HashMap::new();
    seen.insert(El::one(n), vec![]);
    let mut frontier = vec![El::one(n)];
    for _depth in 0..=6 {
        if let Some(path) = seen.get(a) {
            let mut tokens = Vec::new();
            for &i in path {
                let u = &units[i];
                tokens.extend(hidden_symmetry_word(u, &u.inverse()?)?.tokens);
            }
            return Ok(GeneratorWord::new(n, tokens));
        }
        let mut next = Vec::new();
        for x in &frontier {
            let path = seen[x].clone();
            for (i, u) in units.iter().enumerate() {
                let y = x.clone() * u.clone();
                if !seen.contains_key(&y) {
                    let mut p = path.clone();
                    p.push(i);
                    seen.insert(y.clone(), p);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Err(ModError::NonUnitResidual(a.to_string()))
}

fn norm2(x: &El) -> Result<Rational, ModError> {
    Ok(x.norm_sq()?)
}

fn lattice_point(sys: &CfSystem, v: &El) -> Result<IwasawaPoint<Rational>, ModError> {
    v.to_vector()
        .map(IwasawaPoint::vector)
        .filter(|p| p.space() == sys.space)
        .ok_or_else(|| ModError::NotValidCliffordMatrix(format!("{v} is not a vector")))
}

/// Euclidean reduction of the left column.
///
/// While `c ≠ 0`: if `‖c‖ > ‖a‖` apply `Inv`, otherwise subtract the nearest
/// lattice point `a₀ = [a c⁻¹]`, which gives `‖a − a₀c‖ < ‖c‖`. The pair
/// `(max, min)` of the column norms decreases lexicographically at every
/// translation step (strictly in `max` unless `‖a‖ = ‖c‖`). Once `c = 0`,
/// `Trans(−b d⁻¹)` clears `b` and the unit diagonal that remains is
/// expanded by [`unit_diagonal_word`]. The returned word multiplies to `m`
/// exactly (this is re-checked).
pub fn reduce_to_generators(sys: &CfSystem, m: &Mat) -> Result<GeneratorWord, ModError> {
    let report = m.validate();
    if !report.is_valid() {
        return Err(ModError::NotValidCliffordMatrix(report.failures().join("; ")));
    }
    let n = m.rank();
    let mut cur = m.clone();
    let mut steps = GeneratorWord::new(n, vec![]);
    let col = |m: &Mat| -> Result<(Rational, Rational), ModError> {
        let (x, y) = (norm2(&m.a)?, norm2(&m.c)?);
        Ok(if x >= y { (x, y) } else { (y, x) })
    };
    let mut guard = 0usize;
    while !cur.c.is_zero() {
        guard += 1;
        if guard > 100_000 {
            return Err(ModError::Unsupported("reduction did not terminate".into()));
        }
        let (na, nc) = (norm2(&cur.a)?, norm2(&cur.c)?);
        if nc > na {
            cur = Mat::inversion(n) * cur;
            steps.tokens.push(Token::Inv);
            continue;
        }
        let before = col(&cur)?;
        let q = cur.a.clone() * cur.c.inverse()?;
        let a0 = sys
            .round(&lattice_point(sys, &q)?)
            .map_err(|e| ModError::Unsupported(e.to_string()))?;
        let v = a0.to_clifford().expect("vector model");
        cur = Mat::translation(-v.clone()) * cur;
        steps.tokens.push(Token::Trans(-v));
        let after = col(&cur)?;
        if after >= before {
            return Err(ModError::Unsupported(format!(
                "norm descent violated: {before:?} → {after:?}"
            )));
        }
    }
    let t = cur.b.clone() * cur.d.inverse()?;
    if !t.is_zero() {
        let p = lattice_point(sys, &t)?;
        if !sys.contains(&p) {
            return Err(ModError::NotValidCliffordMatrix(format!("b d⁻¹ = {t} is not a digit")));
        }
        cur = Mat::translation(-t.clone()) * cur;
        steps.tokens.push(Token::Trans(-t));
    }
    if norm2(&cur.a)? != Rational::from_integer(1.into()) {
        return Err(ModError::NonUnitResidual(cur.a.to_string()));
    }
    let diag = unit_diagonal_word(sys, &cur.a)?;
    if diag.product() != cur {
        return Err(ModError::NonUnitResidual(cur.to_string()));
    }
    // `cur = T_k ⋯ T_1 · m`, so `m = T_1⁻¹ ⋯ T_k⁻¹ · cur`
    steps.tokens.reverse();
    let mut word = steps.inverse();
    word.tokens.extend(diag.tokens);
    let word = word.simplify();
    if word.product() != *m {
        return Err(ModError::Unsupported("reduced word does not reproduce the input".into()));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::quat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(k: usize) -> El {
        El::e(2, k)
    }

    #[test]
    fn hidden_symmetry_products() {
        let one = El::one(2);
        let w = hidden_symmetry_word(&one, &one).unwrap();
        assert_eq!(w.product(), Mat::identity(2));
        let w = hidden_symmetry_word(&e(1), &-e(1)).unwrap();
        assert_eq!(w.product(), Mat::diag(e(1), -e(1)));
        assert_eq!(hidden_symmetry_word(&e(1), &e(1)), Err(ModError::NotInverses));
        // k = ij via composition: diag(i, −i)·diag(j, −j) = diag(k, k)
        let wi = hidden_symmetry_word(&quat::i(), &-quat::i()).unwrap();
        let wj = hidden_symmetry_word(&quat::j(), &-quat::j()).unwrap();
        let p = wi.product() * wj.product();
        assert_eq!(p, Mat::diag(quat::k(), quat::k()));
        assert_eq!(p.pseudo_det(), El::one(2));
        // diag(k, k⁻¹) = diag(k, −k) is not a Clifford matrix: k·(−k)* = −1
        assert_ne!(Mat::diag(quat::k(), -quat::k()).pseudo_det(), El::one(2));
    }

    #[test]
    fn all_eight_units() {
        let sys = CfSystem::r3();
        let units = [
            El::one(2),
            -El::one(2),
            quat::i(),
            -quat::i(),
            quat::j(),
            -quat::j(),
            quat::k(),
            -quat::k(),
        ];
        for a in units {
            let w = unit_diagonal_word(&sys, &a).unwrap();
            let d = a.reversion().inverse().unwrap();
            assert_eq!(w.product(), Mat::diag(a.clone(), d), "{a}");
        }
    }

    #[test]
    fn reduce_examples() {
        let sys = CfSystem::r3();
        assert!(reduce_to_generators(&sys, &Mat::identity(2)).unwrap().is_empty());
        let v = El::vector(2, &[1.into(), 1.into(), 0.into()].map(Rational::from_integer));
        let m = Mat::inversion(2) * Mat::translation(v) * Mat::inversion(2);
        let w = reduce_to_generators(&sys, &m).unwrap();
        assert_eq!(w.product(), m);
        let d = Mat::diag(e(1), -e(1));
        let w = reduce_to_generators(&sys, &d).unwrap();
        assert_eq!(w, hidden_symmetry_word(&e(1), &-e(1)).unwrap());
        assert!(reduce_to_generators(&sys, &Mat::diag(El::from_int(2, 2), El::one(2))).is_err());
    }

    fn random_word(rng: &mut ChaCha8Rng, sys: &CfSystem, len: usize) -> GeneratorWord {
        let n = sys.space.dim() - 1;
        let mut tokens = vec![];
        for _ in 0..len {
            if rng.gen_bool(0.5) {
                tokens.push(Token::Inv);
            } else {
                let c: Vec<Rational> = (0..n + 1)
                    .map(|_| Rational::from_integer(rng.gen_range(-3..=3).into()))
                    .collect();
                tokens.push(Token::Trans(El::vector(n, &c)));
            }
        }
        GeneratorWord::new(n, tokens)
    }

    #[test]
    fn random_words_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for sys in [CfSystem::r3(), CfSystem::complex(), CfSystem::real_nearest()] {
            for _ in 0..60 {
                let len = rng.gen_range(0..=12);
                let w = random_word(&mut rng, &sys, len);
                let m = w.product();
                let r = reduce_to_generators(&sys, &m).unwrap();
                assert_eq!(r.product(), m);
            }
        }
    }

    #[test]
    fn hurwitz_words_round_trip() {
        let sys = CfSystem::r4_hurwitz();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let units = lattice_units(&sys);
        for _ in 0..30 {
            let mut tokens = vec![];
            for _ in 0..rng.gen_range(0..=8) {
                if rng.gen_bool(0.5) {
                    tokens.push(Token::Inv);
                } else {
                    let u = units[rng.gen_range(0..units.len())].clone();
                    let k = rng.gen_range(1..=2);
                    tokens.push(Token::Trans(u.scale(&Rational::from_integer(k.into()))));
                }
            }
            let m = GeneratorWord::new(3, tokens).product();
            let r = reduce_to_generators(&sys, &m).unwrap();
            assert_eq!(r.product(), m);
        }
    }

    #[test]
    fn simplify_keeps_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let sys = CfSystem::r3();
        for _ in 0..50 {
            let w = random_word(&mut rng, &sys, 10);
            assert_eq!(w.simplify().product(), w.product());
            assert_eq!((w.product() * w.inverse().product()), Mat::identity(2));
        }
    }
}
