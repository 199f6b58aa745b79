use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::CliffordElement;
use crate::scalar::{rat, Rational};

type El = CliffordElement<Rational>;

fn h() -> El {
    El::vector(3, &[rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)])
}

fn is_z8(x: &El) -> bool {
    x.coeffs().iter().all(|c| c.is_integer())
}

fn parity_mask(x: &El) -> Option<u8> {
    let mut m = 0u8;
    for (i, c) in x.coeffs().iter().enumerate() {
        if !c.is_integer() {
            return None;
        }
        if c.to_integer() % 2 != 0.into() {
            m |= 1 << i;
        }
    }
    Some(m)
}

/// The `GF(2)`-span of `2h e_I mod 2` over all eight blades: `z ∈ Z⁸ + hZ⁸`
/// iff `2z` is integral with parity pattern in this span.
fn span() -> &'static [bool; 256] {
    static S: OnceLock<[bool; 256]> = OnceLock::new();
    S.get_or_init(|| {
        let two_h = h().scale(&rat(2, 1));
        let gens: Vec<u8> = (0..8)
            .map(|i| parity_mask(&(two_h.clone() * El::blade(3, i))).expect("integral"))
            .collect();
        let mut s = [false; 256];
        s[0] = true;
        for g in gens {
            for m in 0..256usize {
                if s[m] {
                    s[m ^ g as usize] = true;
                }
            }
        }
        s
    })
}

pub fn in_z8_plus_hz8(x: &El) -> bool {
    parity_mask(&x.scale(&rat(2, 1)))
        .map(|m| span()[m as usize])
        .unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzReport {
    /// `h² − h ∈ Z⁸`.
    pub h_squared_equiv_h: bool,
    /// `e_i h − h e_i ∈ Z⁸` for `i = 1, 2, 3`.
    pub commutes: [bool; 3],
    pub samples: usize,
    pub violations: Vec<String>,
}

impl HurwitzReport {
    pub fn ok(&self) -> bool {
        self.h_squared_equiv_h && self.commutes.iter().all(|&b| b) && self.violations.is_empty()
    }
}

fn random_element(rng: &mut ChaCha8Rng) -> El {
    let mut int8 = || {
        El::from_coeffs(
            3,
            (0..8).map(|_| Rational::from_integer(rng.gen_range(-3..=3).into())).collect(),
        )
    };
    let a = int8();
    let b = int8();
    a + h() * b
}

/// Exact closure check of `Z⁸ + hZ⁸` under multiplication.
pub fn hurwitz_closure_check(samples: usize, seed: u64) -> HurwitzReport {
    let hh = h();
    let h_squared_equiv_h = is_z8(&(hh.clone() * hh.clone() - hh.clone()));
    let commutes = [1, 2, 3].map(|i| {
        let e = El::e(3, i);
        is_z8(&(e.clone() * hh.clone() - hh.clone() * e))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let x = random_element(&mut rng);
        let y = random_element(&mut rng);
        let p = x.clone() * y.clone();
        if !in_z8_plus_hz8(&p) {
            violations.push(format!("({x})·({y}) = {p}"));
        }
    }
    HurwitzReport {
        h_squared_equiv_h,
        commutes,
        samples,
        violations,
    }
}
