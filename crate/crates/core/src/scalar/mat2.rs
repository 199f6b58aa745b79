use std::fmt;

use num_traits::{One, Zero};

/// A 2×2 matrix over a commutative ring (real and complex Möbius words).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2 {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            d: f(&self.d),
        }
    }
}

impl<T> Mat2<T>
where
    T: Clone + Zero + One + std::ops::Mul<Output = T> + std::ops::Sub<Output = T>,
{

    pub fn identity() -> Self {
        Mat2 {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = |x: &T, y: &T| x.clone() * y.clone();
        Mat2 {
            a: m(&self.a, &o.a) + m(&self.b, &o.c),
            b: m(&self.a, &o.b) + m(&self.b, &o.d),
            c: m(&self.c, &o.a) + m(&self.d, &o.c),
            d: m(&self.c, &o.b) + m(&self.d, &o.d),
        }
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
