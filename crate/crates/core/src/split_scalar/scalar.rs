//! Two-dimensional real algebras used to extend real-analytic data off the
//! real line: split-complex numbers (`k'^2 = +1`) and ordinary complex
//! numbers (`i^2 = -1`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Common surface of the scalar kinds a real polynomial can be evaluated at.
pub trait Scalar:
    Copy
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_real(x: f64) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;

    /// Multiply by a real number.
    fn scale(self, k: f64) -> Self;
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

/// A split-complex number `re + k' im` with `k' * k' = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SplitComplex {
    pub re: f64,
    pub im: f64,
}

impl SplitComplex {
    pub const K: SplitComplex = SplitComplex { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// `z * conj(z) = u^2 - v^2`; may be negative.
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re - self.im * self.im
    }

    /// True on the null cone `|u| = |v|`, where `z` has no inverse.
    pub fn is_zero_divisor(self) -> bool {
        self.re.abs() == self.im.abs()
    }

    /// Multiplication by `k'`, which swaps the two parts.
    pub fn mul_k(self) -> Self {
        Self::new(self.im, self.re)
    }
}

/// Product law `(a + k'b)(c + k'd) = (ac + bd) + k'(ad + bc)`.
pub fn split_mul(a: SplitComplex, b: SplitComplex) -> SplitComplex {
    SplitComplex::new(a.re * b.re + a.im * b.im, a.re * b.im + a.im * b.re)
}

impl Add for SplitComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for SplitComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for SplitComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        split_mul(self, o)
    }
}

impl Neg for SplitComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for SplitComplex {
    fn from_real(x: f64) -> Self {
        Self::new(x, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }
}

impl fmt::Display for SplitComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}k'", self.re, self.im)
    }
}

/// An ordinary complex number `re + i im`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexScalar {
    pub re: f64,
    pub im: f64,
}

impl ComplexScalar {
    pub const I: ComplexScalar = ComplexScalar { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn mul_i(self) -> Self {
        Self::new(-self.im, self.re)
    }
}

impl Add for ComplexScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for ComplexScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for ComplexScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Neg for ComplexScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for ComplexScalar {
    fn from_real(x: f64) -> Self {
        Self::new(x, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn k_squared_is_one() {
        let k = SplitComplex::K;
        assert_eq!(split_mul(k, k), SplitComplex::new(1.0, 0.0));
    }

    #[test]
    fn null_cone_product_vanishes() {
        let p = split_mul(SplitComplex::new(1.0, 1.0), SplitComplex::new(1.0, -1.0));
        assert_eq!(p, SplitComplex::new(0.0, 0.0));
        assert!(SplitComplex::new(1.0, 1.0).is_zero_divisor());
        assert!(!SplitComplex::new(1.0, 0.5).is_zero_divisor());
    }

    #[test]
    fn hand_expanded_product() {
        let p = split_mul(SplitComplex::new(2.0, 1.0), SplitComplex::new(1.0, 3.0));
        assert_eq!(p, SplitComplex::new(5.0, 7.0));
    }

    #[test]
    fn conjugate_norms() {
        let z = SplitComplex::new(1.0, 2.0);
        assert_eq!((z * z.conj()).re, -3.0);
        assert_eq!(z.norm_sqr(), -3.0);
        let w = ComplexScalar::new(1.0, 2.0);
        assert_eq!((w * w.conj()).re, 5.0);
        assert_eq!(ComplexScalar::I * ComplexScalar::I, ComplexScalar::new(-1.0, 0.0));
    }

    // Small integers keep every product exact in f64, so the ring axioms can
    // be asserted with equality.
    fn small() -> impl Strategy<Value = f64> {
        (-64i32..64).prop_map(f64::from)
    }

    proptest! {
        #[test]
        fn split_ring_axioms(a in small(), b in small(), c in small(), d in small(), e in small(), f in small()) {
            let x = SplitComplex::new(a, b);
            let y = SplitComplex::new(c, d);
            let w = SplitComplex::new(e, f);
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x * y) * w, x * (y * w));
            prop_assert_eq!(x * (y + w), x * y + x * w);
        }

        #[test]
        fn complex_ring_axioms(a in small(), b in small(), c in small(), d in small(), e in small(), f in small()) {
            let x = ComplexScalar::new(a, b);
            let y = ComplexScalar::new(c, d);
            let w = ComplexScalar::new(e, f);
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x * y) * w, x * (y * w));
            prop_assert_eq!(x * (y + w), x * y + x * w);
        }
    }
}
