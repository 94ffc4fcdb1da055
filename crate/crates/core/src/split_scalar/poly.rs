use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::scalar::Scalar;

/// Coefficients below this magnitude are dropped after arithmetic.
pub const CANONICAL_EPS: f64 = 1e-14;

/// Real polynomial with ascending coefficients.
///
/// The stored form is canonical: the highest coefficient is nonzero, or the
/// list is empty for the zero polynomial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    /// Builds a polynomial from user coefficients, trimming exact trailing zeros.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `(t - a)`, the monic linear factor.
    pub fn linear(a: f64) -> Self {
        Self::new(vec![-a, 1.0])
    }

    /// Drops coefficients below [`CANONICAL_EPS`] and trims.
    fn canonical(mut coeffs: Vec<f64>) -> Self {
        for c in coeffs.iter_mut() {
            if c.abs() < CANONICAL_EPS {
                *c = 0.0;
            }
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation at any scalar kind; at a real argument this is plain
    /// real evaluation.
    pub fn eval<S: Scalar>(&self, z: S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::from_real(0.0), |acc, &c| acc * z + S::from_real(c))
    }

    pub fn eval_real(&self, t: f64) -> f64 {
        self.eval(t)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::canonical(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derive(&self) -> Self {
        Self::canonical(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative that vanishes at `t0`.
    pub fn antiderive_from(&self, t0: f64) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(0.0);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / (k as f64 + 1.0)),
        );
        let mut p = Self::new(out);
        let at = p.eval_real(t0);
        if p.coeffs.is_empty() {
            return p;
        }
        p.coeffs[0] -= at;
        Self::canonical(p.coeffs)
    }

    /// Re-expands `p(t)` as `q(s)` with `s = t - center`.
    pub fn shifted(&self, center: f64) -> Self {
        // q(s) = p(s + center), by Horner over polynomials in s
        let s_plus_c = Self::new(vec![center, 1.0]);
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * &s_plus_c) + &Self::constant(c);
        }
        acc
    }

    /// Keeps terms of degree `<= order`.
    pub fn truncated(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).copied().collect())
    }
}

impl From<Vec<f64>> for RealPoly {
    fn from(v: Vec<f64>) -> Self {
        Self::new(v)
    }
}

impl<'a> Add<&'a RealPoly> for &'a RealPoly {
    type Output = RealPoly;
    fn add(self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPoly::canonical((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a RealPoly> for &'a RealPoly {
    type Output = RealPoly;
    fn sub(self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPoly::canonical((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a RealPoly> for &'a RealPoly {
    type Output = RealPoly;
    fn mul(self, o: &RealPoly) -> RealPoly {
        if self.is_zero() || o.is_zero() {
            return RealPoly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly::canonical(out)
    }
}

impl Neg for &RealPoly {
    type Output = RealPoly;
    fn neg(self) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}t")?,
                _ => write!(f, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Free-function form of [`RealPoly::eval`].
pub fn eval_extension<S: Scalar>(p: &RealPoly, z: S) -> S {
    p.eval(z)
}

pub fn derive(p: &RealPoly) -> RealPoly {
    p.derive()
}

pub fn antiderive_from(p: &RealPoly, t0: f64) -> RealPoly {
    p.antiderive_from(t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split_scalar::{ComplexScalar, SplitComplex};
    use proptest::prelude::*;

    #[test]
    fn canonical_form_trims() {
        assert_eq!(RealPoly::new(vec![1.0, 2.0, 0.0, 0.0]).coeffs(), &[1.0, 2.0]);
        assert!(RealPoly::new(vec![0.0, 0.0]).is_zero());
        let a = RealPoly::new(vec![1.0, 1.0]);
        let b = RealPoly::new(vec![0.0, 1.0]);
        assert_eq!((&a - &b).coeffs(), &[1.0]);
        assert_eq!((&a - &a).degree(), None);
    }

    #[test]
    fn split_square() {
        let p = RealPoly::new(vec![0.0, 0.0, 1.0]);
        let (u, v) = (1.5, -0.25);
        let z = p.eval(SplitComplex::new(u, v));
        assert_eq!(z, SplitComplex::new(u * u + v * v, 2.0 * u * v));
    }

    #[test]
    fn complex_square() {
        let p = RealPoly::new(vec![0.0, 0.0, 1.0]);
        let (u, v) = (1.5, -0.25);
        let z = p.eval(ComplexScalar::new(u, v));
        assert_eq!(z, ComplexScalar::new(u * u - v * v, 2.0 * u * v));
    }

    #[test]
    fn constant_is_constant() {
        let p = RealPoly::constant(3.25);
        assert_eq!(p.eval(SplitComplex::new(7.0, -2.0)), SplitComplex::new(3.25, 0.0));
        assert_eq!(p.eval(ComplexScalar::new(7.0, -2.0)), ComplexScalar::new(3.25, 0.0));
    }

    #[test]
    fn derive_and_antiderive() {
        let cube = RealPoly::new(vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(cube.derive().coeffs(), &[0.0, 0.0, 3.0]);
        let sq3 = RealPoly::new(vec![0.0, 0.0, 3.0]);
        assert_eq!(sq3.antiderive_from(0.0).coeffs(), &[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(RealPoly::constant(1.0).antiderive_from(2.0).coeffs(), &[-2.0, 1.0]);
        assert!(RealPoly::zero().antiderive_from(1.0).is_zero());
    }

    #[test]
    fn shift_reexpands() {
        let p = RealPoly::new(vec![1.0, -2.0, 0.5, 3.0]);
        let q = p.shifted(0.75);
        for t in [-1.0, 0.0, 0.3, 2.0] {
            assert!((p.eval_real(t) - q.eval_real(t - 0.75)).abs() < 1e-12);
        }
    }

    fn poly_strategy() -> impl Strategy<Value = RealPoly> {
        prop::collection::vec(-3.0f64..3.0, 0..7).prop_map(RealPoly::new)
    }

    proptest! {
        #[test]
        fn antiderive_vanishes_and_inverts(p in poly_strategy(), t0 in -2.0f64..2.0) {
            let a = p.antiderive_from(t0);
            prop_assert!(a.eval_real(t0).abs() < 1e-12);
            let back = a.derive();
            for k in 0..p.coeffs().len().max(back.coeffs().len()) {
                prop_assert!((back.coeff(k) - p.coeff(k)).abs() < 1e-12);
            }
        }

        #[test]
        fn real_axis_restriction(p in poly_strategy(), t in -2.0f64..2.0) {
            let z = p.eval(SplitComplex::new(t, 0.0));
            prop_assert_eq!(z.im, 0.0);
            prop_assert_eq!(z.re, p.eval_real(t));
            let w = p.eval(ComplexScalar::new(t, 0.0));
            prop_assert_eq!(w.im, 0.0);
        }

        // Split Cauchy-Riemann: Re_u = Im_v and Re_v = Im_u, checked by
        // central differences against the exact derivative.
        #[test]
        fn split_cauchy_riemann(p in poly_strategy(), u in -1.5f64..1.5, v in -1.5f64..1.5) {
            let h = 1e-5;
            let f = |u: f64, v: f64| p.eval(SplitComplex::new(u, v));
            let du = (f(u + h, v) - f(u - h, v)).scale(0.5 / h);
            let dv = (f(u, v + h) - f(u, v - h)).scale(0.5 / h);
            let exact = p.derive().eval(SplitComplex::new(u, v));
            let scale = 1.0 + p.max_abs_coeff() * 50.0;
            prop_assert!((du.re - dv.im).abs() < 1e-8 * scale);
            prop_assert!((du.im - dv.re).abs() < 1e-8 * scale);
            prop_assert!((du.re - exact.re).abs() < 1e-8 * scale);
            prop_assert!((dv.re - exact.im).abs() < 1e-8 * scale);
        }
    }
}
