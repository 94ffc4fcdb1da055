//! Scalar algebras and exact polynomial calculus.
//!
//! Real polynomials extend to entire functions of a split-complex or complex
//! argument by evaluating them there; [`RealPoly::eval`] does exactly that for
//! every [`Scalar`] kind.

mod poly;
mod scalar;
mod series;

pub use poly::{antiderive_from, derive, eval_extension, RealPoly, CANONICAL_EPS};
pub use scalar::{split_mul, ComplexScalar, Scalar, SplitComplex};
pub use series::{Component, TaylorSeries};
