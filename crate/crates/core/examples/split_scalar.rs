//! Split-complex and complex arithmetic, and evaluating one real polynomial
//! in both algebras.

use bjbi::split_scalar::{RealPoly, Scalar, SplitComplex, TaylorSeries};
use bjbi::ComplexScalar;

fn main() {
    let k = SplitComplex::K;
    println!("k' * k' = {}", k * k);
    let z = SplitComplex::new(1.5, 0.5);
    println!("z = {z}, conj = {}, norm_sqr = {}", z.conj(), z.norm_sqr());

    // (1 + k')(1 - k') = 0: the split algebra has zero divisors
    let p = SplitComplex::new(1.0, 1.0);
    println!("(1+k')(1-k') = {}, zero divisor: {}", p * p.conj(), p.is_zero_divisor());

    let i = ComplexScalar::I;
    println!("i * i = {}", i * i);

    // p(t) = 1 - 2t + t^3 evaluated on the real line and off it
    let poly = RealPoly::new(vec![1.0, -2.0, 0.0, 1.0]);
    println!("p(0.5) = {}", poly.eval_real(0.5));
    println!("p(0.5 + 0.25 k') = {}", poly.eval(SplitComplex::new(0.5, 0.25)));
    println!("p(0.5 + 0.25 i)  = {}", poly.eval(ComplexScalar::new(0.5, 0.25)));
    println!("p' = {:?}, antiderivative from 0 = {:?}", poly.derive().coeffs(), poly.antiderive_from(0.0).coeffs());

    // Truncated Taylor series stand in for non-polynomial data
    let ch = TaylorSeries::cosh(0.0, 16);
    let w = ch.eval(SplitComplex::new(0.3, 0.2));
    println!("cosh(0.3 + 0.2 k') ~ {w} (exact re {:.15})", 0.3f64.cosh() * 0.2f64.cosh());
    let _ = w.re();
}
