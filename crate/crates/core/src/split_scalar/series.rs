use serde::{Deserialize, Serialize};

use super::poly::RealPoly;
use super::scalar::Scalar;

/// Truncated Taylor expansion about `center`, stored as a polynomial in
/// `s = t - center`.
///
/// Evaluation error is not certified; anything derived from a series is
/// marked approximate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    poly: RealPoly,
    center: f64,
    order: usize,
}

impl TaylorSeries {
    pub fn new(coeffs: Vec<f64>, center: f64, order: usize) -> Self {
        Self {
            poly: RealPoly::new(coeffs).truncated(order),
            center,
            order,
        }
    }

    /// Re-expands a polynomial about `center`. The order is raised to the
    /// polynomial's degree so that nothing is lost.
    pub fn from_poly(p: &RealPoly, center: f64, order: usize) -> Self {
        let order = order.max(p.degree().unwrap_or(0));
        Self {
            poly: p.shifted(center),
            center,
            order,
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        self.poly.coeffs()
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn approx_flag(&self) -> bool {
        true
    }

    /// The truncated polynomial in the shifted variable.
    pub fn shifted_poly(&self) -> &RealPoly {
        &self.poly
    }

    pub fn eval<S: Scalar>(&self, z: S) -> S {
        self.poly.eval(z - S::from_real(self.center))
    }

    pub fn derive(&self) -> Self {
        Self {
            poly: self.poly.derive(),
            center: self.center,
            order: self.order.saturating_sub(1),
        }
    }

    pub fn antiderive_from(&self, t0: f64) -> Self {
        Self {
            poly: self.poly.antiderive_from(t0 - self.center),
            center: self.center,
            order: self.order + 1,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let o = o.recentered(self.center);
        Self {
            poly: &self.poly + &o.poly,
            center: self.center,
            order: self.order.min(o.order),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let o = o.recentered(self.center);
        let order = self.order.min(o.order);
        Self {
            poly: (&self.poly * &o.poly).truncated(order),
            center: self.center,
            order,
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            poly: self.poly.scale(k),
            center: self.center,
            order: self.order,
        }
    }

    fn recentered(&self, center: f64) -> Self {
        if center == self.center {
            return self.clone();
        }
        Self {
            poly: self.poly.shifted(center - self.center).truncated(self.order),
            center,
            order: self.order,
        }
    }

    /// `self^alpha` for a series whose constant term is positive, via the
    /// recurrence `f' g = alpha g' f`.
    pub fn powf(&self, alpha: f64) -> Option<Self> {
        let g: Vec<f64> = (0..=self.order).map(|k| self.poly.coeff(k)).collect();
        if g[0] <= 0.0 {
            return None;
        }
        let mut f = vec![0.0; self.order + 1];
        f[0] = g[0].powf(alpha);
        for n in 1..=self.order {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += (alpha * k as f64 - (n - k) as f64) * g[k] * f[n - k];
            }
            f[n] = acc / (n as f64 * g[0]);
        }
        Some(Self::new(f, self.center, self.order))
    }

    pub fn cos(center: f64, order: usize) -> Self {
        Self::trig(center, order, |k| match k % 4 {
            0 => center.cos(),
            1 => -center.sin(),
            2 => -center.cos(),
            _ => center.sin(),
        })
    }

    pub fn sin(center: f64, order: usize) -> Self {
        Self::trig(center, order, |k| match k % 4 {
            0 => center.sin(),
            1 => center.cos(),
            2 => -center.sin(),
            _ => -center.cos(),
        })
    }

    pub fn cosh(center: f64, order: usize) -> Self {
        Self::trig(center, order, |k| {
            if k % 2 == 0 {
                center.cosh()
            } else {
                center.sinh()
            }
        })
    }

    pub fn sinh(center: f64, order: usize) -> Self {
        Self::trig(center, order, |k| {
            if k % 2 == 0 {
                center.sinh()
            } else {
                center.cosh()
            }
        })
    }

    // k-th coefficient = (k-th derivative at center) / k!
    fn trig(center: f64, order: usize, deriv: impl Fn(usize) -> f64) -> Self {
        let mut fact = 1.0;
        let coeffs = (0..=order)
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                deriv(k) / fact
            })
            .collect();
        Self::new(coeffs, center, order)
    }
}

/// One coordinate function of a curve: an exact polynomial or a truncated
/// Taylor series.
#[derive(Clone, Debug, PartialEq)]
pub enum Component {
    Poly(RealPoly),
    Taylor(TaylorSeries),
}

impl Component {
    pub fn is_approx(&self) -> bool {
        matches!(self, Component::Taylor(_))
    }

    pub fn eval<S: Scalar>(&self, z: S) -> S {
        match self {
            Component::Poly(p) => p.eval(z),
            Component::Taylor(s) => s.eval(z),
        }
    }

    pub fn eval_real(&self, t: f64) -> f64 {
        self.eval(t)
    }

    pub fn derive(&self) -> Self {
        match self {
            Component::Poly(p) => Component::Poly(p.derive()),
            Component::Taylor(s) => Component::Taylor(s.derive()),
        }
    }

    pub fn antiderive_from(&self, t0: f64) -> Self {
        match self {
            Component::Poly(p) => Component::Poly(p.antiderive_from(t0)),
            Component::Taylor(s) => Component::Taylor(s.antiderive_from(t0)),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        match self {
            Component::Poly(p) => Component::Poly(p.scale(k)),
            Component::Taylor(s) => Component::Taylor(s.scale(k)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Component::Poly(a), Component::Poly(b)) => Component::Poly(a + b),
            (Component::Taylor(a), Component::Taylor(b)) => Component::Taylor(a.add(b)),
            (Component::Taylor(a), Component::Poly(b)) => {
                Component::Taylor(a.add(&TaylorSeries::from_poly(b, a.center(), a.order())))
            }
            (Component::Poly(a), Component::Taylor(b)) => {
                Component::Taylor(TaylorSeries::from_poly(a, b.center(), b.order()).add(b))
            }
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Component::Poly(a), Component::Poly(b)) => Component::Poly(a * b),
            (Component::Taylor(a), Component::Taylor(b)) => Component::Taylor(a.mul(b)),
            (Component::Taylor(a), Component::Poly(b)) => {
                Component::Taylor(a.mul(&TaylorSeries::from_poly(b, a.center(), a.order())))
            }
            (Component::Poly(a), Component::Taylor(b)) => {
                Component::Taylor(TaylorSeries::from_poly(a, b.center(), b.order()).mul(b))
            }
        }
    }

    /// Largest coefficient magnitude, used as a scale for identity checks.
    pub fn max_abs_coeff(&self) -> f64 {
        match self {
            Component::Poly(p) => p.max_abs_coeff(),
            Component::Taylor(s) => s.shifted_poly().max_abs_coeff(),
        }
    }

    /// Coefficients of the underlying polynomial (shifted for series).
    pub fn coeffs(&self) -> &[f64] {
        match self {
            Component::Poly(p) => p.coeffs(),
            Component::Taylor(s) => s.coeffs(),
        }
    }
}

impl From<RealPoly> for Component {
    fn from(p: RealPoly) -> Self {
        Component::Poly(p)
    }
}

impl From<TaylorSeries> for Component {
    fn from(s: TaylorSeries) -> Self {
        Component::Taylor(s)
    }
}
