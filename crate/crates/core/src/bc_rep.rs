//! Barbishov–Chernikov soliton surfaces.
//!
//! Two generating functions `F(r)`, `G(s)` give the graph `(ψ, y, z)` with
//!
//! ```text
//! y - z = F(r) - D(s),   y + z = G(s) - B(r),   ψ = A(r) + C(s)
//! ```
//!
//! where `A = ∫ r F'`, `B = ∫ r² F'`, `C = ∫ s G'`, `D = ∫ s² G'`, each
//! normalized to vanish at 0. The surface is the half-sum of the null
//! curves `psi(r)` and `phi(s)`, hence timelike minimal.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{lorentz_cross, unit_normalize, Vec3L};
use crate::split_scalar::RealPoly;
use crate::strips::CurveL3;
use crate::surface::{Domain, SurfaceJet, SurfaceMap, SurfaceSample};

/// Generating pair and sampling grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BCData {
    pub f: RealPoly,
    pub g: RealPoly,
    /// `[r0, r1, s0, s1]`
    pub domain: [f64; 4],
    /// `(nr, ns)`
    pub grid: (usize, usize),
}

/// The four antiderivatives and tangent polynomials of a generating pair.
#[derive(Clone, Debug)]
struct Primitives {
    f: RealPoly,
    g: RealPoly,
    a: RealPoly,
    b: RealPoly,
    c: RealPoly,
    d: RealPoly,
    /// `X_r` components, polynomials in `r`.
    xr: [RealPoly; 3],
    /// `X_s` components, polynomials in `s`.
    xs: [RealPoly; 3],
    xrr: [RealPoly; 3],
    xss: [RealPoly; 3],
}

impl Primitives {
    fn new(f: &RealPoly, g: &RealPoly) -> Self {
        let t = RealPoly::t();
        let t2 = RealPoly::new(vec![0.0, 0.0, 1.0]);
        let half = |p: &RealPoly| p.scale(0.5);
        let one_minus_t2 = RealPoly::new(vec![1.0, 0.0, -1.0]);
        let one_plus_t2 = RealPoly::new(vec![1.0, 0.0, 1.0]);

        let df = f.derive();
        let dg = g.derive();
        let a = (&t * &df).antiderive_from(0.0);
        let b = (&t2 * &df).antiderive_from(0.0);
        let c = (&t * &dg).antiderive_from(0.0);
        let d = (&t2 * &dg).antiderive_from(0.0);
        let xr = [
            &t * &df,
            half(&(&one_minus_t2 * &df)),
            half(&(&one_plus_t2 * &df)).scale(-1.0),
        ];
        let xs = [
            &t * &dg,
            half(&(&one_minus_t2 * &dg)),
            half(&(&one_plus_t2 * &dg)),
        ];
        let xrr = xr.clone().map(|p| p.derive());
        let xss = xs.clone().map(|p| p.derive());
        Self {
            f: f.clone(),
            g: g.clone(),
            a,
            b,
            c,
            d,
            xr,
            xs,
            xrr,
            xss,
        }
    }

    fn point(&self, r: f64, s: f64) -> Vec3L {
        let (f, g) = (self.f.eval_real(r), self.g.eval_real(s));
        let (a, b) = (self.a.eval_real(r), self.b.eval_real(r));
        let (c, d) = (self.c.eval_real(s), self.d.eval_real(s));
        Vec3L::new(a + c, 0.5 * (f - d + g - b), 0.5 * (g - b - f + d))
    }

    fn eval3(p: &[RealPoly; 3], t: f64) -> Vec3L {
        Vec3L::new(p[0].eval_real(t), p[1].eval_real(t), p[2].eval_real(t))
    }
}

impl SurfaceMap for Primitives {
    fn jet(&self, r: f64, s: f64) -> SurfaceJet {
        SurfaceJet {
            x: self.point(r, s),
            xu: Self::eval3(&self.xr, r),
            xv: Self::eval3(&self.xs, s),
            xuu: Self::eval3(&self.xrr, r),
            xuv: Vec3L::ZERO,
            xvv: Self::eval3(&self.xss, s),
        }
    }
}

impl BCData {
    pub fn new(f: RealPoly, g: RealPoly, domain: [f64; 4], grid: (usize, usize)) -> Self {
        Self { f, g, domain, grid }
    }

    pub fn sampling_domain(&self) -> Domain {
        let [r0, r1, s0, s1] = self.domain;
        Domain::rect(r0, r1, s0, s1, self.grid.0, self.grid.1)
    }

    fn primitives(&self) -> Primitives {
        Primitives::new(&self.f, &self.g)
    }
}

pub fn bc_point(d: &BCData, r: f64, s: f64) -> Vec3L {
    d.primitives().point(r, s)
}

/// Samples the surface on the `(r, s)` grid with exact partials; `u = r`,
/// `v = s`.
pub fn bc_surface(d: &BCData) -> Result<SurfaceSample> {
    SurfaceSample::from_map(d.sampling_domain(), Arc::new(d.primitives()), false)
}

/// The same surface as an evaluable map, for callers that resample.
pub fn bc_map(d: &BCData) -> Arc<dyn SurfaceMap> {
    Arc::new(d.primitives())
}

/// Unit normal `X_r x X_s / |.|`. Both tangents carry a scalar factor
/// (`F'(r)`, `G'(s)`), so the result does not depend on `F`, `G` beyond
/// its sign.
pub fn bc_normal(d: &BCData, r: f64, s: f64) -> Result<Vec3L> {
    let p = d.primitives();
    let df = p.f.derive().eval_real(r);
    let dg = p.g.derive().eval_real(s);
    if df == 0.0 || dg == 0.0 {
        return Err(Error::DegeneratePoint { r, s });
    }
    let cross = lorentz_cross(Primitives::eval3(&p.xr, r), Primitives::eval3(&p.xs, s));
    unit_normalize(cross).map_err(|_| Error::DegeneratePoint { r, s })
}

/// The normal components as printed in the literature, reported alongside
/// [`bc_normal`] for comparison.
pub fn printed_normal(r: f64, s: f64) -> Vec3L {
    let q = 1.0 + r * s;
    Vec3L::new((r + s) / q, (r - s) / q, (r * s - 1.0) / q)
}

/// `X = (psi(r) + phi(s)) / 2` with both curves lightlike.
#[derive(Clone, Debug, PartialEq)]
pub struct LightlikePair {
    pub psi: CurveL3,
    pub phi: CurveL3,
}

impl LightlikePair {
    /// Largest coefficient of `<psi',psi'>` and `<phi',phi'>` (both vanish
    /// identically).
    pub fn lightlike_defects(&self) -> (f64, f64) {
        let dp = self.psi.derive();
        let dq = self.phi.derive();
        (dp.inner(&dp).max_abs_coeff(), dq.inner(&dq).max_abs_coeff())
    }

    pub fn reconstruct(&self, r: f64, s: f64) -> Vec3L {
        (self.psi.eval(r) + self.phi.eval(s)) * 0.5
    }
}

pub fn bc_lightlike_decomposition(d: &BCData) -> Result<LightlikePair> {
    if d.f.derive().is_zero() {
        return Err(Error::DegenerateGenerator("F"));
    }
    if d.g.derive().is_zero() {
        return Err(Error::DegenerateGenerator("G"));
    }
    let p = d.primitives();
    let psi = CurveL3::poly(p.a.scale(2.0), &p.f - &p.b, (&p.f + &p.b).scale(-1.0));
    let phi = CurveL3::poly(p.c.scale(2.0), &p.g - &p.d, &p.g + &p.d);
    Ok(LightlikePair { psi, phi })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct BCFile {
    #[serde(rename = "F")]
    f: Vec<f64>,
    #[serde(rename = "G")]
    g: Vec<f64>,
    domain: [f64; 4],
    grid: [usize; 2],
}

pub fn parse_bc(text: &str) -> Result<BCData> {
    let file: BCFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let [r0, r1, s0, s1] = file.domain;
    if !(r0 <= r1 && s0 <= s1) || file.domain.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("bad domain {:?}", file.domain)));
    }
    if file.grid[0] == 0 || file.grid[1] == 0 {
        return Err(Error::Parse("grid counts must be positive".into()));
    }
    Ok(BCData::new(
        RealPoly::new(file.f),
        RealPoly::new(file.g),
        file.domain,
        (file.grid[0], file.grid[1]),
    ))
}

pub fn load_bc(path: impl AsRef<Path>) -> Result<BCData> {
    parse_bc(&std::fs::read_to_string(path)?)
}

pub fn bc_to_toml(d: &BCData) -> String {
    let nonempty = |p: &RealPoly| {
        if p.is_zero() {
            vec![0.0]
        } else {
            p.coeffs().to_vec()
        }
    };
    let file = BCFile {
        f: nonempty(&d.f),
        g: nonempty(&d.g),
        domain: d.domain,
        grid: [d.grid.0, d.grid.1],
    };
    toml::to_string(&file).expect("bc file serializes")
}
