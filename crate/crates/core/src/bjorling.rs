//! Björling problem solver.
//!
//! For a strip `(c, n)` on `[t0, t1]` the solution is `X = Re F` with
//!
//! ```text
//! F(z) = c(z) + κ ∫_{t0}^{z} n(w) × c'(w) dw
//! ```
//!
//! where `κ = k'` (split-complex, timelike surfaces) or `κ = i` (complex,
//! spacelike surfaces). Both `c` and the integral are real polynomials (or
//! series), so `F` and all its derivatives are evaluated exactly at
//! `z = u + κ v`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{lorentz_cross, unit_normalize, Causal, Vec3L};
use crate::split_scalar::{ComplexScalar, Scalar, SplitComplex};
use crate::strips::{CurveL3, Strip, Variant};
use crate::surface::{AxisInfo, DataAxis, Domain, SurfaceJet, SurfaceMap, SurfaceSample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarKind {
    Split,
    Complex,
}

/// The (split-)holomorphic curve `F = c + κ I` with `I = ∫_{t0} n × c'`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicData {
    c: CurveL3,
    integral: CurveL3,
    kind: ScalarKind,
    data_axis: DataAxis,
    t0: f64,
    approx: bool,
    // cached derivative curves
    dc: CurveL3,
    ddc: CurveL3,
    di: CurveL3,
    ddi: CurveL3,
}

pub fn build_holomorphic_data(s: &Strip) -> HolomorphicData {
    let c = s.curve().clone();
    let dc = c.derive();
    let integrand = s.normal().cross(&dc);
    let integral = integrand.antiderive_from(s.t0());
    let kind = match s.variant() {
        Variant::TimelikeSurface => ScalarKind::Split,
        Variant::SpacelikeSurface => ScalarKind::Complex,
    };
    // w = k'z swaps the roles of u and v for spacelike curves
    let data_axis = match (s.variant(), s.curve_character()) {
        (Variant::TimelikeSurface, Causal::Spacelike) => DataAxis::VAxis,
        _ => DataAxis::UAxis,
    };
    HolomorphicData {
        ddc: dc.derive(),
        ddi: integrand.derive(),
        di: integrand,
        dc,
        c,
        integral,
        kind,
        data_axis,
        t0: s.t0(),
        approx: s.is_approx(),
    }
}

/// Real and imaginary parts of a vector of scalars.
fn parts<S: Scalar>(v: [S; 3]) -> (Vec3L, Vec3L) {
    (
        Vec3L::new(v[0].re(), v[1].re(), v[2].re()),
        Vec3L::new(v[0].im(), v[1].im(), v[2].im()),
    )
}

impl HolomorphicData {
    pub fn curve(&self) -> &CurveL3 {
        &self.c
    }

    /// `I(t) = ∫_{t0}^{t} n × c'`, vanishing at `t0`.
    pub fn integral(&self) -> &CurveL3 {
        &self.integral
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn data_axis(&self) -> DataAxis {
        self.data_axis
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn approx_flag(&self) -> bool {
        self.approx
    }

    /// `F(a + κ b)` as (real part, imaginary part) vectors.
    pub fn eval_f(&self, a: f64, b: f64) -> (Vec3L, Vec3L) {
        self.combine(&self.c, &self.integral, a, b)
    }

    fn combine(&self, c: &CurveL3, i: &CurveL3, a: f64, b: f64) -> (Vec3L, Vec3L) {
        match self.kind {
            ScalarKind::Split => {
                let z = SplitComplex::new(a, b);
                let (cr, ci) = parts(c.eval_ext(z));
                let (ir, ii) = parts(i.eval_ext(z));
                // c + k'(ir + k' ii) = (cr + ii) + k'(ci + ir)
                (cr + ii, ci + ir)
            }
            ScalarKind::Complex => {
                let z = ComplexScalar::new(a, b);
                let (cr, ci) = parts(c.eval_ext(z));
                let (ir, ii) = parts(i.eval_ext(z));
                // c + i(ir + i ii) = (cr - ii) + i(ci + ir)
                (cr - ii, ci + ir)
            }
        }
    }

    /// Jet in the chart where the data sits on the first coordinate axis.
    fn jet_standard(&self, a: f64, b: f64) -> SurfaceJet {
        let (x, _) = self.combine(&self.c, &self.integral, a, b);
        let (d_re, d_im) = self.combine(&self.dc, &self.di, a, b);
        let (dd_re, dd_im) = self.combine(&self.ddc, &self.ddi, a, b);
        match self.kind {
            // ∂_b = k' ∂_z: X_b = Im F', X_bb = Re F''
            ScalarKind::Split => SurfaceJet {
                x,
                xu: d_re,
                xv: d_im,
                xuu: dd_re,
                xuv: dd_im,
                xvv: dd_re,
            },
            // ∂_b = i ∂_z: X_b = -Im F', X_bb = -Re F''
            ScalarKind::Complex => SurfaceJet {
                x,
                xu: d_re,
                xv: -d_im,
                xuu: dd_re,
                xuv: -dd_im,
                xvv: -dd_re,
            },
        }
    }
}

impl SurfaceMap for HolomorphicData {
    fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        match self.data_axis {
            DataAxis::UAxis => self.jet_standard(u, v),
            DataAxis::VAxis => {
                let j = self.jet_standard(v, u);
                SurfaceJet {
                    x: j.x,
                    xu: j.xv,
                    xv: j.xu,
                    xuu: j.xvv,
                    xuv: j.xuv,
                    xvv: j.xuu,
                }
            }
        }
    }
}

/// Parameter point of the data axis at curve parameter `t`.
pub fn axis_point(axis: DataAxis, t: f64) -> (f64, f64) {
    match axis {
        DataAxis::UAxis => (t, 0.0),
        DataAxis::VAxis => (0.0, t),
    }
}

/// Samples the Björling solution of `s` on `d`.
///
/// Normals are oriented so that they agree with `+n` at the midpoint of the
/// data interval.
pub fn solve(s: &Strip, d: &Domain) -> Result<SurfaceSample> {
    let data = build_holomorphic_data(s);
    let axis = data.data_axis();
    let approx = data.approx_flag();
    let map: Arc<dyn SurfaceMap> = Arc::new(data);
    let mut sample = SurfaceSample::from_map(*d, Arc::clone(&map), approx)?;
    sample.set_axis(AxisInfo {
        axis,
        interval: s.interval(),
    });

    let tm = s.midpoint();
    let (um, vm) = axis_point(axis, tm);
    let jm = map.jet(um, vm);
    let n_mid = s.normal().eval(tm);
    let sign = unit_normalize(lorentz_cross(jm.xu, jm.xv))
        .map(|nm| nm.dot(n_mid) * n_mid.norm_sqr())
        .unwrap_or(1.0);
    sample.set_normal_sign(if sign < 0.0 { -1.0 } else { 1.0 });

    if sample.iter().all(|(_, n)| n.normal.is_none()) {
        return Err(Error::DegenerateEverywhere);
    }
    Ok(sample)
}

/// Björling interpolation defects along `count` equally spaced data-axis
/// parameters: `(max |X - c|, max |N - n|)` (Euclidean norms).
pub fn interpolation_defects(s: &Strip, sample: &SurfaceSample, count: usize) -> Option<(f64, f64)> {
    let map = sample.source()?;
    let axis = sample.axis()?.axis;
    let [t0, t1] = s.interval();
    let mut worst = (0.0f64, 0.0f64);
    for k in 0..count {
        let r = if count == 1 { 0.5 } else { k as f64 / (count - 1) as f64 };
        let t = t0 * (1.0 - r) + t1 * r;
        let (u, v) = axis_point(axis, t);
        let jet = map.jet(u, v);
        worst.0 = worst.0.max((jet.x - s.curve().eval(t)).euclid_norm());
        let normal = jet.normal()? * sample.normal_sign();
        worst.1 = worst.1.max((normal - s.normal().eval(t)).euclid_norm());
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::Vec3L;

    fn line_x_normal(t0: f64) -> Strip {
        Strip::new(
            CurveL3::from_coeffs(&[0.0], &[0.0], &[0.0, 1.0]),
            CurveL3::constant(Vec3L::E1),
            [t0, 1.0],
            Variant::TimelikeSurface,
        )
        .unwrap()
    }

    fn boosted() -> Strip {
        let one = 1.0f64;
        Strip::new(
            CurveL3::from_coeffs(&[0.0], &[0.0, 1.0], &[0.0]),
            CurveL3::constant(Vec3L::new(one.sinh(), 0.0, one.cosh())),
            [0.0, 1.0],
            Variant::SpacelikeSurface,
        )
        .unwrap()
    }

    #[test]
    fn holomorphic_data_for_timelike_line() {
        let h = build_holomorphic_data(&line_x_normal(0.0));
        assert_eq!(h.kind(), ScalarKind::Split);
        assert_eq!(h.data_axis(), DataAxis::UAxis);
        assert_eq!(h.integral(), &CurveL3::from_coeffs(&[0.0], &[0.0, -1.0], &[0.0]));
        let (re, im) = h.eval_f(0.4, -0.7);
        // (0,0,z) + k' z (0,-1,0) at z = 0.4 - 0.7k'
        assert_eq!(re, Vec3L::new(0.0, 0.7, 0.4));
        assert_eq!(im, Vec3L::new(0.0, -0.4, -0.7));
    }

    #[test]
    fn holomorphic_data_for_spacelike_variant() {
        let one = 1.0f64;
        let h = build_holomorphic_data(&boosted());
        assert_eq!(h.kind(), ScalarKind::Complex);
        let expected = CurveL3::from_coeffs(&[0.0, -one.cosh()], &[0.0], &[0.0, -one.sinh()]);
        assert_eq!(h.integral(), &expected);
    }

    #[test]
    fn integral_vanishes_at_t0() {
        for t0 in [-1.0, -0.25, 0.0] {
            let h = build_holomorphic_data(&line_x_normal(t0));
            assert_eq!(h.integral().eval(t0).max_abs(), 0.0);
        }
    }

    #[test]
    fn timelike_plane_solution_is_exact() {
        let s = line_x_normal(-1.0);
        let sample = solve(&s, &Domain::rect(-1.0, 1.0, -1.0, 1.0, 21, 21)).unwrap();
        for (_, n) in sample.iter() {
            assert_eq!(n.jet.x, Vec3L::new(0.0, -n.v, n.u));
            assert_eq!(n.normal, Some(Vec3L::E1));
        }
    }

    #[test]
    fn spacelike_plane_solution() {
        let one = 1.0f64;
        let s = boosted();
        let sample = solve(&s, &Domain::rect(0.0, 1.0, -0.5, 0.5, 11, 11)).unwrap();
        for (_, n) in sample.iter() {
            let want = Vec3L::new(n.v * one.cosh(), n.u, n.v * one.sinh());
            assert!((n.jet.x - want).max_abs() < 1e-15);
            let normal = n.normal.unwrap();
            assert!((normal - s.normal().eval(n.u)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn spacelike_curve_uses_v_axis() {
        // spacelike c in the timelike variant: c = (0, t, 0), n = e1
        let s = Strip::new(
            CurveL3::from_coeffs(&[0.0], &[0.0, 1.0], &[0.0]),
            CurveL3::constant(Vec3L::E1),
            [-1.0, 1.0],
            Variant::TimelikeSurface,
        )
        .unwrap();
        let sample = solve(&s, &Domain::rect(-0.5, 0.5, -1.0, 1.0, 11, 21)).unwrap();
        assert_eq!(sample.axis().unwrap().axis, DataAxis::VAxis);
        let (dx, dn) = interpolation_defects(&s, &sample, 101).unwrap();
        assert!(dx <= 1e-12 && dn <= 1e-9);
        assert_eq!(sample.data_axis_nodes().len(), 21);
    }
}
