//! Björling data: a curve `c` together with a unit normal field `n` along it.
//!
//! A [`Strip`] can only be built through validation, so every value of the
//! type satisfies the strip invariants:
//!
//! * `<n,n> = +1` (timelike surfaces) or `-1` (spacelike surfaces),
//! * `<c',n> = 0`,
//! * `c` is regular with constant, non-lightlike causal character.
//!
//! Polynomial identities are checked on the coefficients of the product
//! polynomials; sign conditions are checked on a sample grid.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{causal_character, default_tol, Causal, Vec3L};
use crate::split_scalar::{Component, RealPoly, Scalar, TaylorSeries};

/// Per-coefficient tolerance for exact polynomial identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Sampled tolerance for identities involving Taylor series.
pub const SERIES_IDENTITY_TOL: f64 = 1e-9;
/// Interior sample count for sign conditions (endpoints are added).
pub const SIGN_SAMPLES: usize = 512;
/// Order of Taylor expansions emitted by [`geodesic_strip`].
pub const GEODESIC_TAYLOR_ORDER: usize = 16;

/// A curve in L³ with polynomial or Taylor components.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveL3 {
    comps: [Component; 3],
}

impl CurveL3 {
    /// Fails if the components mix polynomial and series representations.
    pub fn new(x: Component, y: Component, z: Component) -> Result<Self> {
        let approx = [x.is_approx(), y.is_approx(), z.is_approx()];
        if approx.iter().any(|a| *a != approx[0]) {
            return Err(Error::Parse(
                "curve components must share one representation".into(),
            ));
        }
        Ok(Self { comps: [x, y, z] })
    }

    pub fn poly(x: RealPoly, y: RealPoly, z: RealPoly) -> Self {
        Self {
            comps: [x.into(), y.into(), z.into()],
        }
    }

    /// Convenience for ascending coefficient lists.
    pub fn from_coeffs(x: &[f64], y: &[f64], z: &[f64]) -> Self {
        Self::poly(
            RealPoly::new(x.to_vec()),
            RealPoly::new(y.to_vec()),
            RealPoly::new(z.to_vec()),
        )
    }

    pub fn taylor(x: TaylorSeries, y: TaylorSeries, z: TaylorSeries) -> Self {
        Self {
            comps: [x.into(), y.into(), z.into()],
        }
    }

    pub fn constant(v: Vec3L) -> Self {
        Self::from_coeffs(&[v.x], &[v.y], &[v.z])
    }

    pub fn component(&self, i: usize) -> &Component {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Component; 3] {
        &self.comps
    }

    pub fn is_approx(&self) -> bool {
        self.comps[0].is_approx()
    }

    pub fn eval(&self, t: f64) -> Vec3L {
        Vec3L::new(
            self.comps[0].eval_real(t),
            self.comps[1].eval_real(t),
            self.comps[2].eval_real(t),
        )
    }

    /// Evaluates the analytic extension at a (split-)complex argument.
    pub fn eval_ext<S: Scalar>(&self, z: S) -> [S; 3] {
        [
            self.comps[0].eval(z),
            self.comps[1].eval(z),
            self.comps[2].eval(z),
        ]
    }

    pub fn derive(&self) -> Self {
        self.map(Component::derive)
    }

    pub fn antiderive_from(&self, t0: f64) -> Self {
        self.map(|c| c.antiderive_from(t0))
    }

    fn map(&self, f: impl Fn(&Component) -> Component) -> Self {
        Self {
            comps: [f(&self.comps[0]), f(&self.comps[1]), f(&self.comps[2])],
        }
    }

    /// `<self, o>` as a component (polynomial identity when both are exact).
    pub fn inner(&self, o: &Self) -> Component {
        let xx = self.comps[0].mul(&o.comps[0]);
        let yy = self.comps[1].mul(&o.comps[1]);
        let zz = self.comps[2].mul(&o.comps[2]);
        xx.add(&yy).sub(&zz)
    }

    /// Componentwise Lorentzian cross product of two curves.
    pub fn cross(&self, o: &Self) -> Self {
        let [ax, ay, az] = &self.comps;
        let [bx, by, bz] = &o.comps;
        Self {
            comps: [
                ay.mul(bz).sub(&az.mul(by)),
                az.mul(bx).sub(&ax.mul(bz)),
                ay.mul(bx).sub(&ax.mul(by)),
            ],
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|c| c.scale(k))
    }

    pub fn scale_by(&self, k: &Component) -> Self {
        self.map(|c| c.mul(k))
    }

    /// Largest coefficient magnitude over the three components.
    pub fn max_abs_coeff(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_abs_coeff()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Timelike minimal surface; the normal is spacelike (`<n,n> = 1`).
    TimelikeSurface,
    /// Spacelike maximal surface; the normal is timelike (`<n,n> = -1`).
    SpacelikeSurface,
}

impl Variant {
    /// Required value of `<n,n>`.
    pub fn normal_norm(self) -> f64 {
        match self {
            Variant::TimelikeSurface => 1.0,
            Variant::SpacelikeSurface => -1.0,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::TimelikeSurface => "timelike_surface",
            Variant::SpacelikeSurface => "spacelike_surface",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst defect observed (coefficient or sampled value).
    pub worst: f64,
    /// Parameter of the worst sample, for sampled checks.
    pub witness_t: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub curve_character: Option<Causal>,
    pub approx: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| match c.witness_t {
                Some(t) => format!("{} (worst {:e} at t = {t})", c.name, c.worst),
                None => format!("{} (worst {:e})", c.name, c.worst),
            })
            .collect()
    }
}

/// A validated Björling strip.
#[derive(Clone, Debug, PartialEq)]
pub struct Strip {
    c: CurveL3,
    n: CurveL3,
    interval: [f64; 2],
    variant: Variant,
    curve_character: Causal,
}

impl Strip {
    pub fn new(c: CurveL3, n: CurveL3, interval: [f64; 2], variant: Variant) -> Result<Self> {
        let report = check_parts(&c, &n, interval, variant);
        if !report.is_valid() {
            return Err(Error::InvalidStrip(Box::new(report)));
        }
        let curve_character = report
            .curve_character
            .expect("valid report carries a causal character");
        Ok(Self {
            c,
            n,
            interval,
            variant,
            curve_character,
        })
    }

    pub fn curve(&self) -> &CurveL3 {
        &self.c
    }

    pub fn normal(&self) -> &CurveL3 {
        &self.n
    }

    pub fn interval(&self) -> [f64; 2] {
        self.interval
    }

    pub fn t0(&self) -> f64 {
        self.interval[0]
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.interval[0] + self.interval[1])
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn curve_character(&self) -> Causal {
        self.curve_character
    }

    pub fn is_approx(&self) -> bool {
        self.c.is_approx() || self.n.is_approx()
    }
}

pub fn validate_strip(s: &Strip) -> ValidationReport {
    check_parts(&s.c, &s.n, s.interval, s.variant)
}

fn sample_points(interval: [f64; 2]) -> impl Iterator<Item = f64> {
    let [a, b] = interval;
    let n = SIGN_SAMPLES + 1;
    (0..=n).map(move |k| {
        let s = k as f64 / n as f64;
        a * (1.0 - s) + b * s
    })
}

/// Checks that `p` vanishes identically; exact on coefficients when `p` is a
/// polynomial, sampled otherwise.
fn identity_check(name: &'static str, p: &Component, interval: [f64; 2]) -> Check {
    match p {
        Component::Poly(poly) => {
            let worst = poly.max_abs_coeff();
            Check {
                name,
                passed: worst <= IDENTITY_TOL,
                worst,
                witness_t: None,
            }
        }
        Component::Taylor(_) => {
            let (worst, at) = sample_points(interval)
                .map(|t| (p.eval_real(t).abs(), t))
                .fold((0.0, interval[0]), |m, x| if x.0 > m.0 { x } else { m });
            Check {
                name,
                passed: worst <= SERIES_IDENTITY_TOL,
                worst,
                witness_t: Some(at),
            }
        }
    }
}

fn check_parts(c: &CurveL3, n: &CurveL3, interval: [f64; 2], variant: Variant) -> ValidationReport {
    let mut checks = Vec::new();
    let approx = c.is_approx() || n.is_approx();
    let [t0, t1] = interval;
    let interval_ok = t0.is_finite() && t1.is_finite() && t0 < t1;
    checks.push(Check {
        name: "interval t0 < t1",
        passed: interval_ok,
        worst: t1 - t0,
        witness_t: None,
    });
    if !interval_ok {
        return ValidationReport {
            checks,
            curve_character: None,
            approx,
        };
    }

    let unit = n.inner(n).sub(&Component::Poly(RealPoly::constant(variant.normal_norm())));
    checks.push(identity_check(
        match variant {
            Variant::TimelikeSurface => "<n,n> = 1",
            Variant::SpacelikeSurface => "<n,n> = -1",
        },
        &unit,
        interval,
    ));

    let dc = c.derive();
    checks.push(identity_check("<c',n> = 0", &dc.inner(n), interval));

    let mut worst_speed = (f64::INFINITY, t0);
    let mut spacelike = 0usize;
    let mut timelike = 0usize;
    let mut lightlike_at = None;
    for t in sample_points(interval) {
        let v = dc.eval(t);
        let e = v.euclid_norm_sqr();
        if e < worst_speed.0 {
            worst_speed = (e, t);
        }
        match causal_character(v, default_tol(v)) {
            Causal::Spacelike => spacelike += 1,
            Causal::Timelike => timelike += 1,
            Causal::Lightlike => {
                if lightlike_at.is_none() {
                    lightlike_at = Some((v.norm_sqr(), t));
                }
            }
        }
    }
    checks.push(Check {
        name: "c regular",
        passed: worst_speed.0 > 1e-12,
        worst: worst_speed.0,
        witness_t: Some(worst_speed.1),
    });
    let constant = lightlike_at.is_none() && (spacelike == 0 || timelike == 0);
    let curve_character = if constant {
        Some(if timelike > 0 {
            Causal::Timelike
        } else {
            Causal::Spacelike
        })
    } else {
        None
    };
    let (worst, witness) = match lightlike_at {
        Some((q, t)) => (q, Some(t)),
        None => (0.0, None),
    };
    checks.push(Check {
        name: "c has constant non-lightlike causal character",
        passed: constant,
        worst,
        witness_t: witness,
    });

    ValidationReport {
        checks,
        curve_character,
        approx,
    }
}

/// Strip along a unit-speed timelike curve whose normal is its normalized
/// acceleration, so that `c` is a geodesic of the resulting surface.
pub fn geodesic_strip(c: &CurveL3, interval: [f64; 2]) -> Result<Strip> {
    let dc = c.derive();
    let ddc = dc.derive();
    let mut accel_sq = Vec::new();
    for t in sample_points(interval) {
        let speed = dc.eval(t).norm_sqr();
        if (speed + 1.0).abs() > 1e-8 {
            return Err(Error::NotConstantSpeed { t, value: speed });
        }
        let a = ddc.eval(t);
        let q = a.norm_sqr();
        if q <= default_tol(a) {
            return Err(Error::InflectionPoint { t, value: q });
        }
        accel_sq.push(q);
    }

    let q = ddc.inner(&ddc);
    let n = match &q {
        Component::Poly(p) if p.degree() == Some(0) && !ddc.is_approx() => {
            ddc.scale(1.0 / p.coeff(0).sqrt())
        }
        _ => {
            let center = 0.5 * (interval[0] + interval[1]);
            let as_series = |comp: &Component| match comp {
                Component::Poly(p) => TaylorSeries::from_poly(p, center, GEODESIC_TAYLOR_ORDER),
                Component::Taylor(s) => s.clone(),
            };
            let inv_norm = as_series(&q).powf(-0.5).ok_or(Error::InflectionPoint {
                t: center,
                value: q.eval_real(center),
            })?;
            let comps = ddc
                .components()
                .clone()
                .map(|comp| Component::Taylor(as_series(&comp).mul(&inv_norm)));
            let [x, y, z] = comps;
            CurveL3::new(x, y, z)?
        }
    };
    Strip::new(c.clone(), n, interval, Variant::TimelikeSurface)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Polynomial,
    Taylor,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct StripFile {
    variant: Variant,
    interval: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    curve: CurveFile,
    normal: CurveFile,
}

fn curve_from_file(f: CurveFile, mode: Mode, center: f64, order: usize) -> CurveL3 {
    match mode {
        Mode::Polynomial => CurveL3::from_coeffs(&f.x, &f.y, &f.z),
        Mode::Taylor => CurveL3::taylor(
            TaylorSeries::new(f.x, center, order),
            TaylorSeries::new(f.y, center, order),
            TaylorSeries::new(f.z, center, order),
        ),
    }
}

fn curve_to_file(c: &CurveL3, center: Option<(f64, usize)>) -> CurveFile {
    let coeffs = |comp: &Component| -> Vec<f64> {
        match (comp, center) {
            (Component::Poly(p), None) => p.coeffs().to_vec(),
            (Component::Poly(p), Some((c, o))) => TaylorSeries::from_poly(p, c, o).coeffs().to_vec(),
            (Component::Taylor(s), _) => s.coeffs().to_vec(),
        }
    };
    let keep_zero = |v: Vec<f64>| if v.is_empty() { vec![0.0] } else { v };
    CurveFile {
        x: keep_zero(coeffs(c.component(0))),
        y: keep_zero(coeffs(c.component(1))),
        z: keep_zero(coeffs(c.component(2))),
    }
}

/// Parses and validates strip text in the TOML layout.
pub fn parse_strip(text: &str) -> Result<Strip> {
    let file: StripFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mode = file.mode.unwrap_or(Mode::Polynomial);
    let (center, order) = match mode {
        Mode::Polynomial => {
            if file.center.is_some() || file.order.is_some() {
                return Err(Error::Parse("center/order need mode = \"taylor\"".into()));
            }
            (0.0, 0)
        }
        Mode::Taylor => (
            file.center.ok_or_else(|| Error::Parse("taylor mode needs `center`".into()))?,
            file.order.ok_or_else(|| Error::Parse("taylor mode needs `order`".into()))?,
        ),
    };
    let c = curve_from_file(file.curve, mode, center, order);
    let n = curve_from_file(file.normal, mode, center, order);
    Strip::new(c, n, file.interval, file.variant)
}

pub fn load_strip(path: impl AsRef<Path>) -> Result<Strip> {
    let text = std::fs::read_to_string(path)?;
    parse_strip(&text)
}

/// Canonical text for a strip. Mixed polynomial/series strips are written in
/// series mode about the first series center.
pub fn strip_to_toml(s: &Strip) -> String {
    let series = s
        .curve()
        .components()
        .iter()
        .chain(s.normal().components())
        .find_map(|c| match c {
            Component::Taylor(t) => Some((t.center(), t.order())),
            _ => None,
        });
    let file = StripFile {
        variant: s.variant(),
        interval: s.interval(),
        mode: series.map(|_| Mode::Taylor),
        center: series.map(|(c, _)| c),
        order: series.map(|(_, o)| o),
        curve: curve_to_file(s.curve(), series),
        normal: curve_to_file(s.normal(), series),
    };
    toml::to_string(&file).expect("strip file serializes")
}

pub fn save_strip(s: &Strip, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, strip_to_toml(s))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line_x_normal() -> Strip {
        Strip::new(
            CurveL3::from_coeffs(&[0.0], &[0.0], &[0.0, 1.0]),
            CurveL3::constant(Vec3L::E1),
            [-1.0, 1.0],
            Variant::TimelikeSurface,
        )
        .unwrap()
    }

    #[test]
    fn timelike_line_is_valid() {
        let s = line_x_normal();
        assert_eq!(s.curve_character(), Causal::Timelike);
        assert!(validate_strip(&s).is_valid());
    }

    #[test]
    fn spacelike_variant_with_boosted_normal() {
        let one = 1.0f64;
        let s = Strip::new(
            CurveL3::from_coeffs(&[0.0], &[0.0, 1.0], &[0.0]),
            CurveL3::constant(Vec3L::new(one.sinh(), 0.0, one.cosh())),
            [-1.0, 1.0],
            Variant::SpacelikeSurface,
        )
        .unwrap();
        assert_eq!(s.curve_character(), Causal::Spacelike);
    }

    #[test]
    fn lightlike_curve_rejected() {
        let err = Strip::new(
            CurveL3::from_coeffs(&[0.0, 1.0], &[0.0], &[0.0, 1.0]),
            CurveL3::constant(Vec3L::E2),
            [-1.0, 1.0],
            Variant::TimelikeSurface,
        )
        .unwrap_err();
        let Error::InvalidStrip(report) = err else {
            panic!("expected InvalidStrip")
        };
        assert!(report.failures().iter().any(|f| f.contains("causal")));
    }

    #[test]
    fn non_unit_normal_rejected() {
        let err = Strip::new(
            CurveL3::from_coeffs(&[0.0], &[0.0], &[0.0, 1.0]),
            CurveL3::constant(Vec3L::new(2.0, 0.0, 0.0)),
            [-1.0, 1.0],
            Variant::TimelikeSurface,
        );
        assert!(matches!(err, Err(Error::InvalidStrip(_))));
    }

    #[test]
    fn circular_helix_geodesic() {
        let order = 16;
        let c = CurveL3::taylor(
            TaylorSeries::cos(0.0, order),
            TaylorSeries::sin(0.0, order),
            TaylorSeries::from_poly(&RealPoly::new(vec![0.0, 2f64.sqrt()]), 0.0, order),
        );
        let s = geodesic_strip(&c, [-1.0, 1.0]).unwrap();
        assert!(s.is_approx());
        for t in [-1.0, -0.3, 0.0, 0.8, 1.0] {
            let n = s.normal().eval(t);
            assert!((n - Vec3L::new(-t.cos(), -t.sin(), 0.0)).max_abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn polynomial_geodesic_keeps_exact_normal() {
        // c' = (t, t^2/2, 1 + t^2/2) has <c',c'> = -1 identically
        let c = CurveL3::from_coeffs(&[0.0, 0.0, 0.5], &[0.0, 0.0, 0.0, 1.0 / 6.0], &[0.0, 1.0, 0.0, 1.0 / 6.0]);
        let s = geodesic_strip(&c, [-2.0, 2.0]).unwrap();
        assert!(!s.is_approx());
        assert_eq!(s.normal(), &CurveL3::from_coeffs(&[1.0], &[0.0, 1.0], &[0.0, 1.0]));
    }

    #[test]
    fn geodesic_errors() {
        let line = CurveL3::from_coeffs(&[0.0], &[0.0], &[0.0, 1.0]);
        assert!(matches!(geodesic_strip(&line, [0.0, 1.0]), Err(Error::InflectionPoint { .. })));
        let fast = CurveL3::from_coeffs(&[0.0], &[0.0], &[0.0, 2.0]);
        assert!(matches!(geodesic_strip(&fast, [0.0, 1.0]), Err(Error::NotConstantSpeed { .. })));
    }

    #[test]
    fn load_fixture_and_errors() {
        let text = r#"
variant = "timelike_surface"
interval = [-1.0, 1.0]
[curve]
x = [0.0]
y = [0.0]
z = [0.0, 1.0]
[normal]
x = [1.0]
y = [0.0]
z = [0.0]
"#;
        assert_eq!(parse_strip(text).unwrap(), line_x_normal());

        let two = text.replace("z = [0.0, 1.0]\n", "");
        assert!(matches!(parse_strip(&two), Err(Error::Parse(_))));

        let bad = text
            .replace("timelike_surface", "spacelike_surface")
            .replace("x = [1.0]", "x = [0.0]")
            .replace("y = [0.0]\nz = [0.0]", "y = [1.0]\nz = [0.0]");
        assert!(matches!(parse_strip(&bad), Err(Error::InvalidStrip(_))));
    }

    #[test]
    fn taylor_file_roundtrip() {
        let order = 12;
        let c = CurveL3::taylor(
            TaylorSeries::cos(0.0, order),
            TaylorSeries::sin(0.0, order),
            TaylorSeries::from_poly(&RealPoly::new(vec![0.0, 2f64.sqrt()]), 0.0, order),
        );
        let s = geodesic_strip(&c, [-0.5, 0.5]).unwrap();
        let text = strip_to_toml(&s);
        assert!(text.contains("mode = \"taylor\""));
        let back = parse_strip(&text).unwrap();
        assert_eq!(strip_to_toml(&back), text);
    }

    fn valid_strip_strategy() -> impl Strategy<Value = Strip> {
        // c = a(t) e2 + t e3 with |a'| < 0.85 on [-2, 2] keeps c timelike; n = e1.
        (prop::collection::vec(-0.05f64..0.05, 1..4), -2.0f64..0.0, 0.5f64..2.0).prop_map(
            |(a, t0, len)| {
                let mut y = vec![0.0];
                y.extend(a);
                Strip::new(
                    CurveL3::from_coeffs(&[0.0], &y, &[0.0, 1.0]),
                    CurveL3::constant(Vec3L::E1),
                    [t0, t0 + len],
                    Variant::TimelikeSurface,
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn file_roundtrip(s in valid_strip_strategy()) {
            let back = parse_strip(&strip_to_toml(&s)).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn perturbed_normals_fail(s in valid_strip_strategy(), k in 0usize..3, delta in 1e-5f64..0.5, deg in 0usize..3) {
            let mut coeffs: Vec<Vec<f64>> = (0..3)
                .map(|i| s.normal().component(i).coeffs().to_vec())
                .collect();
            coeffs[k].resize(deg + 1, 0.0);
            coeffs[k][deg] += delta;
            let n = CurveL3::from_coeffs(&coeffs[0], &coeffs[1], &coeffs[2]);
            prop_assert!(Strip::new(s.curve().clone(), n, s.interval(), s.variant()).is_err());
        }
    }
}
