//! When is a Björling solution a singularity-free graph over the y–z plane?
//!
//! The Jacobian of `(u, v) -> (y, z)` decides it. A zero of its determinant
//! along the data axis rules a graph out; a nonvanishing determinant with a
//! positive quasidefinite (or P-matrix) Jacobian on a convex domain makes the
//! projection injective (Gale–Nikaido). Both directions are decided on the
//! sampled nodes only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bjorling::solve;
use crate::lorentz::{TimelikePlane, Vec3L};
use crate::split_scalar::RealPoly;
use crate::strips::{CurveL3, Strip, Variant};
use crate::surface::{Domain, SurfaceSample};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    /// `(m + m^T) / 2`
    pub fn symmetric_part(&self) -> Self {
        let off = 0.5 * (self.a12 + self.a21);
        Self::new(self.a11, off, off, self.a22)
    }

    pub fn max_abs(&self) -> f64 {
        self.a11
            .abs()
            .max(self.a12.abs())
            .max(self.a21.abs())
            .max(self.a22.abs())
    }
}

/// The symmetric part is positive definite (leading minors above `tol`).
pub fn is_positive_quasidefinite(m: &Mat2, tol: f64) -> bool {
    let a = m.symmetric_part();
    a.a11 > tol && a.det() > tol * tol
}

/// All principal minors are positive.
pub fn is_p_matrix(m: &Mat2, tol: f64) -> bool {
    m.a11 > tol && m.a22 > tol && m.det() > tol * tol
}

/// Per-node `[[y_u, y_v], [z_u, z_v]]` plus its trace along the data axis.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianField {
    nu: usize,
    nv: usize,
    mats: Vec<Option<Mat2>>,
    /// `(t, flat node index, J)` ordered by `t`.
    trace: Vec<(f64, usize, Mat2)>,
}

impl JacobianField {
    pub fn get(&self, i: usize, j: usize) -> Option<&Mat2> {
        self.mats.get(j * self.nu + i)?.as_ref()
    }

    pub fn mats(&self) -> &[Option<Mat2>] {
        &self.mats
    }

    pub fn trace(&self) -> &[(f64, usize, Mat2)] {
        &self.trace
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nu, self.nv)
    }

    /// Largest entry magnitude, at least 1.
    pub fn entry_scale(&self) -> f64 {
        self.mats
            .iter()
            .flatten()
            .fold(1.0, |m, a| m.max(a.max_abs()))
    }
}

pub fn jacobian_field(sample: &SurfaceSample) -> JacobianField {
    let mats: Vec<Option<Mat2>> = sample
        .nodes()
        .iter()
        .map(|n| {
            n.map(|n| {
                let (xu, xv) = (n.jet.xu, n.jet.xv);
                Mat2::new(xu.y, xv.y, xu.z, xv.z)
            })
        })
        .collect();
    let trace = sample
        .data_axis_nodes()
        .into_iter()
        .map(|(t, k)| (t, k, mats[k].expect("axis nodes are present")))
        .collect();
    JacobianField {
        nu: sample.nu(),
        nv: sample.nv(),
        mats,
        trace,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    #[default]
    Pqd,
    #[serde(rename = "pmatrix")]
    PMatrix,
}

impl Criterion {
    pub fn holds(self, m: &Mat2, tol: f64) -> bool {
        match self {
            Criterion::Pqd => is_positive_quasidefinite(m, tol),
            Criterion::PMatrix => is_p_matrix(m, tol),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NoGraphSolution,
    GraphSolutionExists,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub u: f64,
    pub v: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphVerdict {
    pub verdict: Verdict,
    pub criterion: Criterion,
    /// Positive verdicts hold on the sampled nodes, not the continuum.
    pub certified_on_sampled_set: bool,
    pub tol_zero: f64,
    pub witnesses: Vec<Witness>,
}

/// Relative threshold for a vanishing Jacobian determinant.
pub const DET_ZERO_REL: f64 = 1e-9;
/// Near-zero level flagged when `det J(t)` dips without a sign change.
pub const DET_NEAR_REL: f64 = 1e-6;
/// Relative threshold passed to the matrix criteria.
pub const CRITERION_REL: f64 = 1e-9;

pub fn classify(sample: &SurfaceSample, field: &JacobianField, criterion: Criterion) -> GraphVerdict {
    let entry = field.entry_scale();
    let scale = entry * entry;
    let tol_zero = DET_ZERO_REL * scale;
    let tol_near = DET_NEAR_REL * scale;
    let tol_crit = CRITERION_REL * entry;
    let at = |k: usize| {
        let n = sample.nodes()[k].as_ref().expect("field node present");
        (n.u, n.v)
    };

    let mut boundary = Vec::new();
    let dets: Vec<(usize, f64)> = field.trace.iter().map(|(_, k, m)| (*k, m.det())).collect();
    for (idx, &(k, d)) in dets.iter().enumerate() {
        if d.abs() < tol_zero {
            let (u, v) = at(k);
            boundary.push(Witness {
                u,
                v,
                reason: format!("det J(t) = {d:e} vanishes on the data axis"),
            });
        }
        if let Some(&(k2, d2)) = dets.get(idx + 1) {
            if d.abs() >= tol_zero && d2.abs() >= tol_zero && d.signum() != d2.signum() {
                let (u, v) = at(k);
                let (u2, v2) = at(k2);
                boundary.push(Witness {
                    u: 0.5 * (u + u2),
                    v: 0.5 * (v + v2),
                    reason: format!("det J(t) changes sign ({d:e} -> {d2:e})"),
                });
            }
        }
    }
    if !boundary.is_empty() {
        return GraphVerdict {
            verdict: Verdict::NoGraphSolution,
            criterion,
            certified_on_sampled_set: true,
            tol_zero,
            witnesses: boundary,
        };
    }

    let mut witnesses = Vec::new();
    // a dip towards zero that never crosses cannot be certified by sampling
    for w in dets.windows(3) {
        let (a, b, c) = (w[0].1.abs(), w[1].1.abs(), w[2].1.abs());
        if b < tol_near && b <= a && b <= c {
            let (u, v) = at(w[1].0);
            witnesses.push(Witness {
                u,
                v,
                reason: format!("det J(t) = {:e} nearly vanishes without a sign change", w[1].1),
            });
        }
    }

    let per_node: Vec<Option<Witness>> = field
        .mats
        .par_iter()
        .enumerate()
        .map(|(k, m)| {
            let m = m.as_ref()?;
            let d = m.det();
            let (u, v) = at(k);
            if d.abs() <= tol_zero {
                Some(Witness {
                    u,
                    v,
                    reason: format!("det J(z) = {d:e} vanishes"),
                })
            } else if !criterion.holds(m, tol_crit) {
                Some(Witness {
                    u,
                    v,
                    reason: format!("{criterion:?} criterion fails"),
                })
            } else {
                None
            }
        })
        .collect();
    witnesses.extend(per_node.into_iter().flatten());

    let any = field.mats.iter().any(Option::is_some);
    let verdict = if witnesses.is_empty() && any {
        Verdict::GraphSolutionExists
    } else {
        Verdict::Indeterminate
    };
    GraphVerdict {
        verdict,
        criterion,
        certified_on_sampled_set: verdict == Verdict::GraphSolutionExists,
        tol_zero,
        witnesses,
    }
}

/// Pairwise-distinct check of the projected `(y, z)` nodes. Returns the
/// first colliding pair (flat indices) closer than `tol`.
pub fn projection_collision(sample: &SurfaceSample, tol: f64) -> Option<(usize, usize)> {
    let mut pts: Vec<(f64, f64, usize)> = sample
        .iter()
        .map(|(k, n)| (n.jet.x.y, n.jet.x.z, k))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j].0 - pts[i].0 > tol {
                break;
            }
            if (pts[j].1 - pts[i].1).abs() <= tol {
                return Some((pts[i].2, pts[j].2));
            }
        }
    }
    None
}

const SEARCH_GRID: usize = 21;

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize, amp: f64) -> RealPoly {
    let deg = rng.random_range(0..=max_deg);
    RealPoly::new((0..=deg).map(|_| rng.random_range(-amp..amp)).collect())
}

/// One candidate strip per draw; draws that fail validation yield `None`.
fn draw_candidate(rng: &mut ChaCha8Rng) -> Option<Strip> {
    let family = rng.random_range(0..4u8);
    let interval = [-1.0, 1.0];
    match family {
        // c = (0, t, 0) with boosted timelike normal
        0 => {
            let gamma = 2.0 * (1.0 - rng.random::<f64>());
            Strip::new(
                CurveL3::from_coeffs(&[0.0], &[0.0, 1.0], &[0.0]),
                CurveL3::constant(Vec3L::new(gamma.sinh(), 0.0, gamma.cosh())),
                interval,
                Variant::SpacelikeSurface,
            )
            .ok()
        }
        // spacelike variant: c inside the spacelike plane orthogonal to n
        1 => {
            let gamma = rng.random_range(0.0..2.0f64);
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let (s, c) = theta.sin_cos();
            let n = Vec3L::new(gamma.sinh() * c, gamma.sinh() * s, gamma.cosh());
            let e1 = Vec3L::new(-s, c, 0.0);
            let e2 = Vec3L::new(gamma.cosh() * c, gamma.cosh() * s, gamma.sinh());
            let curve = span_curve(random_poly(rng, 2, 1.0), e1, random_poly(rng, 2, 1.0), e2);
            Strip::new(curve, CurveL3::constant(n), interval, Variant::SpacelikeSurface).ok()
        }
        // timelike variant, constant spacelike normal
        2 => {
            let frame = TimelikePlane::from_angles(
                rng.random_range(-1.5..1.5),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            let curve = span_curve(
                random_poly(rng, 2, 1.0),
                frame.b2(),
                random_poly(rng, 2, 1.0),
                frame.b3(),
            );
            Strip::new(curve, CurveL3::constant(frame.b1()), interval, Variant::TimelikeSurface).ok()
        }
        // timelike variant with polynomial normal n = (1, p, p)
        _ => {
            let p = random_poly(rng, 1, 0.5);
            let q = random_poly(rng, 2, 0.5);
            let z = RealPoly::t();
            let dq_minus_dz = &q.derive() - &z.derive();
            let x = (&p * &dq_minus_dz).scale(-1.0).antiderive_from(0.0);
            let n = CurveL3::poly(RealPoly::constant(1.0), p.clone(), p);
            Strip::new(CurveL3::poly(x, q, z), n, interval, Variant::TimelikeSurface).ok()
        }
    }
}

fn span_curve(a: RealPoly, ea: Vec3L, b: RealPoly, eb: Vec3L) -> CurveL3 {
    let comp = |i: usize| &a.scale(ea.get(i)) + &b.scale(eb.get(i));
    CurveL3::poly(comp(0), comp(1), comp(2))
}

/// The strips examined by [`search_pqd_strips`] for a given budget and seed.
pub fn search_candidates(budget: usize, seed: u64) -> Vec<Strip> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..budget).filter_map(|_| draw_candidate(&mut rng)).collect()
}

/// Randomized search over low-degree polynomial strips whose sampled y–z
/// Jacobian is positive quasidefinite with nonvanishing determinant.
/// Deterministic in `seed`; may return nothing.
pub fn search_pqd_strips(budget: usize, seed: u64) -> Vec<Strip> {
    search_candidates(budget, seed)
        .into_iter()
        .filter(|s| {
            let [t0, t1] = s.interval();
            let h = 0.25 * (t1 - t0);
            let domain = Domain::rect(t0, t1, -h, h, SEARCH_GRID, SEARCH_GRID);
            let Ok(sample) = solve(s, &domain) else {
                return false;
            };
            let field = jacobian_field(&sample);
            classify(&sample, &field, Criterion::Pqd).verdict == Verdict::GraphSolutionExists
        })
        .collect()
}
