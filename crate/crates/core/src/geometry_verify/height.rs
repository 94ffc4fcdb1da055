//! Height functions over planes and the Born-Infeld operator.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::Serialize;

use crate::lorentz::TimelikePlane;
use crate::surface::{SurfaceJet, SurfaceSample};

/// Value and derivatives up to order two of a height `psi(a, b)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct HeightJet {
    pub psi: f64,
    pub pa: f64,
    pub pb: f64,
    pub paa: f64,
    pub pab: f64,
    pub pbb: f64,
}

impl HeightJet {
    /// Second-order Taylor value at offset `(da, db)`.
    pub fn taylor(&self, da: f64, db: f64) -> f64 {
        self.psi + self.pa * da + self.pb * db + 0.5 * (self.paa * da * da + self.pbb * db * db) + self.pab * da * db
    }
}

/// Causal type of the two plane variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    /// `a` spacelike, `b` timelike: graphs over timelike planes.
    SpaceTime,
    /// both spacelike: graphs over spacelike planes.
    SpaceSpace,
}

/// Regular grid of plane coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid2 {
    pub a0: f64,
    pub b0: f64,
    pub ha: f64,
    pub hb: f64,
    pub na: usize,
    pub nb: usize,
}

impl Grid2 {
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.a0 + i as f64 * self.ha, self.b0 + j as f64 * self.hb)
    }
}

/// Height samples on a set of plane points. Point `(i, j)` of a regular
/// field sits at index `j * na + i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightField {
    pub signature: Signature,
    pub points: Vec<(f64, f64)>,
    /// `None` where the height is undefined (outside the projected surface).
    pub jets: Vec<Option<HeightJet>>,
    pub grid: Option<Grid2>,
}

impl HeightField {
    /// Scattered samples.
    pub fn scattered(signature: Signature, points: Vec<(f64, f64)>, jets: Vec<Option<HeightJet>>) -> Self {
        assert_eq!(points.len(), jets.len());
        Self {
            signature,
            points,
            jets,
            grid: None,
        }
    }

    /// Samples an analytic height on a regular grid.
    pub fn from_fn(
        signature: Signature,
        a: [f64; 2],
        b: [f64; 2],
        na: usize,
        nb: usize,
        f: impl Fn(f64, f64) -> HeightJet,
    ) -> Self {
        let grid = grid_over(a, b, na, nb);
        let mut points = Vec::with_capacity(na * nb);
        let mut jets = Vec::with_capacity(na * nb);
        for j in 0..nb {
            for i in 0..na {
                let (x, y) = grid.point(i, j);
                points.push((x, y));
                jets.push(Some(f(x, y)));
            }
        }
        Self {
            signature,
            points,
            jets,
            grid: Some(grid),
        }
    }

    /// Heights given only by values; derivatives come from central
    /// differences, with one-sided stencils at the edges. Needs `na, nb >= 3`.
    pub fn from_values(signature: Signature, a: [f64; 2], b: [f64; 2], na: usize, nb: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(na >= 3 && nb >= 3, "finite differences need at least 3 points per axis");
        let grid = grid_over(a, b, na, nb);
        let mut points = Vec::with_capacity(na * nb);
        let mut vals = Vec::with_capacity(na * nb);
        for j in 0..nb {
            for i in 0..na {
                let p = grid.point(i, j);
                points.push(p);
                vals.push(f(p.0, p.1));
            }
        }
        let at = |i: usize, j: usize| vals[j * na + i];
        let da = |g: &dyn Fn(usize, usize) -> f64, i: usize, j: usize| diff1(|k| g(k, j), i, na, grid.ha);
        let db = |g: &dyn Fn(usize, usize) -> f64, i: usize, j: usize| diff1(|k| g(i, k), j, nb, grid.hb);
        let pa: Vec<f64> = (0..na * nb).map(|k| da(&at, k % na, k / na)).collect();
        let pa_at = |i: usize, j: usize| pa[j * na + i];
        let jets = (0..na * nb)
            .map(|k| {
                let (i, j) = (k % na, k / na);
                Some(HeightJet {
                    psi: at(i, j),
                    pa: pa[k],
                    pb: db(&at, i, j),
                    paa: diff2(|m| at(m, j), i, na, grid.ha),
                    pab: db(&pa_at, i, j),
                    pbb: diff2(|m| at(i, m), j, nb, grid.hb),
                })
            })
            .collect();
        Self {
            signature,
            points,
            jets,
            grid: Some(grid),
        }
    }

    /// Height at `(a, b)` by Taylor expansion from the nearest grid point.
    /// Only available on regular fields.
    pub fn eval(&self, a: f64, b: f64) -> Option<f64> {
        let g = self.grid?;
        let i = ((a - g.a0) / g.ha).round();
        let j = ((b - g.b0) / g.hb).round();
        if i < 0.0 || j < 0.0 || i >= g.na as f64 || j >= g.nb as f64 {
            return None;
        }
        let k = j as usize * g.na + i as usize;
        let (pa, pb) = self.points[k];
        self.jets[k].map(|jet| jet.taylor(a - pa, b - pb))
    }

    pub fn defined_count(&self) -> usize {
        self.jets.iter().filter(|j| j.is_some()).count()
    }
}

fn grid_over(a: [f64; 2], b: [f64; 2], na: usize, nb: usize) -> Grid2 {
    let step = |r: [f64; 2], n: usize| if n > 1 { (r[1] - r[0]) / (n - 1) as f64 } else { 0.0 };
    Grid2 {
        a0: a[0],
        b0: b[0],
        ha: step(a, na),
        hb: step(b, nb),
        na,
        nb,
    }
}

// Edge stencils are one order higher than the central ones so that the
// edges do not dominate the error.
fn diff1(f: impl Fn(usize) -> f64, i: usize, n: usize, h: f64) -> f64 {
    if n >= 4 && i == 0 {
        (-11.0 * f(0) + 18.0 * f(1) - 9.0 * f(2) + 2.0 * f(3)) / (6.0 * h)
    } else if n >= 4 && i == n - 1 {
        (11.0 * f(n - 1) - 18.0 * f(n - 2) + 9.0 * f(n - 3) - 2.0 * f(n - 4)) / (6.0 * h)
    } else if i == 0 {
        (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h)
    } else if i == n - 1 {
        (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h)
    } else {
        (f(i + 1) - f(i - 1)) / (2.0 * h)
    }
}

fn diff2(f: impl Fn(usize) -> f64, i: usize, n: usize, h: f64) -> f64 {
    let c = i.clamp(1, n - 2);
    let h2 = h * h;
    if n >= 5 && i == 0 {
        (35.0 * f(0) - 104.0 * f(1) + 114.0 * f(2) - 56.0 * f(3) + 11.0 * f(4)) / (12.0 * h2)
    } else if n >= 5 && i == n - 1 {
        (35.0 * f(n - 1) - 104.0 * f(n - 2) + 114.0 * f(n - 3) - 56.0 * f(n - 4) + 11.0 * f(n - 5)) / (12.0 * h2)
    } else {
        (f(c + 1) - 2.0 * f(c) + f(c - 1)) / h2
    }
}

/// Residual of the Born-Infeld (zero mean curvature) equation for a height
/// field. With `a` spacelike and `b` timelike:
/// `(1 - psi_b^2) psi_aa + 2 psi_a psi_b psi_ab - (1 + psi_a^2) psi_bb`.
/// Over a spacelike plane (timelike height):
/// `(1 - psi_b^2) psi_aa + 2 psi_a psi_b psi_ab + (1 - psi_a^2) psi_bb`.
pub fn born_infeld_residual(field: &HeightField) -> Vec<Option<f64>> {
    field
        .jets
        .iter()
        .map(|j| {
            j.map(|j| {
                let mixed = 2.0 * j.pa * j.pb * j.pab + (1.0 - j.pb * j.pb) * j.paa;
                match field.signature {
                    Signature::SpaceTime => mixed - (1.0 + j.pa * j.pa) * j.pbb,
                    Signature::SpaceSpace => mixed + (1.0 - j.pa * j.pa) * j.pbb,
                }
            })
        })
        .collect()
}

/// Born-Infeld residual divided by `max(1, sum of |terms|)`, which stays
/// meaningful where derivatives are large.
pub fn born_infeld_relative_residual(field: &HeightField) -> Vec<Option<f64>> {
    field
        .jets
        .iter()
        .map(|j| {
            j.map(|j| {
                let last = match field.signature {
                    Signature::SpaceTime => -(1.0 + j.pa * j.pa) * j.pbb,
                    Signature::SpaceSpace => (1.0 - j.pa * j.pa) * j.pbb,
                };
                let terms = [(1.0 - j.pb * j.pb) * j.paa, 2.0 * j.pa * j.pb * j.pab, last];
                let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0);
                terms.iter().sum::<f64>().abs() / scale
            })
        })
        .collect()
}

/// Gauss curvature of a graph over a timelike plane,
/// `(psi_aa psi_bb - psi_ab^2) / (psi_a^2 - psi_b^2 + 1)^2`.
/// Nodes where `psi_a^2 - psi_b^2 + 1 <= tol` are left undefined.
pub fn gauss_curvature_graph(field: &HeightField, tol: f64) -> Vec<Option<f64>> {
    field
        .jets
        .iter()
        .map(|j| {
            let j = (*j)?;
            let w = j.pa * j.pa - j.pb * j.pb + 1.0;
            (w > tol).then(|| (j.paa * j.pbb - j.pab * j.pab) / (w * w))
        })
        .collect()
}

/// Height jet of a surface jet over `plane`, by the chain rule. Returns the
/// plane coordinates and the jet, or `None` where the projection is singular.
pub fn height_jet(jet: &SurfaceJet, plane: &TimelikePlane) -> Option<((f64, f64), HeightJet)> {
    let c = |x| plane.coordinates(x);
    let (p, q, h) = c(jet.x);
    let (pu, qu, hu) = c(jet.xu);
    let (pv, qv, hv) = c(jet.xv);
    let (puu, quu, huu) = c(jet.xuu);
    let (puv, quv, huv) = c(jet.xuv);
    let (pvv, qvv, hvv) = c(jet.xvv);

    let jac = Matrix2::new(pu, qu, pv, qv);
    let scale = (pu.abs() + qu.abs()) * (pv.abs() + qv.abs());
    if jac.determinant().abs() <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
        return None;
    }
    let grad = jac.lu().solve(&Vector2::new(hu, hv))?;
    let (pa, pb) = (grad[0], grad[1]);
    let m = Matrix3::new(
        pu * pu,
        2.0 * pu * qu,
        qu * qu,
        pu * pv,
        pu * qv + pv * qu,
        qu * qv,
        pv * pv,
        2.0 * pv * qv,
        qv * qv,
    );
    let rhs = Vector3::new(
        huu - pa * puu - pb * quu,
        huv - pa * puv - pb * quv,
        hvv - pa * pvv - pb * qvv,
    );
    let hess = m.lu().solve(&rhs)?;
    Some((
        (p, q),
        HeightJet {
            psi: h,
            pa,
            pb,
            paa: hess[0],
            pab: hess[1],
            pbb: hess[2],
        },
    ))
}

/// Height jets of every sample node over `plane`, kept at the nodes'
/// projected positions.
pub fn graph_jets(sample: &SurfaceSample, plane: &TimelikePlane) -> HeightField {
    let mut points = Vec::new();
    let mut jets = Vec::new();
    for (_, n) in sample.iter() {
        let (p, q, _) = plane.coordinates(n.jet.x);
        match height_jet(&n.jet, plane) {
            Some((pt, j)) => {
                points.push(pt);
                jets.push(Some(j));
            }
            None => {
                points.push((p, q));
                jets.push(None);
            }
        }
    }
    HeightField::scattered(Signature::SpaceTime, points, jets)
}
