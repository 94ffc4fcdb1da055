//! Heights of sampled surfaces over timelike planes.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::height::{height_jet, HeightField, HeightJet, Signature};
use crate::error::{Error, Result};
use crate::lorentz::TimelikePlane;
use crate::surface::SurfaceSample;

/// How heights are evaluated at the target grid points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResampleMethod {
    /// Invert the analytic source by Newton's method when the sample has
    /// one, otherwise fit.
    #[default]
    Auto,
    /// Local quadratic least squares through the nearest nodes.
    LeastSquares,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightOptions {
    /// Target grid size; zero means "same as the sample grid".
    pub na: usize,
    pub nb: usize,
    pub method: ResampleMethod,
}

impl Default for HeightOptions {
    fn default() -> Self {
        Self {
            na: 0,
            nb: 0,
            method: ResampleMethod::Auto,
        }
    }
}

/// Nodes used by each least-squares fit; at least [`MIN_FIT`] are required.
/// Stencils whose scaled design matrix has condition number above
/// `1 / FIT_RCOND` are regrown up to [`MAX_FIT_NODES`] nodes.
const FIT_NODES: usize = 12;
const MAX_FIT_NODES: usize = 48;
const MIN_FIT: usize = 9;
const FIT_RCOND: f64 = 1e-3;

struct Projected {
    /// flat sample index, plane coordinates, height
    idx: Vec<usize>,
    pts: Vec<(f64, f64)>,
    h: Vec<f64>,
    /// position in `pts` of each flat sample index
    slot: Vec<Option<usize>>,
}

fn project(sample: &SurfaceSample, plane: &TimelikePlane) -> Projected {
    let mut out = Projected {
        idx: Vec::new(),
        pts: Vec::new(),
        h: Vec::new(),
        slot: vec![None; sample.nodes().len()],
    };
    for (k, n) in sample.iter() {
        let (p, q, h) = plane.coordinates(n.jet.x);
        out.slot[k] = Some(out.pts.len());
        out.idx.push(k);
        out.pts.push((p, q));
        out.h.push(h);
    }
    out
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn extent(pts: &[(f64, f64)]) -> [f64; 4] {
    pts.iter().fold(
        [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY],
        |[a0, a1, b0, b1], &(p, q)| [a0.min(p), a1.max(p), b0.min(q), b1.max(q)],
    )
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 <= 0.0 && o3 * o4 <= 0.0 && !(o1 == 0.0 && o2 == 0.0 && o3 == 0.0 && o4 == 0.0 && !overlap(a, b, c, d))
}

fn overlap(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let r = |x: (f64, f64), y: (f64, f64)| (x.0.min(y.0), x.0.max(y.0), x.1.min(y.1), x.1.max(y.1));
    let (a0, a1, a2, a3) = r(a, b);
    let (c0, c1, c2, c3) = r(c, d);
    a0 <= c1 && c0 <= a1 && a2 <= c3 && c2 <= a3
}

/// Checks that orthogonal projection onto `plane` is injective on the
/// sampled patch: all grid triangles keep one orientation, the boundary
/// polygon does not cross itself, and no two nodes land on the same point.
pub fn check_injective(sample: &SurfaceSample, plane: &TimelikePlane) -> Result<()> {
    let pr = project(sample, plane);
    check_projected(sample, &pr)
}

fn check_projected(sample: &SurfaceSample, pr: &Projected) -> Result<()> {
    let [a0, a1, b0, b1] = extent(&pr.pts);
    let diam = (a1 - a0).max(b1 - b0).max(f64::MIN_POSITIVE);
    let pt = |k: usize| pr.pts[pr.slot[k].expect("triangle vertex present")];

    // coincident nodes
    let mut order: Vec<usize> = (0..pr.pts.len()).collect();
    order.sort_by(|&x, &y| pr.pts[x].0.total_cmp(&pr.pts[y].0));
    let tol = 1e-12 * diam;
    for (n, &x) in order.iter().enumerate() {
        for &y in &order[n + 1..] {
            if pr.pts[y].0 - pr.pts[x].0 > tol {
                break;
            }
            if (pr.pts[y].1 - pr.pts[x].1).abs() <= tol {
                return Err(Error::NotInjective { a: pr.idx[x].min(pr.idx[y]), b: pr.idx[x].max(pr.idx[y]) });
            }
        }
    }

    // folds: triangle orientations
    let tris = sample.triangles();
    let area_tol = 1e-14 * diam * diam;
    let mut sign = 0.0;
    for t in &tris {
        let o = orient(pt(t[0]), pt(t[1]), pt(t[2]));
        if o.abs() <= area_tol || (sign != 0.0 && o.signum() != sign) {
            return Err(Error::NotInjective { a: t[0], b: t[2] });
        }
        sign = o.signum();
    }

    // boundary self-intersections
    let mut edge_count = std::collections::HashMap::new();
    for t in &tris {
        for (x, y) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            *edge_count.entry((x.min(y), x.max(y))).or_insert(0usize) += 1;
        }
    }
    let boundary: Vec<(usize, usize)> = edge_count.into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect();
    let hit = boundary.par_iter().enumerate().find_map_any(|(n, &(a, b))| {
        boundary[n + 1..].iter().find_map(|&(c, d)| {
            if a == c || a == d || b == c || b == d {
                return None;
            }
            segments_cross(pt(a), pt(b), pt(c), pt(d)).then_some((a, c))
        })
    });
    if let Some((a, b)) = hit {
        return Err(Error::NotInjective { a: a.min(b), b: a.max(b) });
    }
    Ok(())
}

/// Uniform bucket grid over projected points, for neighbour queries.
struct Buckets {
    a0: f64,
    b0: f64,
    cell: f64,
    na: usize,
    nb: usize,
    cells: Vec<Vec<usize>>,
}

impl Buckets {
    fn new(pts: &[(f64, f64)], per_cell: usize) -> Self {
        let [a0, a1, b0, b1] = extent(pts);
        let area = ((a1 - a0) * (b1 - b0)).max(f64::MIN_POSITIVE);
        let cell = (area * per_cell as f64 / pts.len().max(1) as f64).sqrt().max((a1 - a0).max(b1 - b0) * 1e-6).max(f64::MIN_POSITIVE);
        let na = (((a1 - a0) / cell) as usize + 1).min(4096);
        let nb = (((b1 - b0) / cell) as usize + 1).min(4096);
        let mut cells = vec![Vec::new(); na * nb];
        let mut out = Self { a0, b0, cell, na, nb, cells: Vec::new() };
        for (k, &p) in pts.iter().enumerate() {
            let (i, j) = out.cell_of(p);
            cells[j * na + i].push(k);
        }
        out.cells = cells;
        out
    }

    fn cell_of(&self, (p, q): (f64, f64)) -> (usize, usize) {
        let i = ((p - self.a0) / self.cell).floor().clamp(0.0, (self.na - 1) as f64) as usize;
        let j = ((q - self.b0) / self.cell).floor().clamp(0.0, (self.nb - 1) as f64) as usize;
        (i, j)
    }

    /// The `k` nearest points to `x`, nearest first.
    fn nearest(&self, pts: &[(f64, f64)], x: (f64, f64), k: usize) -> Vec<usize> {
        let (ci, cj) = self.cell_of(x);
        let d2 = |n: usize| (pts[n].0 - x.0).powi(2) + (pts[n].1 - x.1).powi(2);
        let mut found: Vec<usize> = Vec::new();
        let max_ring = self.na.max(self.nb);
        for ring in 0..=max_ring {
            let (i0, i1) = (ci.saturating_sub(ring), (ci + ring).min(self.na - 1));
            let (j0, j1) = (cj.saturating_sub(ring), (cj + ring).min(self.nb - 1));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let on_ring = i.abs_diff(ci) == ring || j.abs_diff(cj) == ring;
                    if on_ring {
                        found.extend_from_slice(&self.cells[j * self.na + i]);
                    }
                }
            }
            if found.len() >= k {
                // everything within `ring * cell` has been seen
                found.sort_by(|&a, &b| d2(a).total_cmp(&d2(b)));
                let reach = ring as f64 * self.cell;
                if d2(found[k - 1]) <= reach * reach || ring == max_ring {
                    found.truncate(k);
                    return found;
                }
            }
        }
        found.sort_by(|&a, &b| d2(a).total_cmp(&d2(b)));
        found.truncate(k);
        found
    }
}

/// Triangles of the projected mesh bucketed by bounding box, for point
/// location.
struct TriIndex {
    buckets: Buckets,
    tris: Vec<[usize; 3]>,
    cells: Vec<Vec<usize>>,
}

impl TriIndex {
    fn new(pts: &[(f64, f64)], tris: Vec<[usize; 3]>) -> Self {
        let buckets = Buckets::new(pts, 2);
        let mut cells = vec![Vec::new(); buckets.na * buckets.nb];
        for (n, t) in tris.iter().enumerate() {
            let [a0, a1, b0, b1] = extent(&[pts[t[0]], pts[t[1]], pts[t[2]]]);
            let (i0, j0) = buckets.cell_of((a0, b0));
            let (i1, j1) = buckets.cell_of((a1, b1));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    cells[j * buckets.na + i].push(n);
                }
            }
        }
        Self { buckets, tris, cells }
    }

    /// Containing triangle and barycentric weights.
    fn locate(&self, pts: &[(f64, f64)], x: (f64, f64)) -> Option<([usize; 3], [f64; 3])> {
        let [a0, a1, b0, b1] = extent(pts);
        let slack = 1e-12 * (a1 - a0).max(b1 - b0);
        if x.0 < a0 - slack || x.0 > a1 + slack || x.1 < b0 - slack || x.1 > b1 + slack {
            return None;
        }
        let (i, j) = self.buckets.cell_of(x);
        for &n in &self.cells[j * self.buckets.na + i] {
            let t = self.tris[n];
            let (p0, p1, p2) = (pts[t[0]], pts[t[1]], pts[t[2]]);
            let area = orient(p0, p1, p2);
            let w0 = orient(x, p1, p2) / area;
            let w1 = orient(p0, x, p2) / area;
            let w2 = 1.0 - w0 - w1;
            let eps = -1e-10;
            if w0 >= eps && w1 >= eps && w2 >= eps {
                return Some((t, [w0, w1, w2]));
            }
        }
        None
    }
}

/// Height of `sample` over `plane` on a regular grid covering its
/// projection, with the sample grid's size.
pub fn height_over_plane(sample: &SurfaceSample, plane: &TimelikePlane) -> Result<HeightField> {
    height_over_plane_with(sample, plane, HeightOptions::default())
}

pub fn height_over_plane_with(sample: &SurfaceSample, plane: &TimelikePlane, opts: HeightOptions) -> Result<HeightField> {
    let pr = project(sample, plane);
    check_projected(sample, &pr)?;
    let na = if opts.na == 0 { sample.nu() } else { opts.na };
    let nb = if opts.nb == 0 { sample.nv() } else { opts.nb };
    let [a0, a1, b0, b1] = extent(&pr.pts);

    let local_tris: Vec<[usize; 3]> = sample
        .triangles()
        .into_iter()
        .map(|t| t.map(|k| pr.slot[k].expect("triangle vertex present")))
        .collect();
    let index = TriIndex::new(&pr.pts, local_tris);
    let buckets = Buckets::new(&pr.pts, 4);
    let source = match opts.method {
        ResampleMethod::Auto => sample.source().cloned(),
        ResampleMethod::LeastSquares => None,
    };

    let template = HeightField::from_fn(Signature::SpaceTime, [a0, a1], [b0, b1], na, nb, |_, _| HeightJet::default());
    let jets = template
        .points
        .par_iter()
        .enumerate()
        .map(|(target, &x)| -> Result<Option<HeightJet>> {
            let Some((tri, w)) = index.locate(&pr.pts, x) else {
                return Ok(None);
            };
            if let Some(map) = &source {
                let uv = |s: usize| {
                    let n = sample.nodes()[pr.idx[s]].as_ref().expect("present");
                    (n.u, n.v)
                };
                let (mut u, mut v) = (0.0, 0.0);
                for (s, wk) in tri.iter().zip(w) {
                    let (nu, nv) = uv(*s);
                    u += wk * nu;
                    v += wk * nv;
                }
                if let Some(j) = newton_height(map.as_ref(), plane, x, (u, v)) {
                    return Ok(Some(j));
                }
            }
            let near = buckets.nearest(&pr.pts, x, FIT_NODES);
            if near.len() < MIN_FIT {
                return Err(Error::InsufficientCoverage { target, found: near.len(), needed: MIN_FIT });
            }
            let mut k = FIT_NODES;
            let mut near = near;
            loop {
                if let Some(j) = quadratic_fit(&pr, &near, x) {
                    return Ok(Some(j));
                }
                if k >= MAX_FIT_NODES || near.len() < k {
                    return Ok(None);
                }
                k *= 2;
                near = buckets.nearest(&pr.pts, x, k);
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HeightField { jets, ..template })
}

fn newton_height(
    map: &dyn crate::surface::SurfaceMap,
    plane: &TimelikePlane,
    target: (f64, f64),
    start: (f64, f64),
) -> Option<HeightJet> {
    let (mut u, mut v) = start;
    let scale = 1.0 + target.0.abs() + target.1.abs();
    for _ in 0..40 {
        let jet = map.jet(u, v);
        let (p, q, _) = plane.coordinates(jet.x);
        let (rp, rq) = (p - target.0, q - target.1);
        if rp.abs().max(rq.abs()) <= 4.0 * f64::EPSILON * scale {
            return height_jet(&jet, plane).map(|(_, j)| j);
        }
        let (pu, qu, _) = plane.coordinates(jet.xu);
        let (pv, qv, _) = plane.coordinates(jet.xv);
        let det = pu * qv - pv * qu;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        u -= (qv * rp - pv * rq) / det;
        v -= (-qu * rp + pu * rq) / det;
    }
    // accept a final iterate that stalled at rounding level
    let jet = map.jet(u, v);
    let (p, q, _) = plane.coordinates(jet.x);
    ((p - target.0).abs().max((q - target.1).abs()) <= 1e-12 * scale)
        .then(|| height_jet(&jet, plane).map(|(_, j)| j))
        .flatten()
}

/// Quadratic least squares in offsets from the target; the coefficients
/// are the height jet at the target.
fn quadratic_fit(pr: &Projected, near: &[usize], x: (f64, f64)) -> Option<HeightJet> {
    let r = near
        .iter()
        .map(|&n| ((pr.pts[n].0 - x.0).powi(2) + (pr.pts[n].1 - x.1).powi(2)).sqrt())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let rows = near.len();
    let mut a = DMatrix::zeros(rows, 6);
    let mut b = DVector::zeros(rows);
    for (row, &n) in near.iter().enumerate() {
        // scaled offsets keep the system well conditioned
        let da = (pr.pts[n].0 - x.0) / r;
        let db = (pr.pts[n].1 - x.1) / r;
        let cols = [1.0, da, db, 0.5 * da * da, da * db, 0.5 * db * db];
        for (c, v) in cols.into_iter().enumerate() {
            a[(row, c)] = v;
        }
        b[row] = pr.h[n];
    }
    let svd = a.svd(true, true);
    let (lo, hi) = svd.singular_values.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(lo > FIT_RCOND * hi) {
        return None;
    }
    let sol = svd.solve(&b, 0.0).ok()?;
    Some(HeightJet {
        psi: sol[0],
        pa: sol[1] / r,
        pb: sol[2] / r,
        paa: sol[3] / (r * r),
        pab: sol[4] / (r * r),
        pbb: sol[5] / (r * r),
    })
}

/// Searches timelike planes for one over which `sample` is a graph.
/// Candidates are normals `(cosh b cos t, cosh b sin t, sinh b)` with
/// `t` in `[0, pi)` and `|b| <= 3`, visited in order of increasing `|b|`
/// so the coordinate y–z plane comes first. `resolution` is the number of
/// rotation and boost steps.
pub fn find_graph_plane(sample: &SurfaceSample, resolution: usize) -> Option<TimelikePlane> {
    let res = resolution.max(1);
    let half = res / 2;
    let mut boosts = vec![0.0];
    for k in 1..=half {
        let b = 3.0 * k as f64 / half as f64;
        boosts.extend([b, -b]);
    }
    for b in boosts {
        for t in 0..res {
            let theta = std::f64::consts::PI * t as f64 / res as f64;
            let plane = TimelikePlane::from_angles(b, theta);
            if check_injective(sample, &plane).is_ok() {
                return Some(plane);
            }
        }
    }
    None
}
