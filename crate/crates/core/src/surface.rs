//! Gridded surface samples with exact first and second partials.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{lorentz_cross, unit_normalize, Vec3L};

/// Position and exact partials of a parametrized surface at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SurfaceJet {
    pub x: Vec3L,
    pub xu: Vec3L,
    pub xv: Vec3L,
    pub xuu: Vec3L,
    pub xuv: Vec3L,
    pub xvv: Vec3L,
}

impl SurfaceJet {
    /// Unit normal `X_u x X_v / sqrt|<.,.>|`, or `None` where it is lightlike.
    pub fn normal(&self) -> Option<Vec3L> {
        unit_normalize(lorentz_cross(self.xu, self.xv)).ok()
    }
}

/// An analytic surface that can be evaluated anywhere in its chart.
pub trait SurfaceMap: Send + Sync {
    fn jet(&self, u: f64, v: f64) -> SurfaceJet;
}

impl<F> SurfaceMap for F
where
    F: Fn(f64, f64) -> SurfaceJet + Send + Sync,
{
    fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        self(u, v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum DomainShape {
    Rect { u0: f64, u1: f64, v0: f64, v1: f64 },
    Diamond { m: f64 },
}

/// Sampling domain: a rectangle or the diamond `|u| + |v| <= M`, with grid
/// counts along `u` and `v`. Diamond grids cover `[-M, M]^2` and keep only
/// the nodes inside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub shape: DomainShape,
    pub nu: usize,
    pub nv: usize,
}

impl Domain {
    pub fn rect(u0: f64, u1: f64, v0: f64, v1: f64, nu: usize, nv: usize) -> Self {
        Self {
            shape: DomainShape::Rect { u0, u1, v0, v1 },
            nu,
            nv,
        }
    }

    pub fn diamond(m: f64, nu: usize, nv: usize) -> Self {
        Self {
            shape: DomainShape::Diamond { m },
            nu,
            nv,
        }
    }

    pub fn bounds(&self) -> [f64; 4] {
        match self.shape {
            DomainShape::Rect { u0, u1, v0, v1 } => [u0, u1, v0, v1],
            DomainShape::Diamond { m } => [-m, m, -m, m],
        }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        match self.shape {
            DomainShape::Rect { .. } => true,
            DomainShape::Diamond { m } => in_diamond(u, v, m),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu == 0 || self.nv == 0 {
            return Err(Error::EmptyDomain(format!("grid {}x{}", self.nu, self.nv)));
        }
        let [u0, u1, v0, v1] = self.bounds();
        if ![u0, u1, v0, v1].iter().all(|x| x.is_finite()) || u0 > u1 || v0 > v1 {
            return Err(Error::EmptyDomain(format!("bounds {u0} {u1} {v0} {v1}")));
        }
        if let DomainShape::Diamond { m } = self.shape {
            if m < 0.0 {
                return Err(Error::EmptyDomain(format!("diamond radius {m}")));
            }
        }
        Ok(())
    }

    /// Parameter values of grid node `(i, j)`.
    pub fn node_coords(&self, i: usize, j: usize) -> (f64, f64) {
        let [u0, u1, v0, v1] = self.bounds();
        (lerp_node(u0, u1, i, self.nu), lerp_node(v0, v1, j, self.nv))
    }

    /// The same domain with both grid counts refined by 2x (spacing halved).
    pub fn refined(&self) -> Self {
        Self {
            shape: self.shape,
            nu: 2 * self.nu - 1,
            nv: 2 * self.nv - 1,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            DomainShape::Rect { u0, u1, v0, v1 } => {
                write!(f, "rect {u0} {u1} {v0} {v1} grid {}x{}", self.nu, self.nv)
            }
            DomainShape::Diamond { m } => write!(f, "diamond {m} grid {}x{}", self.nu, self.nv),
        }
    }
}

// The convex form keeps the midpoint of a symmetric range exactly zero.
fn lerp_node(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if n == 1 {
        return 0.5 * (a + b);
    }
    let s = i as f64 / (n - 1) as f64;
    a * (1.0 - s) + b * s
}

fn in_diamond(u: f64, v: f64, m: f64) -> bool {
    u.abs() + v.abs() <= m * (1.0 + 1e-12) + 1e-15
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataAxis {
    /// Data carried on `v = 0`, parametrized by `u`.
    UAxis,
    /// Data carried on `u = 0`, parametrized by `v`.
    VAxis,
}

/// Where the Björling data sits inside a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisInfo {
    pub axis: DataAxis,
    pub interval: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub u: f64,
    pub v: f64,
    pub jet: SurfaceJet,
    /// Unit normal; `None` where `X_u x X_v` is lightlike.
    pub normal: Option<Vec3L>,
}

impl Node {
    pub fn x(&self) -> Vec3L {
        self.jet.x
    }
}

/// A surface sampled on a (possibly masked) regular grid. Node `(i, j)` is
/// stored at `j * nu + i`, so rows run along `u`.
#[derive(Clone)]
pub struct SurfaceSample {
    domain: Domain,
    nodes: Vec<Option<Node>>,
    approx: bool,
    axis: Option<AxisInfo>,
    normal_sign: f64,
    source: Option<Arc<dyn SurfaceMap>>,
}

impl fmt::Debug for SurfaceSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceSample")
            .field("domain", &self.domain)
            .field("nodes", &self.node_count())
            .field("approx", &self.approx)
            .field("axis", &self.axis)
            .field("normal_sign", &self.normal_sign)
            .field("has_source", &self.source.is_some())
            .finish()
    }
}

impl SurfaceSample {
    /// Evaluates `map` at every grid node of `domain` in parallel.
    pub fn from_map(domain: Domain, map: Arc<dyn SurfaceMap>, approx: bool) -> Result<Self> {
        domain.validate()?;
        let nodes = (0..domain.nu * domain.nv)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % domain.nu, k / domain.nu);
                let (u, v) = domain.node_coords(i, j);
                domain.contains(u, v).then(|| {
                    let jet = map.jet(u, v);
                    Node {
                        u,
                        v,
                        jet,
                        normal: jet.normal(),
                    }
                })
            })
            .collect::<Vec<_>>();
        if nodes.iter().all(Option::is_none) {
            return Err(Error::EmptyDomain(domain.to_string()));
        }
        Ok(Self {
            domain,
            nodes,
            approx,
            axis: None,
            normal_sign: 1.0,
            source: Some(map),
        })
    }

    /// Builds a sample from precomputed nodes (e.g. read back from disk).
    /// `nodes.len()` must equal `nu * nv`.
    pub fn from_nodes(domain: Domain, nodes: Vec<Option<Node>>, approx: bool) -> Result<Self> {
        if nodes.len() != domain.nu * domain.nv {
            return Err(Error::Parse(format!(
                "expected {} nodes, got {}",
                domain.nu * domain.nv,
                nodes.len()
            )));
        }
        Ok(Self {
            domain,
            nodes,
            approx,
            axis: None,
            normal_sign: 1.0,
            source: None,
        })
    }

    pub(crate) fn set_axis(&mut self, axis: AxisInfo) {
        self.axis = Some(axis);
    }

    /// Flips every stored normal when `sign` is negative and records it.
    pub(crate) fn set_normal_sign(&mut self, sign: f64) {
        if sign < 0.0 {
            for n in self.nodes.iter_mut().flatten() {
                n.normal = n.normal.map(|v| -v);
            }
        }
        self.normal_sign = sign.signum();
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn nu(&self) -> usize {
        self.domain.nu
    }

    pub fn nv(&self) -> usize {
        self.domain.nv
    }

    pub fn approx_flag(&self) -> bool {
        self.approx
    }

    pub fn axis(&self) -> Option<AxisInfo> {
        self.axis
    }

    pub fn normal_sign(&self) -> f64 {
        self.normal_sign
    }

    /// The analytic surface this sample came from, when known.
    pub fn source(&self) -> Option<&Arc<dyn SurfaceMap>> {
        self.source.as_ref()
    }

    /// Drops the analytic source, leaving only the sampled data.
    pub fn without_source(mut self) -> Self {
        self.source = None;
        self
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.domain.nu + i
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Node> {
        if i >= self.domain.nu || j >= self.domain.nv {
            return None;
        }
        self.nodes[self.index(i, j)].as_ref()
    }

    pub fn nodes(&self) -> &[Option<Node>] {
        &self.nodes
    }

    /// Present nodes with their flat indices, in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Node)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(k, n)| n.as_ref().map(|n| (k, n)))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_some()).count()
    }

    /// Nodes on the data axis with parameter inside the data interval,
    /// ordered by that parameter.
    pub fn data_axis_nodes(&self) -> Vec<(f64, usize)> {
        let Some(info) = self.axis else {
            return Vec::new();
        };
        let [t0, t1] = info.interval;
        let mut out: Vec<(f64, usize)> = self
            .iter()
            .filter_map(|(k, n)| {
                let (t, off) = match info.axis {
                    DataAxis::UAxis => (n.u, n.v),
                    DataAxis::VAxis => (n.v, n.u),
                };
                (off == 0.0 && t >= t0 && t <= t1).then_some((t, k))
            })
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Grid triangles over present nodes; each cell is split along the
    /// diagonal from its lower-left to its upper-right corner.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let (nu, nv) = (self.domain.nu, self.domain.nv);
        let mut out = Vec::new();
        for j in 0..nv.saturating_sub(1) {
            for i in 0..nu.saturating_sub(1) {
                let a = self.index(i, j);
                let b = self.index(i + 1, j);
                let c = self.index(i + 1, j + 1);
                let d = self.index(i, j + 1);
                for tri in [[a, b, c], [a, c, d]] {
                    if tri.iter().all(|&k| self.nodes[k].is_some()) {
                        out.push(tri);
                    }
                }
            }
        }
        out
    }

    /// Largest Euclidean coordinate magnitude, at least 1.
    pub fn scale(&self) -> f64 {
        self.iter().fold(1.0, |m, (_, n)| m.max(n.jet.x.max_abs()))
    }
}

/// Keeps the nodes with `|u| + |v| <= M`.
pub fn restrict_to_diamond(sample: &SurfaceSample, m: f64) -> Result<SurfaceSample> {
    if !(m >= 0.0) {
        return Err(Error::EmptyRestriction(m));
    }
    let mut out = sample.clone();
    for node in out.nodes.iter_mut() {
        if let Some(n) = node {
            if !in_diamond(n.u, n.v, m) {
                *node = None;
            }
        }
    }
    if out.node_count() == 0 {
        return Err(Error::EmptyRestriction(m));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Arc<dyn SurfaceMap> {
        Arc::new(|u: f64, v: f64| SurfaceJet {
            x: Vec3L::new(0.0, -v, u),
            xu: Vec3L::E3,
            xv: -Vec3L::E2,
            ..Default::default()
        })
    }

    #[test]
    fn symmetric_grids_hit_zero() {
        let d = Domain::rect(-1.0, 1.0, -1.0, 1.0, 101, 41);
        assert_eq!(d.node_coords(50, 20), (0.0, 0.0));
        let d = Domain::rect(-1.0, 1.0, -0.3, 0.3, 1, 1);
        assert_eq!(d.node_coords(0, 0), (0.0, 0.0));
    }

    #[test]
    fn diamond_restriction() {
        let s = SurfaceSample::from_map(Domain::rect(-1.0, 1.0, -1.0, 1.0, 11, 11), plane(), false).unwrap();
        let same = restrict_to_diamond(&s, 5.0).unwrap();
        assert_eq!(same.node_count(), s.node_count());

        let half = restrict_to_diamond(&s, 0.5).unwrap();
        assert!(half.iter().all(|(_, n)| n.u.abs() + n.v.abs() <= 0.5 + 1e-12));
        let expected = s.iter().filter(|(_, n)| n.u.abs() + n.v.abs() <= 0.5 + 1e-12).count();
        assert_eq!(half.node_count(), expected);
        assert!(half.triangles().len() < s.triangles().len());

        let even = SurfaceSample::from_map(Domain::rect(-1.0, 1.0, -1.0, 1.0, 10, 10), plane(), false).unwrap();
        assert!(matches!(restrict_to_diamond(&even, 0.0), Err(Error::EmptyRestriction(_))));
    }

    #[test]
    fn triangles_cover_full_grid() {
        let s = SurfaceSample::from_map(Domain::rect(0.0, 1.0, 0.0, 1.0, 4, 3), plane(), false).unwrap();
        assert_eq!(s.triangles().len(), 2 * 3 * 2);
        assert_eq!(s.triangles()[0], [0, 1, 5]);
    }
}
