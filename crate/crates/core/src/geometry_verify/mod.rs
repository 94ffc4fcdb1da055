//! Numerical differential geometry on sampled surfaces: fundamental forms,
//! mean and Gauss curvature, causal classification, local graph axes, and
//! Born-Infeld heights over timelike planes.

mod fd;
mod height;
mod plane;

pub use fd::{fd_partials, sample_from_positions};
pub use height::{
    born_infeld_relative_residual, born_infeld_residual, gauss_curvature_graph, graph_jets, height_jet, HeightField, HeightJet,
    Signature,
};
pub use plane::{
    check_injective, find_graph_plane, height_over_plane, height_over_plane_with, HeightOptions,
    ResampleMethod,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::surface::SurfaceSample;

/// First and second fundamental forms at one node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NodeForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `EG - F^2`
    pub disc: f64,
    /// Second form and mean curvature; absent where the metric degenerates.
    pub second: Option<SecondForm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SecondForm {
    pub l: f64,
    pub m: f64,
    pub n2: f64,
    pub h: f64,
    /// Magnitude of the terms that cancel in `H`, for relative checks.
    pub h_scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalForms {
    pub nodes: Vec<Option<NodeForms>>,
    /// Flat indices of nodes whose metric is degenerate.
    pub degenerate: Vec<usize>,
}

fn metric_tol(e: f64, f: f64, g: f64) -> f64 {
    let s = 1.0 + e.abs() + f.abs() + g.abs();
    1e-10 * s * s
}

pub fn fundamental_forms(sample: &SurfaceSample) -> FundamentalForms {
    let nodes: Vec<Option<NodeForms>> = sample
        .nodes()
        .par_iter()
        .map(|node| {
            let n = node.as_ref()?;
            let j = &n.jet;
            let e = j.xu.dot(j.xu);
            let f = j.xu.dot(j.xv);
            let g = j.xv.dot(j.xv);
            let disc = e * g - f * f;
            let second = match n.normal {
                Some(nrm) if disc.abs() > metric_tol(e, f, g) => {
                    let l = j.xuu.dot(nrm);
                    let m = j.xuv.dot(nrm);
                    let n2 = j.xvv.dot(nrm);
                    let h = (g * l - 2.0 * f * m + e * n2) / (2.0 * disc);
                    let h_scale = ((g * l).abs() + 2.0 * (f * m).abs() + (e * n2).abs()) / (2.0 * disc.abs());
                    Some(SecondForm { l, m, n2, h, h_scale })
                }
                _ => None,
            };
            Some(NodeForms { e, f, g, disc, second })
        })
        .collect();
    let degenerate = nodes
        .iter()
        .enumerate()
        .filter_map(|(k, n)| n.as_ref().filter(|n| n.second.is_none()).map(|_| k))
        .collect();
    FundamentalForms { nodes, degenerate }
}

impl FundamentalForms {
    /// Largest `|H| / max(1, h_scale)` over nodes with `|EG - F^2| >= disc_min`.
    pub fn minimality_defect(&self, disc_min: f64) -> f64 {
        self.nodes
            .iter()
            .flatten()
            .filter(|n| n.disc.abs() >= disc_min)
            .filter_map(|n| n.second)
            .fold(0.0, |m, s| m.max(s.h.abs() / s.h_scale.max(1.0)))
    }

    /// Largest `|H|` over nodes with `|EG - F^2| >= disc_min`.
    pub fn max_abs_h(&self, disc_min: f64) -> f64 {
        self.nodes
            .iter()
            .flatten()
            .filter(|n| n.disc.abs() >= disc_min)
            .filter_map(|n| n.second)
            .fold(0.0, |m, s| m.max(s.h.abs()))
    }
}

/// Gauss curvature from the shape operator, `-(L N - M^2) / (EG - F^2)`.
///
/// The sign matches [`gauss_curvature_graph`] on timelike graphs.
pub fn gauss_from_forms(n: &NodeForms) -> Option<f64> {
    let s = n.second?;
    Some(-(s.l * s.n2 - s.m * s.m) / n.disc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceCausal {
    Timelike,
    Spacelike,
    Degenerate,
}

/// Sign of `EG - F^2` per node.
pub fn causal_classify(sample: &SurfaceSample) -> Vec<Option<SurfaceCausal>> {
    sample
        .nodes()
        .iter()
        .map(|node| {
            let j = node.as_ref()?.jet;
            let (e, f, g) = (j.xu.dot(j.xu), j.xu.dot(j.xv), j.xv.dot(j.xv));
            let disc = e * g - f * f;
            let tol = metric_tol(e, f, g);
            Some(if disc < -tol {
                SurfaceCausal::Timelike
            } else if disc > tol {
                SurfaceCausal::Spacelike
            } else {
                SurfaceCausal::Degenerate
            })
        })
        .collect()
}

/// Coordinate planes over which a node is locally a graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GraphAxes {
    pub xy: bool,
    pub xz: bool,
    pub yz: bool,
}

pub fn local_graph_axes(sample: &SurfaceSample) -> Vec<Option<GraphAxes>> {
    sample
        .nodes()
        .iter()
        .map(|node| {
            let j = node.as_ref()?.jet;
            let (a, b) = (j.xu, j.xv);
            let tol = 1e-10 * (1.0 + a.euclid_norm() * b.euclid_norm());
            let minor = |r: usize, s: usize| a.get(r) * b.get(s) - b.get(r) * a.get(s);
            Some(GraphAxes {
                xy: minor(0, 1).abs() > tol,
                xz: minor(0, 2).abs() > tol,
                yz: minor(1, 2).abs() > tol,
            })
        })
        .collect()
}
