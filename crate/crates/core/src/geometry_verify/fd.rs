//! Second-order finite differences on gridded samples.

use crate::error::Result;
use crate::lorentz::Vec3L;
use crate::surface::{Domain, Node, SurfaceJet, SurfaceSample};

/// Derivative along one grid line: values at offsets -2..=2 around a node,
/// `None` where the neighbour is missing.
fn d1(w: [Option<Vec3L>; 5], h: f64) -> Vec3L {
    match w {
        [_, Some(m), _, Some(p), _] => (p - m) * (0.5 / h),
        [_, _, Some(c), Some(p), Some(pp)] => (c * -3.0 + p * 4.0 - pp) * (0.5 / h),
        [Some(mm), Some(m), Some(c), _, _] => (c * 3.0 - m * 4.0 + mm) * (0.5 / h),
        [_, _, Some(c), Some(p), None] => (p - c) * (1.0 / h),
        [_, Some(m), Some(c), None, _] => (c - m) * (1.0 / h),
        _ => Vec3L::ZERO,
    }
}

fn d2(w: [Option<Vec3L>; 5], h: f64, extra: Option<Vec3L>, extra_back: Option<Vec3L>) -> Vec3L {
    let h2 = h * h;
    match (w, extra, extra_back) {
        ([_, Some(m), Some(c), Some(p), _], _, _) => (p - c * 2.0 + m) * (1.0 / h2),
        ([_, _, Some(c), Some(p), Some(pp)], Some(ppp), _) => {
            (c * 2.0 - p * 5.0 + pp * 4.0 - ppp) * (1.0 / h2)
        }
        ([Some(mm), Some(m), Some(c), _, _], _, Some(mmm)) => {
            (c * 2.0 - m * 5.0 + mm * 4.0 - mmm) * (1.0 / h2)
        }
        ([_, _, Some(c), Some(p), Some(pp)], _, _) => (c - p * 2.0 + pp) * (1.0 / h2),
        ([Some(mm), Some(m), Some(c), _, _], _, _) => (c - m * 2.0 + mm) * (1.0 / h2),
        _ => Vec3L::ZERO,
    }
}

fn spacing(domain: &Domain) -> (f64, f64) {
    let [u0, u1, v0, v1] = domain.bounds();
    let h = |a: f64, b: f64, n: usize| if n > 1 { (b - a) / (n - 1) as f64 } else { 1.0 };
    (h(u0, u1, domain.nu), h(v0, v1, domain.nv))
}

fn grid_partials(
    domain: &Domain,
    values: &[Option<Vec3L>],
) -> (Vec<Option<Vec3L>>, Vec<Option<Vec3L>>, Vec<Option<Vec3L>>, Vec<Option<Vec3L>>) {
    let (nu, nv) = (domain.nu, domain.nv);
    let (hu, hv) = spacing(domain);
    let at = |i: isize, j: isize| -> Option<Vec3L> {
        if i < 0 || j < 0 || i >= nu as isize || j >= nv as isize {
            None
        } else {
            values[j as usize * nu + i as usize]
        }
    };
    let n = nu * nv;
    let (mut xu, mut xv, mut xuu, mut xvv) = (vec![None; n], vec![None; n], vec![None; n], vec![None; n]);
    for j in 0..nv as isize {
        for i in 0..nu as isize {
            let k = j as usize * nu + i as usize;
            if values[k].is_none() {
                continue;
            }
            let wu = [at(i - 2, j), at(i - 1, j), at(i, j), at(i + 1, j), at(i + 2, j)];
            let wv = [at(i, j - 2), at(i, j - 1), at(i, j), at(i, j + 1), at(i, j + 2)];
            xu[k] = Some(d1(wu, hu));
            xv[k] = Some(d1(wv, hv));
            xuu[k] = Some(d2(wu, hu, at(i + 3, j), at(i - 3, j)));
            xvv[k] = Some(d2(wv, hv, at(i, j + 3), at(i, j - 3)));
        }
    }
    (xu, xv, xuu, xvv)
}

/// Finite-difference jets from the positions of a sample: central
/// differences in the interior, one-sided second-order stencils at edges.
pub fn fd_partials(sample: &SurfaceSample) -> Vec<Option<SurfaceJet>> {
    let positions: Vec<Option<Vec3L>> = sample.nodes().iter().map(|n| n.map(|n| n.jet.x)).collect();
    fd_jets(sample.domain(), &positions)
}

fn fd_jets(domain: &Domain, positions: &[Option<Vec3L>]) -> Vec<Option<SurfaceJet>> {
    let (xu, xv, xuu, xvv) = grid_partials(domain, positions);
    // mixed partial: differentiate X_u along v
    let (_, xuv, _, _) = grid_partials(domain, &xu);
    positions
        .iter()
        .enumerate()
        .map(|(k, x)| {
            Some(SurfaceJet {
                x: (*x)?,
                xu: xu[k]?,
                xv: xv[k]?,
                xuu: xuu[k]?,
                xuv: xuv[k]?,
                xvv: xvv[k]?,
            })
        })
        .collect()
}

/// Builds a sample from bare positions on a grid, estimating partials by
/// finite differences. Used when a surface is read back from disk.
pub fn sample_from_positions(domain: Domain, positions: Vec<Option<Vec3L>>) -> Result<SurfaceSample> {
    domain.validate()?;
    let jets = fd_jets(&domain, &positions);
    let nodes = jets
        .into_iter()
        .enumerate()
        .map(|(k, jet)| {
            jet.map(|jet| {
                let (u, v) = domain.node_coords(k % domain.nu, k / domain.nu);
                Node {
                    u,
                    v,
                    jet,
                    normal: jet.normal(),
                }
            })
        })
        .collect();
    SurfaceSample::from_nodes(domain, nodes, true)
}
