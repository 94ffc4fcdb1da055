//! Solving the Björling problem and checking the result.

use std::path::PathBuf;

use bjbi::bjorling::{interpolation_defects, solve};
use bjbi::geometry_verify::{causal_classify, fundamental_forms, SurfaceCausal};
use bjbi::strips::load_strip;
use bjbi::surface::Domain;

fn main() -> bjbi::Result<()> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", "parabola.toml"].iter().collect();
    let strip = load_strip(&path)?;
    let domain = Domain::rect(-1.0, 1.0, -0.5, 0.5, 41, 41);
    let sample = solve(&strip, &domain)?;
    println!("{} nodes, approx = {}", sample.node_count(), sample.approx_flag());

    let (dx, dn) = interpolation_defects(&strip, &sample, 101).expect("solver keeps its source");
    println!("max |X - c| = {dx:e}, max |N - n| = {dn:e} along the data axis");

    let forms = fundamental_forms(&sample);
    println!("max node-relative |H| = {:e}", forms.minimality_defect(1e-6));

    let timelike = causal_classify(&sample).into_iter().flatten().filter(|c| *c == SurfaceCausal::Timelike).count();
    println!("{timelike} timelike nodes");

    let centre = sample.get(20, 20).expect("centre node");
    println!("X(0,0) = {:?}, N(0,0) = {:?}", centre.x(), centre.normal);

    // The same strip on a diamond |u| + |v| <= 1
    let diamond = solve(&strip, &Domain::diamond(1.0, 41, 41))?;
    println!("diamond keeps {} of {} grid nodes", diamond.node_count(), 41 * 41);
    Ok(())
}
