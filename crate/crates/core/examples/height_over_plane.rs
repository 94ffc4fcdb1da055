//! Recovering a Born-Infeld height function over a timelike plane.

use std::path::PathBuf;

use bjbi::bjorling::solve;
use bjbi::geometry_verify::{
    born_infeld_residual, find_graph_plane, height_over_plane_with, HeightOptions, ResampleMethod,
};
use bjbi::strips::load_strip;
use bjbi::surface::Domain;

fn main() -> bjbi::Result<()> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", "parabola_y.toml"].iter().collect();
    let strip = load_strip(&path)?;
    let sample = solve(&strip, &Domain::diamond(2.0, 41, 41))?;

    let plane = find_graph_plane(&sample, 64).expect("some boosted plane works");
    println!("graph plane normal b1 = {:?}", plane.b1());

    for method in [ResampleMethod::Auto, ResampleMethod::LeastSquares] {
        let opts = HeightOptions { na: 41, nb: 41, method };
        let field = height_over_plane_with(&sample, &plane, opts)?;
        let mut res: Vec<f64> = born_infeld_residual(&field).into_iter().flatten().map(f64::abs).collect();
        res.sort_by(f64::total_cmp);
        // the fitted path is only as good as its local stencil, which
        // cannot follow the steep region near the projection fold
        println!(
            "{method:?}: {} height nodes, median residual {:e}, max residual {:e}",
            field.defined_count(),
            res[res.len() / 2],
            res[res.len() - 1]
        );
    }
    Ok(())
}
