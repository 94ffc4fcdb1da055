//! Barbishov-Chernikov surfaces from a generating pair (F, G).

use bjbi::bc_rep::{bc_lightlike_decomposition, bc_normal, bc_surface, printed_normal, BCData};
use bjbi::geometry_verify::{fundamental_forms, gauss_curvature_graph, graph_jets};
use bjbi::lorentz::TimelikePlane;
use bjbi::RealPoly;

fn main() -> bjbi::Result<()> {
    let data = BCData::new(
        RealPoly::new(vec![0.0, 1.0, 0.1, -0.05]),
        RealPoly::new(vec![0.0, 1.0, 0.0, 0.08]),
        [-0.5, 0.5, -0.5, 0.5],
        (31, 31),
    );
    let sample = bc_surface(&data)?;
    println!("{} nodes, max node-relative |H| = {:e}", sample.node_count(), fundamental_forms(&sample).minimality_defect(1e-6));

    let pair = bc_lightlike_decomposition(&data)?;
    let (da, db) = pair.lightlike_defects();
    println!("lightlike defects {da:e} {db:e}");
    println!("X(0.2, -0.1) = {:?}", pair.reconstruct(0.2, -0.1));

    // The unit normal depends only on (r, s), never on F or G
    println!("N(0.2, -0.1)       = {:?}", bc_normal(&data, 0.2, -0.1)?);
    println!("printed formula    = {:?}", printed_normal(0.2, -0.1));

    // Gauss curvature of the height function over the y-z plane
    let field = graph_jets(&sample, &TimelikePlane::yz());
    let k = gauss_curvature_graph(&field, 1e-12);
    let zeros = k.iter().flatten().filter(|k| k.abs() < 1e-12).count();
    println!("{zeros} nodes with K = 0 out of {}", k.iter().flatten().count());
    Ok(())
}
