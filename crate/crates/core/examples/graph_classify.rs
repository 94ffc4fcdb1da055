//! Deciding whether a Björling solution is a graph over the y-z plane.

use std::path::PathBuf;

use bjbi::bjorling::solve;
use bjbi::graphicality::{classify, is_p_matrix, is_positive_quasidefinite, jacobian_field, search_pqd_strips, Criterion, Mat2};
use bjbi::strips::load_strip;
use bjbi::surface::Domain;

fn main() -> bjbi::Result<()> {
    let m = Mat2::new(1.0, 3.0, 0.0, 1.0);
    println!("[[1,3],[0,1]]: PQD {}, P-matrix {}", is_positive_quasidefinite(&m, 1e-12), is_p_matrix(&m, 1e-12));

    for name in ["line_x_normal.toml", "line_y_normal.toml", "spacelike_boost.toml"] {
        let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
        let strip = load_strip(&path)?;
        let [t0, t1] = strip.interval();
        let sample = solve(&strip, &Domain::rect(t0, t1, -0.5, 0.5, 21, 21))?;
        let field = jacobian_field(&sample);
        for criterion in [Criterion::Pqd, Criterion::PMatrix] {
            let v = classify(&sample, &field, criterion);
            println!("{name:<22} {criterion:?}: {:?}", v.verdict);
            if let Some(w) = v.witnesses.first() {
                println!("    witness at ({}, {}): {}", w.u, w.v, w.reason);
            }
        }
    }

    // Deterministic random search for strips whose Jacobian is PQD everywhere
    let found = search_pqd_strips(40, 7);
    println!("search with budget 40 found {} PQD strips", found.len());
    Ok(())
}
