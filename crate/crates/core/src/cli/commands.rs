use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::export::{fmt_g17, read_csv, to_csv, to_obj};
use super::{write_file, CliError, RunConfig};
use crate::bc_rep::{bc_lightlike_decomposition, bc_normal, bc_surface, load_bc, printed_normal, BCData};
use crate::bjorling::{interpolation_defects, solve};
use crate::error::Error;
use crate::geometry_verify::{
    born_infeld_relative_residual, born_infeld_residual, fundamental_forms, gauss_curvature_graph, graph_jets, sample_from_positions, FundamentalForms,
};
use crate::graphicality::{classify, jacobian_field, projection_collision, Verdict};
use crate::lorentz::{TimelikePlane, Vec3L};
use crate::split_scalar::RealPoly;
use crate::strips::{load_strip, Strip};
use crate::surface::{restrict_to_diamond, Domain, DomainShape, SurfaceSample};

const DEFAULT_GRID: [usize; 2] = [41, 41];
/// Nodes closer to metric degeneracy than this are left out of `H` checks.
const DISC_MIN: f64 = 1e-6;
const DEFAULT_H_TOL: f64 = 1e-8;
const EXACT_TOL: f64 = 1e-12;
/// Gauss curvature below this counts as zero in the B-C report.
const K_ZERO: f64 = 1e-8;

fn require_file(path: &Path, what: &str) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::input(format!("{what} file not found: {}", path.display())))
    }
}

fn header(config: &RunConfig, approx: bool) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), json!("bjbi"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    m.insert("approx_flag".into(), json!(approx));
    m
}

fn finish_report(dir: &Path, mut report: serde_json::Map<String, Value>, passed: bool) -> Result<PathBuf, CliError> {
    report.insert("passed".into(), json!(passed));
    let mut text = serde_json::to_string_pretty(&Value::Object(report)).expect("report serializes");
    text.push('\n');
    write_file(dir, "report.json", &text)
}

fn strip_domain(config: &RunConfig, strip: &Strip) -> Domain {
    let [nu, nv] = config.grid.unwrap_or(DEFAULT_GRID);
    let shape = config.domain.unwrap_or_else(|| {
        let [t0, t1] = strip.interval();
        let h = 0.5 * (t1 - t0);
        DomainShape::Rect {
            u0: t0,
            u1: t1,
            v0: -h,
            v1: h,
        }
    });
    Domain { shape, nu, nv }
}

fn load_and_solve(config: &RunConfig) -> Result<(Strip, SurfaceSample), CliError> {
    require_file(&config.input, "strip")?;
    let strip = load_strip(&config.input)?;
    let sample = solve(&strip, &strip_domain(config, &strip))?;
    Ok((strip, sample))
}

fn forms_summary(forms: &FundamentalForms) -> Value {
    json!({
        "max_abs_H": forms.max_abs_h(DISC_MIN),
        "minimality_defect": forms.minimality_defect(DISC_MIN),
        "disc_min": DISC_MIN,
        "degenerate_nodes": forms.degenerate.len(),
    })
}

/// Solves a strip and writes `mesh.obj`, `surface.csv` and `report.json`.
///
/// Fails with the check exit code when `H` or the data-axis interpolation
/// is off; approximate (series) strips are reported but not checked.
pub fn cmd_solve(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let (strip, sample) = load_and_solve(config)?;
    let approx = sample.approx_flag();
    let forms = fundamental_forms(&sample);
    let (x_err, n_err) = interpolation_defects(&strip, &sample, 101).unwrap_or((f64::NAN, f64::NAN));
    let scale = sample.scale();
    let h_tol = config.tol.unwrap_or(DEFAULT_H_TOL);

    let h_ok = forms.minimality_defect(DISC_MIN) <= h_tol;
    let interp_ok = x_err <= EXACT_TOL * scale;
    let passed = approx || (h_ok && interp_ok);

    let mut report = header(config, approx);
    report.insert("node_count".into(), json!(sample.node_count()));
    report.insert("domain".into(), serde_json::to_value(sample.domain()).expect("domain serializes"));
    report.insert("scale".into(), json!(scale));
    report.insert("normal_sign".into(), json!(sample.normal_sign()));
    report.insert("max_abs_H".into(), json!(forms.max_abs_h(DISC_MIN)));
    report.insert("curvature".into(), forms_summary(&forms));
    report.insert("boundary_interpolation_error".into(), json!(x_err));
    report.insert("boundary_normal_error".into(), json!(n_err));
    report.insert("h_tol".into(), json!(h_tol));

    let dir = &config.out;
    let written = vec![
        write_file(dir, "mesh.obj", &to_obj(&sample))?,
        write_file(dir, "surface.csv", &to_csv(&sample))?,
        finish_report(dir, report, passed)?,
    ];
    if !passed {
        return Err(CliError::check(format!(
            "checks failed: minimality defect {:e}, interpolation error {x_err:e}",
            forms.minimality_defect(DISC_MIN)
        )));
    }
    Ok(written)
}

/// Classifies the Björling solution of a strip as a y-z graph and writes
/// `report.json`.
pub fn cmd_classify(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let (_, sample) = load_and_solve(config)?;
    let field = jacobian_field(&sample);
    let verdict = classify(&sample, &field, config.criterion);
    // a certified graph must project injectively
    let collision = (verdict.verdict == Verdict::GraphSolutionExists)
        .then(|| projection_collision(&sample, 1e-12 * sample.scale()))
        .flatten();

    let mut report = header(config, sample.approx_flag());
    report.insert("node_count".into(), json!(sample.node_count()));
    report.insert("verdict".into(), serde_json::to_value(verdict.verdict).expect("verdict serializes"));
    report.insert("criterion".into(), serde_json::to_value(verdict.criterion).expect("criterion serializes"));
    report.insert("certified_on_sampled_set".into(), json!(verdict.certified_on_sampled_set));
    report.insert("tol_zero".into(), json!(verdict.tol_zero));
    report.insert("witnesses".into(), serde_json::to_value(&verdict.witnesses).expect("witnesses serialize"));
    report.insert("projection_collision".into(), json!(collision.map(|(a, b)| [a, b])));
    let passed = collision.is_none();
    let path = finish_report(&config.out, report, passed)?;
    if let Some((a, b)) = collision {
        return Err(CliError::check(format!("certified graph has colliding projected nodes {a} and {b}")));
    }
    Ok(vec![path])
}

fn bc_config(config: &RunConfig) -> Result<(BCData, Option<f64>), CliError> {
    require_file(&config.input, "bc")?;
    let mut d = load_bc(&config.input)?;
    if let Some([nr, ns]) = config.grid {
        d.grid = (nr, ns);
    }
    let mut diamond = None;
    match config.domain {
        Some(DomainShape::Rect { u0, u1, v0, v1 }) => d.domain = [u0, u1, v0, v1],
        Some(DomainShape::Diamond { m }) => {
            d.domain = [-m, m, -m, m];
            diamond = Some(m);
        }
        None => {}
    }
    Ok((d, diamond))
}

/// Interior probe points of the `(r, s)` rectangle, five per axis.
fn probe_points(d: &BCData) -> Vec<(f64, f64)> {
    let [r0, r1, s0, s1] = d.domain;
    let at = |a: f64, b: f64, k: usize| a + (b - a) * (k as f64 + 1.0) / 6.0;
    (0..25).map(|k| (at(r0, r1, k % 5), at(s0, s1, k / 5))).collect()
}

fn lightlike_csv(d: &BCData, pair: &crate::bc_rep::LightlikePair) -> String {
    let mut out = String::from("curve,t,x,y,z,dx,dy,dz,inner_d\n");
    let [r0, r1, s0, s1] = d.domain;
    let grid = |a: f64, b: f64, n: usize| -> Vec<f64> {
        (0..n).map(|i| if n == 1 { 0.5 * (a + b) } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
    };
    for (name, curve, ts) in [
        ("psi", &pair.psi, grid(r0, r1, d.grid.0)),
        ("phi", &pair.phi, grid(s0, s1, d.grid.1)),
    ] {
        let dc = curve.derive();
        for t in ts {
            let (p, v) = (curve.eval(t), dc.eval(t));
            let cells = [t, p.x, p.y, p.z, v.x, v.y, v.z, v.dot(v)].map(fmt_g17);
            let _ = writeln!(out, "{name},{}", cells.join(","));
        }
    }
    out
}

/// Generates a B-C surface and writes `mesh.obj`, `surface.csv`,
/// `lightlike.csv` and `report.json`.
pub fn cmd_bc(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let (d, diamond) = bc_config(config)?;
    let pair = bc_lightlike_decomposition(&d)?;
    let mut sample = bc_surface(&d)?;
    if let Some(m) = diamond {
        sample = restrict_to_diamond(&sample, m)?;
    }
    let scale = sample.scale();
    let forms = fundamental_forms(&sample);
    let (psi_defect, phi_defect) = pair.lightlike_defects();
    let reconstruction = sample
        .iter()
        .map(|(_, n)| (n.jet.x - pair.reconstruct(n.u, n.v)).euclid_norm())
        .fold(0.0, f64::max);

    // F,G independence of the normal against the identity pair
    let reference = BCData::new(RealPoly::t(), RealPoly::t(), d.domain, d.grid);
    let mut normal_dev = 0.0f64;
    let mut comparisons = Vec::new();
    for (r, s) in probe_points(&d) {
        let (Ok(ours), Ok(reference)) = (bc_normal(&d, r, s), bc_normal(&reference, r, s)) else {
            continue;
        };
        let dev = (ours - reference).max_abs().min((ours + reference).max_abs());
        normal_dev = normal_dev.max(dev);
        let printed = printed_normal(r, s);
        let (xr, xs) = tangents(&d, r, s);
        comparisons.push(json!({
            "r": r,
            "s": s,
            "normal": ours.to_array(),
            "printed_normal": printed.to_array(),
            "printed_dot_xr": printed.dot(xr),
            "printed_dot_xs": printed.dot(xs),
        }));
    }

    // Gauss curvature over the y-z plane, with K = 0 and timelike-condition
    // failures flagged
    let jets = graph_jets(&sample, &TimelikePlane::yz());
    let curvature = gauss_curvature_graph(&jets, 1e-12);
    let residual = born_infeld_residual(&jets);
    let nodes: Vec<(f64, f64)> = sample.iter().map(|(_, n)| (n.u, n.v)).collect();
    let mut k_zero = Vec::new();
    let mut not_timelike_graph = Vec::new();
    for (k, &(u, v)) in nodes.iter().enumerate() {
        match curvature[k] {
            Some(kk) if kk.abs() <= K_ZERO => k_zero.push([u, v]),
            Some(_) => {}
            None => not_timelike_graph.push([u, v]),
        }
    }
    let max_residual = residual
        .iter()
        .zip(&curvature)
        .filter_map(|(r, k)| k.and(*r))
        .fold(0.0, |m: f64, r| m.max(r.abs()));

    let h_tol = config.tol.unwrap_or(DEFAULT_H_TOL);
    let checks = [
        ("lightlike", psi_defect.max(phi_defect) <= EXACT_TOL),
        ("reconstruction", reconstruction <= EXACT_TOL * scale),
        ("minimality", forms.minimality_defect(DISC_MIN) <= h_tol),
        ("normal_independence", normal_dev <= EXACT_TOL),
    ];
    let passed = checks.iter().all(|c| c.1);

    let mut report = header(config, false);
    report.insert("node_count".into(), json!(sample.node_count()));
    report.insert("scale".into(), json!(scale));
    report.insert("lightlike_defect_psi".into(), json!(psi_defect));
    report.insert("lightlike_defect_phi".into(), json!(phi_defect));
    report.insert("max_lightlike_defect".into(), json!(psi_defect.max(phi_defect)));
    report.insert("reconstruction_error".into(), json!(reconstruction));
    report.insert("max_abs_H".into(), json!(forms.max_abs_h(DISC_MIN)));
    report.insert("curvature".into(), forms_summary(&forms));
    report.insert("normal_independence_max_dev".into(), json!(normal_dev));
    report.insert("normal_comparison".into(), Value::Array(comparisons));
    report.insert("gauss_zero_nodes".into(), json!(k_zero));
    report.insert("non_timelike_graph_nodes".into(), json!(not_timelike_graph));
    report.insert("max_abs_born_infeld_residual".into(), json!(max_residual));
    report.insert(
        "checks".into(),
        Value::Object(checks.iter().map(|(n, ok)| (n.to_string(), json!(ok))).collect()),
    );

    let dir = &config.out;
    let written = vec![
        write_file(dir, "mesh.obj", &to_obj(&sample))?,
        write_file(dir, "surface.csv", &to_csv(&sample))?,
        write_file(dir, "lightlike.csv", &lightlike_csv(&d, &pair))?,
        finish_report(dir, report, passed)?,
    ];
    if !passed {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
        return Err(CliError::check(format!("checks failed: {}", failed.join(", "))));
    }
    Ok(written)
}

fn tangents(d: &BCData, r: f64, s: f64) -> (Vec3L, Vec3L) {
    let df = d.f.derive().eval_real(r);
    let dg = d.g.derive().eval_real(s);
    (
        Vec3L::new(r, 0.5 * (1.0 - r * r), -0.5 * (1.0 + r * r)) * df,
        Vec3L::new(s, 0.5 * (1.0 - s * s), 0.5 * (1.0 + s * s)) * dg,
    )
}

/// Re-checks a surface CSV with finite differences: mean curvature and the
/// Born-Infeld residual of the height over the y-z plane. Writes
/// `report.json`.
///
/// Both checks are relative to the size of the terms that cancel, so they
/// stay meaningful near metric degeneracies. The default tolerance
/// `1e-6 + 10 h^2` (with `h` the larger grid step) tracks the second-order
/// discretisation error.
pub fn cmd_verify(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    require_file(&config.input, "surface")?;
    let text = std::fs::read_to_string(&config.input).map_err(|e| CliError::from(Error::Io(e)))?;
    let csv = read_csv(&text)?;
    if csv.domain.nu < 3 || csv.domain.nv < 3 {
        return Err(CliError::input("surface csv needs at least 3 distinct u and v values"));
    }
    let [u0, u1, v0, v1] = csv.domain.bounds();
    let h = ((u1 - u0) / (csv.domain.nu - 1) as f64).max((v1 - v0) / (csv.domain.nv - 1) as f64);
    let sample = sample_from_positions(csv.domain, csv.positions)?;
    let forms = fundamental_forms(&sample);
    let jets = graph_jets(&sample, &TimelikePlane::yz());
    let residual = born_infeld_residual(&jets);
    let max_residual = residual.iter().flatten().fold(0.0, |m: f64, r| m.max(r.abs()));
    let rel_residual = born_infeld_relative_residual(&jets).into_iter().flatten().fold(0.0, f64::max);
    let graph_nodes = residual.iter().flatten().count();
    let max_h = forms.max_abs_h(DISC_MIN);
    let rel_h = forms.minimality_defect(DISC_MIN);
    let tol = config.tol.unwrap_or(1e-6 + 10.0 * h * h);

    let checks = [("mean_curvature", rel_h <= tol), ("born_infeld_residual", rel_residual <= tol)];
    let passed = checks.iter().all(|c| c.1);
    let mut report = header(config, true);
    report.insert("node_count".into(), json!(sample.node_count()));
    report.insert("grid".into(), json!([sample.nu(), sample.nv()]));
    report.insert("grid_step".into(), json!(h));
    report.insert("tol".into(), json!(tol));
    report.insert("max_abs_H".into(), json!(max_h));
    report.insert("max_relative_H".into(), json!(rel_h));
    report.insert("curvature".into(), forms_summary(&forms));
    report.insert("born_infeld_residual".into(), json!(max_residual));
    report.insert("born_infeld_relative_residual".into(), json!(rel_residual));
    report.insert("yz_graph_nodes".into(), json!(graph_nodes));
    report.insert(
        "checks".into(),
        Value::Object(checks.iter().map(|(n, ok)| (n.to_string(), json!(ok))).collect()),
    );
    let path = finish_report(&config.out, report, passed)?;
    if !passed {
        return Err(CliError::check(format!(
            "checks failed: relative |H| = {rel_h:e}, relative Born-Infeld residual = {rel_residual:e} (tol {tol:e})"
        )));
    }
    Ok(vec![path])
}
