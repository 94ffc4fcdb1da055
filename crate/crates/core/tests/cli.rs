//! End-to-end runs of the `bjbi` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect()
}

fn bjbi(args: &[&str], input: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bjbi"))
        .args(&args[..1])
        .arg(input)
        .args(&args[1..])
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).expect("report written")).expect("valid json")
}

#[test]
fn solve_writes_mesh_csv_and_passing_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bjbi(&["solve"], &fixture("parabola.toml"), tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["mesh.obj", "surface.csv", "report.json"] {
        assert!(tmp.path().join(f).exists(), "{f} missing");
    }
    let r = report(tmp.path());
    assert_eq!(r["passed"], true);
    assert_eq!(r["node_count"], 41 * 41);
    assert!(r["boundary_interpolation_error"].as_f64().unwrap() <= 1e-12);
    let csv = std::fs::read_to_string(tmp.path().join("surface.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("u,v,x,y,z,Nx,Ny,Nz,H,EGF2,causal"));
    assert_eq!(csv.lines().count(), 41 * 41 + 1);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        assert_eq!(bjbi(&["bc", "--grid", "21x21"], &fixture("cubic_pair.toml"), dir).status.code(), Some(0));
    }
    for f in ["mesh.obj", "surface.csv", "lightlike.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f} differs");
    }
    // the report echoes its output directory; a rerun into the same place
    // must reproduce it exactly
    let first = std::fs::read(a.join("report.json")).unwrap();
    bjbi(&["bc", "--grid", "21x21"], &fixture("cubic_pair.toml"), &a);
    assert_eq!(first, std::fs::read(a.join("report.json")).unwrap());
}

#[test]
fn classify_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, want) in [
        ("line_y_normal.toml", "NoGraphSolution"),
        ("line_x_normal.toml", "Indeterminate"),
        ("spacelike_boost.toml", "GraphSolutionExists"),
    ] {
        let dir = tmp.path().join(name);
        let out = bjbi(&["classify", "--grid", "21x21"], &fixture(name), &dir);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let r = report(&dir);
        assert_eq!(r["verdict"], want, "{name}");
        assert_eq!(r["criterion"], "pqd");
    }
    let dir = tmp.path().join("pm");
    bjbi(&["classify", "--criterion", "pmatrix"], &fixture("spacelike_boost.toml"), &dir);
    assert_eq!(report(&dir)["criterion"], "pmatrix");
}

#[test]
fn diamond_domain_keeps_only_inner_nodes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bjbi(&["solve", "--domain", "diamond", "2", "--grid", "21x21"], &fixture("parabola.toml"), tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(tmp.path().join("surface.csv")).unwrap();
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let mut f = line.split(',').map(|x| x.parse::<f64>().unwrap_or(f64::NAN));
        let (u, v) = (f.next().unwrap(), f.next().unwrap());
        assert!(u.abs() + v.abs() <= 2.0 + 1e-12, "node ({u}, {v}) outside the diamond");
        rows += 1;
    }
    assert_eq!(rows, report(tmp.path())["node_count"]);
}

#[test]
fn bc_then_verify_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let bc = tmp.path().join("bc");
    assert_eq!(bjbi(&["bc"], &fixture("cubic_pair.toml"), &bc).status.code(), Some(0));
    let r = report(&bc);
    assert_eq!(r["passed"], true);
    assert!(r["max_lightlike_defect"].as_f64().unwrap() <= 1e-12);
    assert!(r["normal_independence_max_dev"].as_f64().unwrap() <= 1e-12);

    let ver = tmp.path().join("verify");
    let out = bjbi(&["verify"], &bc.join("surface.csv"), &ver);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&ver)["passed"], true);
}

#[test]
fn verify_rejects_a_non_solution() {
    // psi = a^2 over the y-z plane: X = (y^2, y, z), residual exactly 2
    let tmp = tempfile::tempdir().unwrap();
    let mut csv = String::from("u,v,x,y,z,Nx,Ny,Nz,H,EGF2,causal\n");
    for j in 0..21 {
        for i in 0..21 {
            let (u, v) = (-0.5 + i as f64 * 0.05, -0.5 + j as f64 * 0.05);
            csv += &format!("{u},{v},{},{u},{v},0,0,0,0,0,timelike\n", u * u);
        }
    }
    let input = tmp.path().join("bad.csv");
    std::fs::write(&input, csv).unwrap();
    let out = bjbi(&["verify"], &input, tmp.path());
    assert_eq!(out.status.code(), Some(4));
    let r = report(tmp.path());
    assert_eq!(r["passed"], false);
    assert!((r["born_infeld_residual"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn error_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = bjbi(&["solve"], &tmp.path().join("nope.toml"), tmp.path());
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("strip file not found"));

    let degenerate = bjbi(&["bc"], &fixture("constant_f.toml"), tmp.path());
    assert_eq!(degenerate.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&degenerate.stderr).contains("DegenerateGenerator"));

    let bad_csv = tmp.path().join("short.csv");
    std::fs::write(&bad_csv, "u,v,x,y\n0,0,0,0\n").unwrap();
    assert_eq!(bjbi(&["verify"], &bad_csv, tmp.path()).status.code(), Some(2));

    assert_eq!(bjbi(&["solve", "--grid", "7"], &fixture("parabola.toml"), tmp.path()).status.code(), Some(2));
}
