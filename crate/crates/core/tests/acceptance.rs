//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary so every line prints even when an earlier criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use bjbi::bc_rep::{bc_lightlike_decomposition, bc_normal, bc_surface, BCData};
use bjbi::bjorling::{interpolation_defects, solve};
use bjbi::geometry_verify::{
    born_infeld_residual, fd_partials, find_graph_plane, fundamental_forms, gauss_curvature_graph, gauss_from_forms,
    graph_jets, height_over_plane, height_over_plane_with, HeightField, HeightJet, HeightOptions, ResampleMethod,
    Signature,
};
use bjbi::graphicality::{classify, is_p_matrix, is_positive_quasidefinite, jacobian_field, Criterion, Mat2, Verdict};
use bjbi::lorentz::TimelikePlane;
use bjbi::strips::load_strip;
use bjbi::surface::{Domain, SurfaceSample};
use bjbi::{RealPoly, Strip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> Strip {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    load_strip(path).expect("fixture loads")
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const DISC_MIN: f64 = 1e-6;

const STRIP_FIXTURES: [&str; 4] = [
    "line_x_normal.toml",
    "line_y_normal.toml",
    "spacelike_boost.toml",
    "parabola.toml",
];

fn strip_domain(s: &Strip, nu: usize, nv: usize) -> Domain {
    let [t0, t1] = s.interval();
    Domain::rect(t0, t1, -0.5, 0.5, nu, nv)
}

/// Random generating pair `F = t + sum a_k t^k` with `|a_k| <= 0.2`, so
/// `F'` stays away from zero on `[-0.5, 0.5]`.
fn random_pair(seed: u64, domain: [f64; 4], grid: (usize, usize)) -> BCData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = |rng: &mut ChaCha8Rng| {
        let mut c = vec![rng.random_range(-0.2..0.2), 1.0];
        c.extend((2..=4).map(|_| rng.random_range(-0.2..0.2)));
        RealPoly::new(c)
    };
    let f = poly(&mut rng);
    let g = poly(&mut rng);
    BCData::new(f, g, domain, grid)
}

fn c1_interpolation() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for name in STRIP_FIXTURES {
        let s = fixture(name);
        let sample = solve(&s, &strip_domain(&s, 101, 21)).map_err(|e| e.to_string())?;
        let (x, n) = interpolation_defects(&s, &sample, 101).ok_or("no source")?;
        worst = (worst.0.max(x), worst.1.max(n));
    }
    check(
        worst.0 <= 1e-12 && worst.1 <= 1e-9,
        format!("max |X - c| = {:.2e}, max |N - n| = {:.2e}", worst.0, worst.1),
    )
}

fn c2_minimality() -> Outcome {
    let mut worst_rel = 0.0f64;
    let mut worst_abs = 0.0f64;
    let mut samples = Vec::new();
    for name in STRIP_FIXTURES {
        let s = fixture(name);
        samples.push(solve(&s, &strip_domain(&s, 41, 41)).map_err(|e| e.to_string())?);
    }
    for seed in 0..5 {
        let d = random_pair(seed, [-0.5, 0.5, -0.5, 0.5], (41, 41));
        samples.push(bc_surface(&d).map_err(|e| e.to_string())?);
    }
    for s in &samples {
        let forms = fundamental_forms(s);
        worst_rel = worst_rel.max(forms.minimality_defect(DISC_MIN));
        worst_abs = worst_abs.max(forms.max_abs_h(DISC_MIN) / s.scale());
    }
    check(
        worst_rel <= 1e-8 && worst_abs <= 1e-8,
        format!("max |H|/scale = {worst_abs:.2e}, max node-relative |H| = {worst_rel:.2e} over {} surfaces", samples.len()),
    )
}

fn c3_exact_planes() -> Outcome {
    let s = fixture("line_x_normal.toml");
    let sample = solve(&s, &strip_domain(&s, 41, 41)).map_err(|e| e.to_string())?;
    let plane_err = sample
        .iter()
        .map(|(_, n)| (n.jet.x - bjbi::Vec3L::new(0.0, -n.v, n.u)).max_abs())
        .fold(0.0, f64::max);

    let s = fixture("spacelike_boost.toml");
    let sample = solve(&s, &strip_domain(&s, 41, 41)).map_err(|e| e.to_string())?;
    let (ch, sh) = (1f64.cosh(), 1f64.sinh());
    let boost_err = sample
        .iter()
        .map(|(_, n)| (n.jet.x - bjbi::Vec3L::new(n.v * ch, n.u, n.v * sh)).max_abs())
        .fold(0.0, f64::max);
    let field = height_over_plane(&sample, &TimelikePlane::yz()).map_err(|e| e.to_string())?;
    let coth = ch / sh;
    let mut height_err = 0.0f64;
    for (&(_, z), j) in field.points.iter().zip(&field.jets) {
        if let Some(j) = j {
            height_err = height_err.max((j.psi - z * coth).abs()).max((j.pb - coth).abs());
        }
    }
    let residual = born_infeld_residual(&field).into_iter().flatten().fold(0.0, |m: f64, r| m.max(r.abs()));
    check(
        plane_err <= 4.0 * f64::EPSILON && boost_err <= 1e-14 && height_err <= 1e-12 && residual <= 1e-10,
        format!(
            "|X - (0,-v,u)| = {plane_err:.1e}, |X - (v cosh1, u, v sinh1)| = {boost_err:.1e}, \
             |psi - z coth1| = {height_err:.1e}, residual = {residual:.1e}"
        ),
    )
}

fn c4_verdicts() -> Outcome {
    let expected = [
        ("line_y_normal.toml", Verdict::NoGraphSolution),
        ("line_x_normal.toml", Verdict::Indeterminate),
        ("spacelike_boost.toml", Verdict::GraphSolutionExists),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, want) in expected {
        let s = fixture(name);
        let coarse = strip_domain(&s, 21, 21);
        for d in [coarse, coarse.refined()] {
            let sample = solve(&s, &d).map_err(|e| e.to_string())?;
            let got = classify(&sample, &jacobian_field(&sample), Criterion::Pqd).verdict;
            ok &= got == want;
            lines.push(format!("{name}@{}: {got:?}", d.nu));
        }
    }
    check(ok, lines.join(", "))
}

fn c5_matrices() -> Outcome {
    let tol = 1e-12;
    let pqd = [
        (Mat2::IDENTITY, true),
        (Mat2::new(0.0, 1.0, -1.0, 0.0), false),
        (Mat2::new(1.0, 3.0, 0.0, 1.0), false),
    ];
    let pm = [
        (Mat2::IDENTITY, true),
        (Mat2::new(1.0, 3.0, 0.0, 1.0), true),
        (Mat2::new(-1.0, 0.0, 0.0, 1.0), false),
    ];
    let table_ok = pqd.iter().all(|(m, want)| is_positive_quasidefinite(m, tol) == *want)
        && pm.iter().all(|(m, want)| is_p_matrix(m, tol) == *want);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut pqd_count, mut violations) = (0, 0);
    for _ in 0..10_000 {
        let m = Mat2::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        );
        if is_positive_quasidefinite(&m, 0.0) {
            pqd_count += 1;
            if !(m.det() > 0.0 && is_p_matrix(&m, 0.0)) {
                violations += 1;
            }
        }
    }
    check(
        table_ok && violations == 0 && pqd_count > 0,
        format!("truth table {}, {pqd_count} PQD of 10^4 random, {violations} not P-matrix", if table_ok { "ok" } else { "wrong" }),
    )
}

fn c6_bc_structure() -> Outcome {
    let domain = [-0.5, 0.5, -0.5, 0.5];
    let pairs: Vec<BCData> = (10..15).map(|seed| random_pair(seed, domain, (21, 21))).collect();
    let (mut defect, mut recon) = (0.0f64, 0.0f64);
    for d in &pairs {
        let pair = bc_lightlike_decomposition(d).map_err(|e| e.to_string())?;
        let (a, b) = pair.lightlike_defects();
        defect = defect.max(a).max(b);
        let sample = bc_surface(d).map_err(|e| e.to_string())?;
        for (_, n) in sample.iter() {
            recon = recon.max((n.jet.x - pair.reconstruct(n.u, n.v)).euclid_norm());
        }
    }
    let mut normal_dev = 0.0f64;
    let mut compared = 0;
    for i in 0..5 {
        for j in 0..5 {
            let (r, s) = (-0.4 + 0.2 * i as f64, -0.4 + 0.2 * j as f64);
            let first = bc_normal(&pairs[0], r, s).map_err(|e| e.to_string())?;
            for d in &pairs[1..] {
                let n = bc_normal(d, r, s).map_err(|e| e.to_string())?;
                normal_dev = normal_dev.max((n - first).max_abs().min((n + first).max_abs()));
            }
            compared += 1;
        }
    }
    check(
        defect <= 1e-12 && recon <= 1e-12 && normal_dev <= 1e-12,
        format!("lightlike defect {defect:.1e}, reconstruction {recon:.1e}, normal spread {normal_dev:.1e} at {compared} points"),
    )
}

fn c7_curvature_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut compared = 0;
    for seed in 20..25 {
        let d = random_pair(seed, [-0.4, 0.4, -0.4, 0.4], (21, 21));
        let sample = bc_surface(&d).map_err(|e| e.to_string())?;
        let forms = fundamental_forms(&sample);
        let jets = graph_jets(&sample, &TimelikePlane::yz());
        let k_graph = gauss_curvature_graph(&jets, 1e-9);
        for ((k, _), kg) in sample.iter().zip(k_graph) {
            let (Some(kg), Some(kf)) = (kg, forms.nodes[k].as_ref().and_then(gauss_from_forms)) else {
                continue;
            };
            if forms.nodes[k].unwrap().disc.abs() < DISC_MIN || kf.abs() < 1e-6 {
                continue;
            }
            worst = worst.max((kg - kf).abs() / kf.abs());
            compared += 1;
        }
    }
    let at_origin = |jet: HeightJet| {
        let f = HeightField::scattered(Signature::SpaceTime, vec![(0.0, 0.0)], vec![Some(jet)]);
        gauss_curvature_graph(&f, 1e-12)[0].unwrap_or(f64::NAN)
    };
    let k1 = at_origin(HeightJet { paa: 1.0, pbb: -1.0, ..Default::default() });
    let k2 = at_origin(HeightJet { pab: 1.0, ..Default::default() });
    let hand_ok = (k1 + 1.0).abs() <= 1e-10 && (k2 + 1.0).abs() <= 1e-10;
    check(
        worst <= 1e-6 && compared > 0 && hand_ok,
        format!("max relative |K_graph - K_forms| = {worst:.1e} over {compared} nodes, K = {k1}, {k2} at origin"),
    )
}

fn c8_residual_calibration() -> Outcome {
    // f(t) = sum c_k t^k, degree 6
    let c = [0.1, 0.3, 0.2, -0.1, 0.05, 0.02, -0.01];
    let f = move |t: f64, d: usize| -> f64 {
        (d..c.len())
            .map(|k| {
                let fall: f64 = (0..d).map(|m| (k - m) as f64).product();
                c[k] * fall * t.powi((k - d) as i32)
            })
            .sum()
    };
    let range = [-0.3, 0.3];
    let mut exact = 0.0f64;
    let mut fd = 0.0f64;
    for sign in [1.0, -1.0] {
        let field = HeightField::from_fn(Signature::SpaceTime, range, range, 61, 61, move |a, b| {
            let t = a + sign * b;
            HeightJet {
                psi: f(t, 0),
                pa: f(t, 1),
                pb: sign * f(t, 1),
                paa: f(t, 2),
                pab: sign * f(t, 2),
                pbb: f(t, 2),
            }
        });
        exact = exact.max(born_infeld_residual(&field).into_iter().flatten().fold(0.0, |m: f64, r| m.max(r.abs())));
        let n = 601; // h = 1e-3
        let field = HeightField::from_values(Signature::SpaceTime, range, range, n, n, move |a, b| f(a + sign * b, 0));
        fd = fd.max(born_infeld_residual(&field).into_iter().flatten().fold(0.0, |m: f64, r| m.max(r.abs())));
    }
    let square = HeightField::from_values(Signature::SpaceTime, range, range, 601, 601, |a, _| a * a);
    let sq_err = born_infeld_residual(&square)
        .into_iter()
        .flatten()
        .fold(0.0, |m: f64, r| m.max((r - 2.0).abs()));
    check(
        exact <= 1e-10 && fd <= 1e-6 && sq_err <= 1e-6,
        format!("plane waves: exact {exact:.1e}, finite differences (h=1e-3) {fd:.1e}; psi=a^2: |R-2| = {sq_err:.1e}"),
    )
}

fn fd_partials_error(sample: &SurfaceSample) -> f64 {
    fd_partials(sample)
        .iter()
        .zip(sample.nodes())
        .filter_map(|(f, e)| Some((f.as_ref()?, e.as_ref()?)))
        .map(|(f, e)| (f.xu - e.jet.xu).max_abs().max((f.xv - e.jet.xv).max_abs()))
        .fold(0.0, f64::max)
}

/// Largest gap between each node's height and the fitted field evaluated
/// at the node's projection.
fn resampling_error(sample: &SurfaceSample, plane: &TimelikePlane) -> Result<f64, String> {
    let fitted = height_over_plane_with(
        sample,
        plane,
        HeightOptions { method: ResampleMethod::LeastSquares, ..Default::default() },
    )
    .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (_, n) in sample.iter() {
        let (p, q, h) = plane.coordinates(n.jet.x);
        if let Some(psi) = fitted.eval(p, q) {
            worst = worst.max((psi - h).abs());
        }
    }
    Ok(worst)
}

fn c9_convergence() -> Outcome {
    let s = fixture("parabola.toml");
    let coarse = Domain::rect(-0.5, 0.5, -0.5, 0.5, 21, 21);
    let a = solve(&s, &coarse).map_err(|e| e.to_string())?;
    let b = solve(&s, &coarse.refined()).map_err(|e| e.to_string())?;
    let fd_ratio = fd_partials_error(&a) / fd_partials_error(&b);

    // a B-C surface, whose height over the y-z plane is not polynomial
    let d = random_pair(30, [-0.4, 0.4, -0.4, 0.4], (21, 21));
    let mut fine = d.clone();
    fine.grid = (41, 41);
    let a = bc_surface(&d).map_err(|e| e.to_string())?.without_source();
    let b = bc_surface(&fine).map_err(|e| e.to_string())?.without_source();
    let plane = find_graph_plane(&a, 16).ok_or("no graph plane")?;
    let ea = resampling_error(&a, &plane)?;
    let eb = resampling_error(&b, &plane)?;
    let fit_ratio = ea / eb;
    check(
        fd_ratio >= 3.5 && fit_ratio >= 3.5,
        format!("finite-difference error ratio {fd_ratio:.2}, height-resampling error ratio {fit_ratio:.2} ({ea:.1e} -> {eb:.1e})"),
    )
}

fn c10_diamond() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["parabola.toml", "parabola_y.toml"] {
        let s = fixture(name);
        let sample = solve(&s, &Domain::diamond(2.0, 41, 41)).map_err(|e| e.to_string())?;
        let plane = find_graph_plane(&sample, 64).ok_or(format!("{name}: find_graph_plane found no plane"))?;
        let field = height_over_plane(&sample, &plane).map_err(|e| e.to_string())?;
        let residual = born_infeld_residual(&field);
        let defined = residual.iter().flatten().count();
        let worst = residual.into_iter().flatten().fold(0.0, |m: f64, r| m.max(r.abs()));
        ok &= worst <= 1e-5 && defined > 0;
        let b1 = plane.b1();
        lines.push(format!(
            "{name}: normal ({:.3}, {:.3}, {:.3}), {defined} height nodes, max residual {worst:.1e}",
            b1.x, b1.y, b1.z
        ));
    }
    check(ok, lines.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Björling interpolation", c1_interpolation),
        ("minimality", c2_minimality),
        ("exact plane solutions", c3_exact_planes),
        ("graphicality verdicts", c4_verdicts),
        ("PQD / P-matrix truth table", c5_matrices),
        ("B-C structure", c6_bc_structure),
        ("curvature oracle", c7_curvature_oracle),
        ("Born-Infeld residual calibration", c8_residual_calibration),
        ("convergence order", c9_convergence),
        ("diamond pipeline", c10_diamond),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
