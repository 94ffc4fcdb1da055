//! OBJ, CSV and number formatting for command outputs.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry_verify::{causal_classify, fundamental_forms, SurfaceCausal};
use crate::lorentz::Vec3L;
use crate::surface::{Domain, SurfaceSample};

/// C's `%.17g`: 17 significant digits, trailing zeros removed, exponent
/// form outside `1e-4 <= |x| < 1e17`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Wavefront OBJ: present nodes as vertices in row-major grid order, each
/// grid cell split into two triangles along its lower-left to upper-right
/// diagonal.
pub fn to_obj(sample: &SurfaceSample) -> String {
    let mut out = String::new();
    let mut vertex = vec![0usize; sample.nodes().len()];
    for (n, (k, node)) in sample.iter().enumerate() {
        vertex[k] = n + 1;
        let x = node.jet.x;
        let _ = writeln!(out, "v {} {} {}", fmt_g17(x.x), fmt_g17(x.y), fmt_g17(x.z));
    }
    for [a, b, c] in sample.triangles() {
        let _ = writeln!(out, "f {} {} {}", vertex[a], vertex[b], vertex[c]);
    }
    out
}

pub const CSV_HEADER: &str = "u,v,x,y,z,Nx,Ny,Nz,H,EGF2,causal";

fn causal_name(c: SurfaceCausal) -> &'static str {
    match c {
        SurfaceCausal::Timelike => "timelike",
        SurfaceCausal::Spacelike => "spacelike",
        SurfaceCausal::Degenerate => "degenerate",
    }
}

/// One row per present node, in grid order. Undefined values print `nan`.
pub fn to_csv(sample: &SurfaceSample) -> String {
    let forms = fundamental_forms(sample);
    let causal = causal_classify(sample);
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (k, node) in sample.iter() {
        let x = node.jet.x;
        let n = node.normal.unwrap_or(Vec3L::new(f64::NAN, f64::NAN, f64::NAN));
        let f = forms.nodes[k].expect("present node has forms");
        let h = f.second.map_or(f64::NAN, |s| s.h);
        let cells = [node.u, node.v, x.x, x.y, x.z, n.x, n.y, n.z, h, f.disc].map(fmt_g17);
        let _ = writeln!(out, "{},{}", cells.join(","), causal_name(causal[k].expect("present")));
    }
    out
}

/// Positions read back from a surface CSV, placed on the grid spanned by
/// the distinct `u` and `v` values.
pub struct CsvSurface {
    pub domain: Domain,
    pub positions: Vec<Option<Vec3L>>,
}

pub fn read_csv(text: &str) -> Result<CsvSurface> {
    let bad = |line: usize, msg: &str| Error::Parse(format!("surface csv line {line}: {msg}"));
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("surface csv is empty".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| Error::Parse(format!("surface csv lacks column {name}")))
    };
    let idx = [col("u")?, col("v")?, col("x")?, col("y")?, col("z")?];

    let mut rows = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != cols.len() {
            return Err(bad(n + 1, "wrong number of fields"));
        }
        let mut vals = [0.0; 5];
        for (slot, &c) in vals.iter_mut().zip(&idx) {
            *slot = cells[c].parse::<f64>().map_err(|_| bad(n + 1, "not a number"))?;
            if !slot.is_finite() {
                return Err(bad(n + 1, "non-finite coordinate"));
            }
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(Error::Parse("surface csv has no rows".into()));
    }

    let distinct = |k: usize| {
        let mut v: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let (us, vs) = (distinct(0), distinct(1));
    let (nu, nv) = (us.len(), vs.len());
    let mut positions = vec![None; nu * nv];
    for r in &rows {
        let i = us.binary_search_by(|x| x.total_cmp(&r[0])).expect("value present");
        let j = vs.binary_search_by(|x| x.total_cmp(&r[1])).expect("value present");
        if positions[j * nu + i].replace(Vec3L::new(r[2], r[3], r[4])).is_some() {
            return Err(Error::Parse(format!("duplicate node at u={} v={}", r[0], r[1])));
        }
    }
    let domain = Domain::rect(us[0], us[nu - 1], vs[0], vs[nv - 1], nu, nv);
    Ok(CsvSurface { domain, positions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{SurfaceJet, SurfaceMap};
    use std::sync::Arc;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(-2.5), "-2.5");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(123456.0), "123456");
        assert_eq!(fmt_g17(0.0001), "0.0001");
    }

    #[test]
    fn g17_round_trips() {
        for x in [std::f64::consts::PI, -1e-300, 6.02214076e23, 1.0 - f64::EPSILON] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    fn plane() -> SurfaceSample {
        let map: Arc<dyn SurfaceMap> = Arc::new(|u: f64, v: f64| SurfaceJet {
            x: Vec3L::new(0.0, -v, u),
            xu: Vec3L::E3,
            xv: -Vec3L::E2,
            ..Default::default()
        });
        SurfaceSample::from_map(Domain::rect(-1.0, 1.0, -1.0, 1.0, 3, 2), map, false).unwrap()
    }

    #[test]
    fn obj_layout() {
        let obj = to_obj(&plane());
        let lines: Vec<&str> = obj.lines().collect();
        assert_eq!(lines.len(), 6 + 4);
        assert_eq!(lines[0], "v 0 1 -1");
        assert_eq!(lines[6], "f 1 2 5");
        assert_eq!(lines[7], "f 1 5 4");
    }

    #[test]
    fn csv_round_trip() {
        let s = plane();
        let text = to_csv(&s);
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.lines().nth(1).unwrap().ends_with(",-1,timelike"));
        let back = read_csv(&text).unwrap();
        assert_eq!(back.domain, *s.domain());
        for (p, n) in back.positions.iter().zip(s.nodes()) {
            assert_eq!(*p, n.map(|n| n.jet.x));
        }
    }

    #[test]
    fn malformed_csv() {
        assert!(read_csv("").is_err());
        assert!(read_csv("u,v,x,y\n0,0,0,0\n").is_err());
        assert!(read_csv("u,v,x,y,z\n0,0,0,zero,0\n").is_err());
        assert!(read_csv("u,v,x,y,z\n0,0,0,0\n").is_err());
    }
}
