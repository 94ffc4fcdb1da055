//! Building, validating and round-tripping Björling strips.

use bjbi::split_scalar::TaylorSeries;
use bjbi::strips::{geodesic_strip, parse_strip, strip_to_toml, validate_strip};
use bjbi::{CurveL3, Strip, Variant};

const PARABOLA: &str = r#"
variant = "timelike_surface"
interval = [-1.0, 1.0]

[curve]
x = [0.0, 0.0, 0.125]
y = [0.0]
z = [0.0, 1.0]

[normal]
x = [1.0]
y = [0.0, 0.25]
z = [0.0, 0.25]
"#;

fn main() -> bjbi::Result<()> {
    let strip = parse_strip(PARABOLA)?;
    let report = validate_strip(&strip);
    println!("parabola strip valid: {}, curve is {:?}", report.is_valid(), report.curve_character);
    for c in &report.checks {
        println!("  {:<28} passed={} worst={:e}", c.name, c.passed, c.worst);
    }

    // The same text comes back out
    let again = parse_strip(&strip_to_toml(&strip))?;
    println!("round trip equal: {}", again == strip);

    // A normal that is not orthogonal to the curve is rejected with a reason
    let bad = Strip::new(
        CurveL3::from_coeffs(&[0.0], &[0.0], &[0.0, 1.0]),
        CurveL3::from_coeffs(&[1.0], &[0.0], &[0.5]),
        [-1.0, 1.0],
        Variant::TimelikeSurface,
    );
    match bad {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }

    // Geodesic strip along the unit-speed timelike hyperbola (cosh t, 0, sinh t)
    let order = 20;
    let curve = CurveL3::taylor(
        TaylorSeries::cosh(0.0, order),
        TaylorSeries::new(vec![0.0], 0.0, order),
        TaylorSeries::sinh(0.0, order),
    );
    let g = geodesic_strip(&curve, [-0.5, 0.5])?;
    println!("geodesic strip: approx = {}, n(0) = {:?}", g.is_approx(), g.normal().eval(0.0));
    Ok(())
}
