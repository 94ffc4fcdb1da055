//! Driving the command-line pipeline from code: solve, classify, bc, verify.

use std::path::PathBuf;

use bjbi::cli::{run, Command, RunConfig};

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect()
}

fn main() {
    let out = tempfile::tempdir().expect("temp dir");
    let steps = [
        (Command::Solve, fixture("parabola.toml"), "solve"),
        (Command::Classify, fixture("spacelike_boost.toml"), "classify"),
        (Command::Bc, fixture("cubic_pair.toml"), "bc"),
    ];
    for (command, input, sub) in steps {
        let mut config = RunConfig::new(command, input);
        config.out = out.path().join(sub);
        match run(&config) {
            Ok(paths) => println!("{sub}: wrote {}", paths.len()),
            Err(e) => println!("{sub}: exit {} {}", e.code, e.message),
        }
    }

    // verify re-reads the CSV the bc step wrote
    let mut config = RunConfig::new(Command::Verify, out.path().join("bc/surface.csv"));
    config.out = out.path().join("verify");
    println!("run config:\n{}", config.to_toml());
    match run(&config) {
        Ok(_) => {
            let report = std::fs::read_to_string(out.path().join("verify/report.json")).expect("report");
            println!("{report}");
        }
        Err(e) => println!("verify: exit {} {}", e.code, e.message),
    }
}
