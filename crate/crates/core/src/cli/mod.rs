//! The `bjbi` command line: argument parsing, run configuration, and the
//! `solve`, `classify`, `bc` and `verify` commands.

mod commands;
pub mod export;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graphicality::Criterion;
use crate::surface::DomainShape;

pub use commands::{cmd_bc, cmd_classify, cmd_solve, cmd_verify};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERACY: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

/// A failed command: message and process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CHECK,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_degeneracy() { EXIT_DEGENERACY } else { EXIT_INPUT };
        let name = match &e {
            Error::DegenerateGenerator(_) => "DegenerateGenerator: ",
            Error::DegenerateEverywhere => "DegenerateEverywhere: ",
            Error::DegeneratePoint { .. } => "DegeneratePoint: ",
            Error::NotInjective { .. } => "NotInjective: ",
            _ => "",
        };
        Self {
            code,
            message: format!("{name}{e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Classify,
    Bc,
    Verify,
}

/// Everything a command needs, echoed into its report. The canonical text
/// form is TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub out: PathBuf,
    pub criterion: Criterion,
    /// Grid counts `[nu, nv]`; `None` uses the command default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<[usize; 2]>,
    /// Overrides the tolerance of the command's pass/fail check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainShape>,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        Self {
            command,
            input: input.into(),
            out: PathBuf::from("."),
            criterion: Criterion::Pqd,
            grid: None,
            tol: None,
            domain: None,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::input(format!("bad run config: {e}")))
    }
}

#[derive(Parser, Debug)]
#[command(name = "bjbi", version, about = "Björling solver and verifier for Born-Infeld soliton surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Solve the Björling problem for a strip file.
    Solve(CommonArgs),
    /// Decide whether the Björling solution is a graph over the y-z plane.
    Classify(CommonArgs),
    /// Generate a Barbishov-Chernikov surface from an (F, G) file.
    Bc(CommonArgs),
    /// Re-check a surface CSV written by another command.
    Verify(CommonArgs),
}

#[derive(clap::Args, Debug)]
struct CommonArgs {
    /// Input file (strip TOML, BC TOML, or surface CSV).
    file: PathBuf,
    /// `rect U0 U1 V0 V1` or `diamond M`.
    #[arg(long, num_args = 2..=5, allow_negative_numbers = true, value_name = "SHAPE ARGS")]
    domain: Option<Vec<String>>,
    /// Grid size, e.g. `41x41`.
    #[arg(long, value_name = "NUxNV")]
    grid: Option<String>,
    #[arg(long, value_enum, default_value = "pqd")]
    criterion: CriterionArg,
    /// Tolerance of the command's pass/fail check.
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CriterionArg {
    Pqd,
    Pmatrix,
}

fn parse_domain(words: &[String]) -> Result<DomainShape, CliError> {
    let nums = |ws: &[String]| -> Result<Vec<f64>, CliError> {
        ws.iter()
            .map(|w| {
                w.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::input(format!("bad domain number {w:?}")))
            })
            .collect()
    };
    match words.split_first() {
        Some((shape, rest)) if shape == "rect" && rest.len() == 4 => {
            let v = nums(rest)?;
            Ok(DomainShape::Rect {
                u0: v[0],
                u1: v[1],
                v0: v[2],
                v1: v[3],
            })
        }
        Some((shape, rest)) if shape == "diamond" && rest.len() == 1 => Ok(DomainShape::Diamond { m: nums(rest)?[0] }),
        _ => Err(CliError::input("domain must be `rect U0 U1 V0 V1` or `diamond M`")),
    }
}

fn parse_grid(text: &str) -> Result<[usize; 2], CliError> {
    let bad = || CliError::input(format!("grid must look like 41x41, got {text:?}"));
    let (a, b) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let a: usize = a.parse().map_err(|_| bad())?;
    let b: usize = b.parse().map_err(|_| bad())?;
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok([a, b])
}

fn config_from(command: Command, args: CommonArgs) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        command,
        input: args.file,
        out: args.out,
        criterion: match args.criterion {
            CriterionArg::Pqd => Criterion::Pqd,
            CriterionArg::Pmatrix => Criterion::PMatrix,
        },
        grid: args.grid.as_deref().map(parse_grid).transpose()?,
        tol: args.tol,
        domain: args.domain.as_deref().map(parse_domain).transpose()?,
    })
}

/// Parses arguments into a run configuration.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let (command, a) = match cli.command {
        Sub::Solve(a) => (Command::Solve, a),
        Sub::Classify(a) => (Command::Classify, a),
        Sub::Bc(a) => (Command::Bc, a),
        Sub::Verify(a) => (Command::Verify, a),
    };
    config_from(command, a).map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, e.message + "\n"))
}

/// Runs a configured command, returning the paths written.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    match config.command {
        Command::Solve => cmd_solve(config),
        Command::Classify => cmd_classify(config),
        Command::Bc => cmd_bc(config),
        Command::Verify => cmd_verify(config),
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&config) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("bjbi: {}", e.message);
            e.code
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
