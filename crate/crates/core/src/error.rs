use thiserror::Error;

use crate::strips::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector is lightlike (<v,v> = {0:e})")]
    LightlikeVector(f64),

    #[error("basis is not Lorentz-orthonormal: {0}")]
    InvalidBasis(String),

    #[error("invalid strip: {}", .0.failures().join("; "))]
    InvalidStrip(Box<ValidationReport>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("curve is not unit-speed timelike: <c',c'> = {value} at t = {t}")]
    NotConstantSpeed { t: f64, value: f64 },

    #[error("second derivative is not spacelike at t = {t} (<c'',c''> = {value:e})")]
    InflectionPoint { t: f64, value: f64 },

    #[error("surface normal is lightlike at every node")]
    DegenerateEverywhere,

    #[error("no grid node lies in the diamond |u|+|v| <= {0}")]
    EmptyRestriction(f64),

    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("degenerate point at (r, s) = ({r}, {s})")]
    DegeneratePoint { r: f64, s: f64 },

    #[error("degenerate generator: {0} is constant")]
    DegenerateGenerator(&'static str),

    #[error("projection is not injective: nodes {a} and {b} collide")]
    NotInjective { a: usize, b: usize },

    #[error("height fit has {found} nodes near target {target}, need {needed}")]
    InsufficientCoverage {
        target: usize,
        found: usize,
        needed: usize,
    },
}

impl Error {
    /// True for failures caused by the mathematics of the input (as opposed
    /// to malformed input).
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::DegenerateEverywhere
                | Error::DegeneratePoint { .. }
                | Error::DegenerateGenerator(_)
                | Error::EmptyRestriction(_)
                | Error::LightlikeVector(_)
                | Error::NotInjective { .. }
                | Error::InsufficientCoverage { .. }
                | Error::NotConstantSpeed { .. }
                | Error::InflectionPoint { .. }
        )
    }
}
