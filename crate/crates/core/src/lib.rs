//! Björling problem solver and verifier for Born-Infeld soliton surfaces
//! (zero mean curvature timelike surfaces) in Lorentz-Minkowski 3-space.
//!
//! The pipeline runs strip data ([`strips`]) through the split-complex
//! Björling formula ([`bjorling`]) into a gridded [`surface::SurfaceSample`],
//! then checks graphicality ([`graphicality`]) and geometry
//! ([`geometry_verify`]). [`bc_rep`] builds surfaces from a pair of real
//! generating functions.

pub mod bc_rep;
pub mod bjorling;
pub mod cli;
pub mod error;
pub mod geometry_verify;
pub mod graphicality;
pub mod lorentz;
pub mod split_scalar;
pub mod strips;
pub mod surface;

pub use error::{Error, Result};
pub use lorentz::{Causal, TimelikePlane, Vec3L};
pub use split_scalar::{ComplexScalar, RealPoly, SplitComplex};
pub use strips::{CurveL3, Strip, Variant};
pub use surface::{Domain, SurfaceSample};
