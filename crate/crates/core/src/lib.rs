//! Hierarchical analysis-suitable T-splines.
//!
//! T-mesh topology in the index domain, T-spline blending functions, the
//! level hierarchy with its truncation-free basis selection, Bezier
//! extraction and an adaptive SUPG solver for advection-diffusion.

pub mod basis;
pub mod cli;
pub mod error;
pub mod extraction;
pub mod hierarchy;
pub mod iga;
pub mod samples;
pub mod scalar;
pub mod tmesh;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact scalar used for oracle computations.
pub type Exact = num_rational::Rational64;
pub type Real = f64;

/// Format a float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}
