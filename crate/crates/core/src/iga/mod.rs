//! Isogeometric SUPG analysis of steady advection-diffusion on
//! hierarchical spaces, with residual-driven adaptivity.

mod adaptive;
mod assemble;
mod estimate;
mod kinematics;
pub mod output;
mod problem;
mod quadrature;
pub mod sparse;

pub use adaptive::{adaptive_loop, AdaptiveOptions, AdaptiveRun, IterationRecord, Locator, Snapshot};
pub use assemble::{
    assemble, boundary_functions, dirichlet_values, element_scale, solve_constrained, solve_problem, tau,
    AssemblyOptions, ElementScale, SOLVE_TOL,
};
pub use estimate::{estimate, mark, total, Marking};
pub use kinematics::{evaluate, PointEval};
pub use problem::{Field, Problem, VectorField, SKEW_SPLIT};
pub use quadrature::{gauss_legendre, tensor_rule};

#[cfg(test)]
mod tests;
