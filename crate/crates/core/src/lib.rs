//! Solver core for the semilinear singularly perturbed problem
//!
//! ```text
//! ε² y″ = f(x, y),   x ∈ (0, 1),   y(0) = y(1) = 0,   f_y ≥ m > 0.
//! ```
//!
//! The pipeline is
//!
//! 1. [`mesh::generate_mesh`] builds a layer-adapted Shishkin-type mesh from a
//!    C¹ generating function,
//! 2. [`scheme::newton_solve`] solves the fitted (exponentially exact)
//!    three-point scheme by Newton's method on its tridiagonal Jacobian,
//! 3. [`global::build_global`] lifts the nodal values to a global function,
//!    either the exponential spline `Y` built from interval Green's functions or
//!    the repaired hybrid `Ỹ` (exponential pieces in the layers, piecewise
//!    linear in between),
//! 4. [`analysis`] measures nodal, per-region and global errors and assembles
//!    convergence tables.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line live in the companion `spbvp` crate.

#![no_std]
// `!(x < y)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod global;
mod hyperbolic;
pub mod mesh;
pub mod problem;
pub mod scheme;

pub use analysis::{
    classical_order, convergence_order, convergence_study, nodal_error, region_errors,
    sample_points, stability_experiment, ConvergenceRow, RegionErrors, StabilityReport,
    StudyConfig,
};
pub use error::{Error, Result};
pub use global::{
    basis_eval, build_global, eval_global, green_integral, GlobalSolution, GreenKernel, Mode,
    PieceKind, SourceForm,
};
pub use mesh::{
    generate_mesh, generating_function, mesh_diagnostics, transition_point, Mesh, MeshDiagnostics,
    MeshParams,
};
pub use problem::{
    builtin_problem, exact_eval, validate_problem, Problem, SampleGrid, ValidationReport,
};
pub use scheme::{
    interval_coefficients, jacobian, max_norm, newton_solve, residual, solve_tridiagonal,
    DiscreteSolution, InitialGuess, IntervalCoefficients, NewtonOptions, TridiagonalSystem,
};
