//! Problem-level API: targets, right-hand sides, solves of the regularized
//! tracking system, boundary errors and convergence studies.

mod assemble;
mod config;
mod driver;
mod study;
mod target;

pub use assemble::{
    assemble_boundary_rhs, boundary_l2_error, boundary_l2_error_fn, boundary_l2_norm,
    h1_norm_quadrature, volume_l2_error,
};
pub use config::{OcpConfig, RhoRule, SolverPath};
pub use driver::{
    discrete_h1_norm, full_system_rel_residual, partition_for, recover_control, solve_ocp,
    ControlFunctional, StateSolution,
};
pub use study::{
    fit_presaturation_slope, regularization_sweep, run_convergence_study, ConvergenceTable,
    LevelRow, RhoRecord,
};
pub use target::{Smoothness, Target};
