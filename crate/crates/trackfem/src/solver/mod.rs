//! Krylov solvers, preconditioners and the boundary Schur complement.

mod cg;
mod dense_lu;
mod fastdiag;
mod gmg;
mod precond;
mod schur;

pub use cg::cg;
pub use dense_lu::dense_lu_solve;
pub use fastdiag::{fast_diag_build, FastDiagSolver};
pub use gmg::{GmgPreconditioner, SmootherConfig};
pub use precond::{lumped_boundary_preconditioner, DiagonalPrecond, Precond};
pub use schur::{build_schur, SchurOperator};

use crate::error::Result;
use crate::linop::{check_len, LinOp};
use crate::tensor::{BoundaryMassOperator, KronSumOperator};
use std::time::Duration;

/// How the interior solve inside the Schur complement apply is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InnerMode {
    /// Exact solve via per-dimension generalized eigendecompositions.
    #[default]
    FastDiagonalization,
    /// Unpreconditioned CG to `inner_rel_tol`.
    InnerPcg,
}

/// Preconditioner selection for the full-system path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecondKind {
    None,
    LumpedBoundaryMass,
    Jacobi,
    #[default]
    GmgVcycle,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Outer stopping criterion: unpreconditioned Euclidean relative
    /// residual.
    pub rel_tol: f64,
    pub max_iters: usize,
    /// Tolerance of the interior solve inside each Schur apply (only used
    /// in [`InnerMode::InnerPcg`]).
    pub inner_rel_tol: f64,
    pub inner_mode: InnerMode,
    /// Preconditioner of the full-system path. The Schur paths fix their
    /// own: plain CG uses none, PCG uses the lumped boundary mass.
    pub preconditioner: PrecondKind,
    pub smoother: SmootherConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            max_iters: 1000,
            inner_rel_tol: 1e-10,
            inner_mode: InnerMode::default(),
            preconditioner: PrecondKind::default(),
            smoother: SmootherConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(crate::error::Error::InvalidConfig(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(crate::error::Error::InvalidConfig(
                "max_iters must be at least 1".into(),
            ));
        }
        if !(self.inner_rel_tol > 0.0 && self.inner_rel_tol < 1.0) {
            return Err(crate::error::Error::InvalidConfig(format!(
                "inner_rel_tol must lie in (0, 1), got {}",
                self.inner_rel_tol
            )));
        }
        Ok(())
    }
}

/// Outcome of one Krylov solve.
#[derive(Debug, Clone, Default)]
pub struct SolveReport {
    pub iterations: usize,
    pub final_rel_residual: f64,
    pub converged: bool,
    /// Total inner CG iterations spent in Schur applies (0 for the exact
    /// fast-diagonalization inner mode).
    pub inner_iterations_total: usize,
    pub wall_time: Duration,
}

/// The full discrete system: boundary mass plus `rho` times the H1 operator.
pub struct SystemOperator<'a> {
    pub boundary_mass: &'a BoundaryMassOperator,
    pub h1: &'a KronSumOperator,
    pub rho: f64,
}

impl LinOp for SystemOperator<'_> {
    fn len(&self) -> usize {
        self.h1.len()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.len(), v.len())?;
        self.boundary_mass.apply_into(v, out)?;
        let av = self.h1.apply(v)?;
        for (o, a) in out.iter_mut().zip(&av) {
            *o += self.rho * a;
        }
        Ok(())
    }
}

impl SystemOperator<'_> {
    /// Diagonal of the system (Jacobi smoothing and preconditioning).
    pub fn diagonal(&self) -> Vec<f64> {
        let mut diag = self.boundary_mass.diagonal();
        for (d, a) in diag.iter_mut().zip(self.h1.diagonal()) {
            *d += self.rho * a;
        }
        diag
    }
}
