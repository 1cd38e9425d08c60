//! Error type shared across the crate.

use crate::solver::SolveReport;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid mesh: need at least 4 intervals, got {0}")]
    InvalidMesh(usize),

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported quadrature order {0} (supported: 1..=10)")]
    UnsupportedQuadratureOrder(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operator is not symmetric positive definite (p'Ap = {0:e})")]
    NotSpd(f64),

    #[error("iteration diverged (NaN or Inf encountered)")]
    Diverged,

    #[error("no strict interior unknowns for per-direction dof count {0}")]
    NoInteriorDofs(usize),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dense factorization failed (matrix not SPD or ill-conditioned)")]
    FactorizationFailed,

    #[error("dense instance too large: {0} unknowns (limit {1})")]
    DenseTooLarge(usize, usize),

    #[error("solver did not converge: {0} iterations, relative residual {1:e}")]
    DidNotConverge(usize, f64, #[source] Box<ReportedFailure>),

    #[error("inner solve failed")]
    InnerSolve(#[source] Box<Error>),

    #[error("multigrid levels are not nested: n = {0} is not twice n = {1}")]
    NonNestedLevels(usize, usize),

    #[error("nonpositive preconditioner diagonal at unknown {0}: {1:e}")]
    NonPositiveDiagonal(usize, f64),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Carries the full [`SolveReport`] of a failed solve through the error chain.
#[derive(Error, Debug)]
#[error("iterations: {}, final relative residual: {:e}", report.iterations, report.final_rel_residual)]
pub struct ReportedFailure {
    pub report: SolveReport,
}

impl Error {
    pub fn did_not_converge(report: SolveReport) -> Self {
        Error::DidNotConverge(
            report.iterations,
            report.final_rel_residual,
            Box::new(ReportedFailure { report }),
        )
    }

    /// The solve report attached to a convergence failure, if any.
    pub fn solve_report(&self) -> Option<&SolveReport> {
        match self {
            Error::DidNotConverge(_, _, fail) => Some(&fail.report),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
