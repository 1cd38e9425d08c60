//! Single solves of the discrete tracking system and control recovery.

use crate::error::{Error, Result};
use crate::linop::{dot, LinOp};
use crate::ocp::{assemble_boundary_rhs, OcpConfig, SolverPath};
use crate::quadrature::gauss_rule;
use crate::solver::{
    build_schur, cg, lumped_boundary_preconditioner, DiagonalPrecond, GmgPreconditioner, Precond,
    PrecondKind, SolveReport, SystemOperator,
};
use crate::tensor::{
    boundary_mass, h1_operator, BlockSel, DofPartition, KronSumOperator, TensorSpace,
};

/// A solved state: coefficients over the full unknown set, the originating
/// configuration, and the solver report.
#[derive(Debug, Clone)]
pub struct StateSolution {
    pub coeffs: Vec<f64>,
    pub config: OcpConfig,
    pub report: SolveReport,
}

/// Solves the regularized boundary-tracking system for the configured
/// target, level and solver path.
pub fn solve_ocp(cfg: &OcpConfig) -> Result<StateSolution> {
    cfg.validate()?;
    let space = cfg.space()?;
    let rho = cfg.rho();
    let quad = gauss_rule(cfg.quad_order)?;
    let rhs = assemble_boundary_rhs(&cfg.target, &space, &quad);

    let (coeffs, mut report) = match cfg.path {
        SolverPath::SchurCg | SolverPath::SchurPcg => {
            let schur = build_schur(&space, rho, &cfg.solver)?;
            let part = schur.partition();
            let rhs_b = part.restrict(BlockSel::Boundary, &rhs)?;
            let lumped;
            let precond: Option<&dyn Precond> = match cfg.path {
                SolverPath::SchurPcg => {
                    lumped = lumped_boundary_preconditioner(
                        schur.boundary_mass_op(),
                        part,
                        &space,
                    )?;
                    Some(&lumped)
                }
                _ => None,
            };
            let (y_b, mut report) = cg(&schur, &rhs_b, &cfg.solver, precond)?;
            if !report.converged {
                return Err(Error::did_not_converge(report));
            }
            let full = schur.full_solution(&y_b)?;
            report.inner_iterations_total = schur.take_inner_iterations();
            (full, report)
        }
        SolverPath::FullPcg => {
            let h1 = h1_operator(&space);
            let bmass = boundary_mass(&space);
            let sys = SystemOperator {
                boundary_mass: &bmass,
                h1: &h1,
                rho,
            };
            let gmg;
            let jacobi;
            let precond: Option<&dyn Precond> = match cfg.solver.preconditioner {
                PrecondKind::GmgVcycle => {
                    gmg = GmgPreconditioner::for_space(&space, rho, cfg.solver.smoother)?;
                    Some(&gmg)
                }
                PrecondKind::Jacobi => {
                    jacobi = DiagonalPrecond::from_diagonal(&sys.diagonal())?;
                    Some(&jacobi)
                }
                PrecondKind::None => None,
                PrecondKind::LumpedBoundaryMass => {
                    return Err(Error::InvalidConfig(
                        "the lumped boundary mass only preconditions the Schur paths".into(),
                    ))
                }
            };
            let (y, report) = cg(&sys, &rhs, &cfg.solver, precond)?;
            if !report.converged {
                return Err(Error::did_not_converge(report));
            }
            (y, report)
        }
    };

    report.inner_iterations_total = match cfg.path {
        SolverPath::FullPcg => 0,
        _ => report.inner_iterations_total,
    };
    Ok(StateSolution {
        coeffs,
        config: cfg.clone(),
        report,
    })
}

/// The recovered control as a functional on the discrete space: its
/// coefficient vector is the H1 operator applied to the state, and its dual
/// norm equals the state's H1 norm.
#[derive(Debug, Clone)]
pub struct ControlFunctional {
    pub coeffs: Vec<f64>,
    pub dual_norm: f64,
}

pub fn recover_control(solution: &StateSolution) -> Result<ControlFunctional> {
    let space = solution.config.space()?;
    let h1 = h1_operator(&space);
    let coeffs = h1.apply(&solution.coeffs)?;
    let dual_norm = dot(&solution.coeffs, &coeffs).max(0.0).sqrt();
    Ok(ControlFunctional { coeffs, dual_norm })
}

/// Discrete H1 norm `sqrt(c' A c)` of a coefficient vector.
pub fn discrete_h1_norm(h1: &KronSumOperator, coeffs: &[f64]) -> Result<f64> {
    Ok(dot(coeffs, &h1.apply(coeffs)?).max(0.0).sqrt())
}

/// Residual of the full discrete system for a solved state, relative to
/// the right-hand side norm (used by invariants and reports).
pub fn full_system_rel_residual(cfg: &OcpConfig, coeffs: &[f64]) -> Result<f64> {
    let space = cfg.space()?;
    let quad = gauss_rule(cfg.quad_order)?;
    let rhs = assemble_boundary_rhs(&cfg.target, &space, &quad);
    let h1 = h1_operator(&space);
    let bmass = boundary_mass(&space);
    let sys = SystemOperator {
        boundary_mass: &bmass,
        h1: &h1,
        rho: cfg.rho(),
    };
    let av = sys.apply(coeffs)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in av.iter().zip(&rhs) {
        num += (a - b) * (a - b);
        den += b * b;
    }
    Ok(if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    })
}

/// Partition accessor used by callers that need the packed blocks of a
/// freshly solved configuration.
pub fn partition_for(cfg: &OcpConfig) -> Result<(TensorSpace, DofPartition)> {
    let space = cfg.space()?;
    let part = DofPartition::new(&space)?;
    Ok((space, part))
}
