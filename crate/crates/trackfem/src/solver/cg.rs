//! (Preconditioned) conjugate gradients.

use crate::error::{Error, Result};
use crate::linop::{axpy, check_len, dot, norm2, LinOp};
use crate::solver::{Precond, SolveReport, SolverConfig};
use std::time::Instant;

/// Solves `A x = rhs` for a symmetric positive definite operator.
///
/// Convergence is declared on the unpreconditioned Euclidean relative
/// residual `||rhs - A x|| / ||rhs|| <= cfg.rel_tol`; with a preconditioner
/// the standard PCG recursion is used but the reported residual stays the
/// plain one. A zero right-hand side returns immediately. Reaching
/// `max_iters` returns the current iterate with `converged = false`.
pub fn cg(
    op: &dyn LinOp,
    rhs: &[f64],
    cfg: &SolverConfig,
    precond: Option<&dyn Precond>,
) -> Result<(Vec<f64>, SolveReport)> {
    cfg.validate()?;
    check_len(op.len(), rhs.len())?;
    let start = Instant::now();
    let n = rhs.len();
    let rhs_norm = norm2(rhs);
    if !rhs_norm.is_finite() {
        return Err(Error::Diverged);
    }
    let mut x = vec![0.0; n];
    if rhs_norm == 0.0 {
        return Ok((
            x,
            SolveReport {
                iterations: 0,
                final_rel_residual: 0.0,
                converged: true,
                inner_iterations_total: 0,
                wall_time: start.elapsed(),
            },
        ));
    }

    let mut r = rhs.to_vec();
    let mut z = match precond {
        Some(p) => p.apply(&r)?,
        None => r.clone(),
    };
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut rel_res = 1.0;

    for iter in 1..=cfg.max_iters {
        let q = op.apply(&p)?;
        let pq = dot(&p, &q);
        if !pq.is_finite() {
            return Err(Error::Diverged);
        }
        if pq <= 0.0 {
            return Err(Error::NotSpd(pq));
        }
        let alpha = rz / pq;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &q, &mut r);
        rel_res = norm2(&r) / rhs_norm;
        if !rel_res.is_finite() {
            return Err(Error::Diverged);
        }
        if rel_res <= cfg.rel_tol {
            return Ok((
                x,
                SolveReport {
                    iterations: iter,
                    final_rel_residual: rel_res,
                    converged: true,
                    inner_iterations_total: 0,
                    wall_time: start.elapsed(),
                },
            ));
        }
        z = match precond {
            Some(pc) => pc.apply(&r)?,
            None => r.clone(),
        };
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }

    Ok((
        x,
        SolveReport {
            iterations: cfg.max_iters,
            final_rel_residual: rel_res,
            converged: false,
            inner_iterations_total: 0,
            wall_time: start.elapsed(),
        },
    ))
}
