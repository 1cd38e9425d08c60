//! The boundary Schur complement operator.
//!
//! Eliminating the strict interior unknowns from the discrete system
//! `[M~ + rho (K~ + K_int)] y = rhs` (where `M~`, `K~` live only on the
//! near-boundary block) leaves a system on the near-boundary unknowns with
//! `S = M_BB + rho (K~_BB + K_BB - K_BI K_II^{-1} K_IB)`. The operator is
//! applied matrix-free; the interior solve is exact fast diagonalization or
//! an inner CG, per configuration.

use crate::error::{Error, Result};
use crate::linop::{check_len, LinOp};
use crate::solver::{cg, fast_diag_build, FastDiagSolver, InnerMode, SolverConfig};
use crate::tensor::{
    boundary_mass, h1_operator, interior_h1_operator, BlockOperator, BlockSel,
    BoundaryMassOperator, DofPartition, KronSumOperator, TensorSpace,
};
use std::sync::atomic::{AtomicUsize, Ordering};

enum InnerSolver {
    FastDiag(FastDiagSolver),
    Pcg { rel_tol: f64, max_iters: usize },
}

pub struct SchurOperator {
    h1: KronSumOperator,
    interior_h1: KronSumOperator,
    boundary_mass: BoundaryMassOperator,
    partition: DofPartition,
    rho: f64,
    inner: InnerSolver,
    inner_iters: AtomicUsize,
}

/// Assembles the Schur complement operator for a space and regularization
/// weight. Requires at least one strict interior unknown and `rho > 0`.
pub fn build_schur(space: &TensorSpace, rho: f64, cfg: &SolverConfig) -> Result<SchurOperator> {
    if rho <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "regularization weight must be positive, got {rho}"
        )));
    }
    let partition = DofPartition::new(space)?;
    if partition.interior_len() == 0 {
        return Err(Error::NoInteriorDofs(space.m()));
    }
    let interior_h1 = interior_h1_operator(space);
    let inner = match cfg.inner_mode {
        InnerMode::FastDiagonalization => {
            let m = space.m();
            let basis = space.basis();
            let stiff = crate::space1d::assemble_stiffness_1d_interior(basis)
                .principal_submatrix(1, m - 1);
            let mass =
                crate::space1d::assemble_mass_1d_interior(basis).principal_submatrix(1, m - 1);
            InnerSolver::FastDiag(fast_diag_build(&stiff, &mass, space.d())?)
        }
        InnerMode::InnerPcg => InnerSolver::Pcg {
            rel_tol: cfg.inner_rel_tol,
            max_iters: cfg.max_iters.max(100 * space.m()),
        },
    };
    Ok(SchurOperator {
        h1: h1_operator(space),
        interior_h1,
        boundary_mass: boundary_mass(space),
        partition,
        rho,
        inner,
        inner_iters: AtomicUsize::new(0),
    })
}

impl SchurOperator {
    pub fn partition(&self) -> &DofPartition {
        &self.partition
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn boundary_mass_op(&self) -> &BoundaryMassOperator {
        &self.boundary_mass
    }

    pub fn h1_op(&self) -> &KronSumOperator {
        &self.h1
    }

    /// Inner CG iterations accumulated since the last reset.
    pub fn take_inner_iterations(&self) -> usize {
        self.inner_iters.swap(0, Ordering::Relaxed)
    }

    /// Solves `K_II z = g` on the packed interior block.
    pub fn solve_interior(&self, g: &[f64]) -> Result<Vec<f64>> {
        match &self.inner {
            InnerSolver::FastDiag(fd) => fd.solve(g),
            InnerSolver::Pcg { rel_tol, max_iters } => {
                let op = BlockOperator::new(
                    &self.interior_h1,
                    &self.partition,
                    BlockSel::Interior,
                    BlockSel::Interior,
                );
                let cfg = SolverConfig {
                    rel_tol: *rel_tol,
                    max_iters: *max_iters,
                    ..Default::default()
                };
                let (z, report) =
                    cg(&op, g, &cfg, None).map_err(|e| Error::InnerSolve(Box::new(e)))?;
                self.inner_iters.fetch_add(report.iterations, Ordering::Relaxed);
                if !report.converged {
                    return Err(Error::InnerSolve(Box::new(Error::did_not_converge(report))));
                }
                Ok(z)
            }
        }
    }

    /// Interior unknowns induced by a boundary solution:
    /// `y_I = -K_II^{-1} K_IB y_B`.
    pub fn reconstruct_interior(&self, y_b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.partition.boundary_len(), y_b.len())?;
        let full = self.partition.embed(BlockSel::Boundary, y_b)?;
        let kv = self.interior_h1.apply(&full)?;
        let g = self.partition.restrict(BlockSel::Interior, &kv)?;
        let mut z = self.solve_interior(&g)?;
        for v in &mut z {
            *v = -*v;
        }
        Ok(z)
    }

    /// Assembles the full coefficient vector from the boundary solution.
    pub fn full_solution(&self, y_b: &[f64]) -> Result<Vec<f64>> {
        let y_i = self.reconstruct_interior(y_b)?;
        let mut full = self.partition.embed(BlockSel::Boundary, y_b)?;
        for (&id, &v) in self.partition.interior_ids().iter().zip(&y_i) {
            full[id] = v;
        }
        Ok(full)
    }
}

impl LinOp for SchurOperator {
    fn len(&self) -> usize {
        self.partition.boundary_len()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.len(), v.len())?;
        check_len(self.len(), out.len())?;
        let part = &self.partition;
        let full = part.embed(BlockSel::Boundary, v)?;
        let mv = self.boundary_mass.apply(&full)?;
        // (K~ + K_int)_BB v = (A_h)_BB v since the layer parts vanish off
        // the boundary block
        let av = self.h1.apply(&full)?;
        let kv = self.interior_h1.apply(&full)?;
        let g = part.restrict(BlockSel::Interior, &kv)?;
        let z = self.solve_interior(&g)?;
        let u = self.interior_h1.apply(&part.embed(BlockSel::Interior, &z)?)?;
        for ((o, &id), _) in out.iter_mut().zip(part.boundary_ids()).zip(v) {
            *o = mv[id] + self.rho * (av[id] - u[id]);
        }
        Ok(())
    }
}
