//! Diagonal preconditioners.

use crate::error::{Error, Result};
use crate::linop::{check_len, LinOp};
use crate::tensor::{BlockSel, BoundaryMassOperator, DofPartition, TensorSpace};

/// A symmetric positive definite preconditioner: `apply` returns `M^{-1} r`.
pub trait Precond {
    fn len(&self) -> usize;
    fn apply(&self, r: &[f64]) -> Result<Vec<f64>>;
}

/// Diagonal (Jacobi-type) preconditioner.
#[derive(Debug, Clone)]
pub struct DiagonalPrecond {
    inv_diag: Vec<f64>,
}

impl DiagonalPrecond {
    /// Builds from the diagonal entries, which must all be positive.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut inv_diag = Vec::with_capacity(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            if d <= 0.0 {
                return Err(Error::NonPositiveDiagonal(i, d));
            }
            inv_diag.push(1.0 / d);
        }
        Ok(Self { inv_diag })
    }
}

impl Precond for DiagonalPrecond {
    fn len(&self) -> usize {
        self.inv_diag.len()
    }

    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), r.len())?;
        Ok(r.iter().zip(&self.inv_diag).map(|(x, d)| x * d).collect())
    }
}

/// Lumped boundary mass: the diagonal of row sums of `M_BB`, the natural
/// h^(d-1) scaling for the Schur complement system.
///
/// Row sums are computed matrix-free as `M_Gamma * 1` restricted to the
/// near-boundary block; by the partition of unity on the faces, the row sum
/// of unknown k equals the boundary integral of its trace. An unknown whose
/// trace happens to vanish (none exist on the faces of the cube) would fall
/// back to the plain `h^(d-1)` scale; a negative row sum is an assembly bug.
pub fn lumped_boundary_preconditioner(
    boundary_mass: &BoundaryMassOperator,
    partition: &DofPartition,
    space: &TensorSpace,
) -> Result<DiagonalPrecond> {
    let ones = vec![1.0; boundary_mass.len()];
    let row_sums_full = boundary_mass.apply(&ones)?;
    let row_sums = partition.restrict(BlockSel::Boundary, &row_sums_full)?;
    let fallback = space.h().powi(space.d() as i32 - 1);
    let mut diag = Vec::with_capacity(row_sums.len());
    for (i, &s) in row_sums.iter().enumerate() {
        if s < 0.0 {
            return Err(Error::NonPositiveDiagonal(i, s));
        }
        diag.push(if s == 0.0 { fallback } else { s });
    }
    DiagonalPrecond::from_diagonal(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{generalized_sym_eigvals, materialize};
    use crate::linop::LinOp;
    use crate::tensor::{boundary_mass, BlockOperator};

    #[test]
    fn d1_lumped_diagonal_is_unit_point_masses() {
        let space = TensorSpace::new(1, 8).unwrap();
        let bm = boundary_mass(&space);
        let part = DofPartition::new(&space).unwrap();
        let pre = lumped_boundary_preconditioner(&bm, &part, &space).unwrap();
        // B block in 1D is the two endpoint dofs with point mass 1
        let r = vec![1.0; part.boundary_len()];
        let z = pre.apply(&r).unwrap();
        assert_eq!(z, vec![1.0, 1.0]);
    }

    #[test]
    fn d2_diagonal_scales_like_h() {
        let space = TensorSpace::new(2, 8).unwrap();
        let bm = boundary_mass(&space);
        let part = DofPartition::new(&space).unwrap();
        let ones = vec![1.0; bm.len()];
        let sums = part
            .restrict(BlockSel::Boundary, &bm.apply(&ones).unwrap())
            .unwrap();
        let h = space.h();
        for s in sums {
            assert!(s >= 0.9 * h && s <= 3.1 * h, "row sum {s} outside [c1 h, c2 h]");
        }
    }

    #[test]
    fn lumping_is_spectrally_close_to_the_consistent_mass() {
        // generalized eigenvalues of (M_BB, lump(M_BB)) stay in [1/3, 3]
        let space = TensorSpace::new(2, 8).unwrap();
        let bm = boundary_mass(&space);
        let part = DofPartition::new(&space).unwrap();
        let mbb = materialize(&BlockOperator::new(
            &bm,
            &part,
            BlockSel::Boundary,
            BlockSel::Boundary,
        ))
        .unwrap();
        let ones = vec![1.0; bm.len()];
        let sums = part
            .restrict(BlockSel::Boundary, &bm.apply(&ones).unwrap())
            .unwrap();
        let lump = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(sums));
        let eigs = generalized_sym_eigvals(&mbb, &lump).unwrap();
        let (lo, hi) = (eigs[0], eigs[eigs.len() - 1]);
        assert!(lo >= 1.0 / 3.0 - 1e-12, "lambda_min = {lo}");
        assert!(hi <= 3.0 + 1e-12, "lambda_max = {hi}");
    }

    #[test]
    fn negative_diagonal_is_rejected() {
        assert!(DiagonalPrecond::from_diagonal(&[1.0, -0.5]).is_err());
        assert!(DiagonalPrecond::from_diagonal(&[1.0, 0.0]).is_err());
    }
}
