//! Dense materialization and dense spectral helpers.
//!
//! These exist for small-instance oracles (cross-checking the matrix-free
//! operators, Schur complements and eigenvalue bounds) and for the direct
//! coarsest-grid solve inside the multigrid cycle. A hard size guard keeps
//! them away from large instances.

use crate::error::{Error, Result};
use crate::linop::{check_len, LinOp};
use nalgebra::{DMatrix, DVector};

/// Largest admissible dimension for dense work.
pub const DENSE_LIMIT: usize = 20_000;

/// Materializes a matrix-free operator column by column.
pub fn materialize(op: &dyn LinOp) -> Result<DMatrix<f64>> {
    materialize_rect(op, op.len())
}

/// Materializes an operator whose input length differs from its output
/// length (packed block operators).
pub fn materialize_rect(op: &dyn LinOp, cols: usize) -> Result<DMatrix<f64>> {
    let rows = op.len();
    if rows.max(cols) > DENSE_LIMIT {
        return Err(Error::DenseTooLarge(rows.max(cols), DENSE_LIMIT));
    }
    let mut a = DMatrix::zeros(rows, cols);
    let mut e = vec![0.0; cols];
    let mut col = vec![0.0; rows];
    for j in 0..cols {
        e[j] = 1.0;
        op.apply_into(&e, &mut col)?;
        e[j] = 0.0;
        for i in 0..rows {
            a[(i, j)] = col[i];
        }
    }
    Ok(a)
}

/// A dense matrix viewed as a [`LinOp`] (test oracle).
#[derive(Debug, Clone)]
pub struct DenseOp(pub DMatrix<f64>);

impl LinOp for DenseOp {
    fn len(&self) -> usize {
        self.0.nrows()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.0.ncols(), v.len())?;
        check_len(self.0.nrows(), out.len())?;
        let prod = &self.0 * DVector::from_column_slice(v);
        out.copy_from_slice(prod.as_slice());
        Ok(())
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigvals(a: &DMatrix<f64>) -> Vec<f64> {
    let sym = 0.5 * (a + a.transpose());
    let mut vals: Vec<f64> = nalgebra::SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}

/// Eigenvalues of the symmetric-definite pencil (A, B) with B SPD,
/// ascending: solves `A v = lambda B v` via the Cholesky reduction
/// `L^{-1} A L^{-T}`.
pub fn generalized_sym_eigvals(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = nalgebra::Cholesky::new(b.clone()).ok_or(Error::FactorizationFailed)?;
    let l = chol.l();
    let y = l
        .clone()
        .solve_lower_triangular(a)
        .ok_or(Error::SingularMatrix)?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::SingularMatrix)?;
    Ok(sym_eigvals(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn materialize_identityish_operator() {
        struct Twice(usize);
        impl LinOp for Twice {
            fn len(&self) -> usize {
                self.0
            }
            fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
                for (o, x) in out.iter_mut().zip(v) {
                    *o = 2.0 * x;
                }
                Ok(())
            }
        }
        let a = materialize(&Twice(3)).unwrap();
        assert_eq!(a, DMatrix::from_diagonal_element(3, 3, 2.0));
    }

    #[test]
    fn generalized_eigs_of_identity_pencil() {
        let a = DMatrix::from_diagonal_element(4, 4, 3.0);
        let b = DMatrix::identity(4, 4);
        let vals = generalized_sym_eigvals(&a, &b).unwrap();
        for v in vals {
            assert_abs_diff_eq!(v, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn size_guard_rejects_large_instances() {
        struct Big;
        impl LinOp for Big {
            fn len(&self) -> usize {
                DENSE_LIMIT + 1
            }
            fn apply_into(&self, _: &[f64], _: &mut [f64]) -> Result<()> {
                Ok(())
            }
        }
        assert!(matches!(
            materialize(&Big),
            Err(Error::DenseTooLarge(_, _))
        ));
    }
}
