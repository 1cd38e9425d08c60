//! Dense LU solve (test oracle for small instances).

use crate::dense::DENSE_LIMIT;
use crate::error::{Error, Result};
use crate::linop::check_len;
use nalgebra::{DMatrix, DVector};

/// Solves `A x = rhs` by partial-pivoting LU. Guarded to small instances.
pub fn dense_lu_solve(a: &DMatrix<f64>, rhs: &[f64]) -> Result<Vec<f64>> {
    if a.nrows() > DENSE_LIMIT {
        return Err(Error::DenseTooLarge(a.nrows(), DENSE_LIMIT));
    }
    check_len(a.nrows(), rhs.len())?;
    let lu = a.clone().lu();
    let x = lu
        .solve(&DVector::from_column_slice(rhs))
        .ok_or(Error::SingularMatrix)?;
    Ok(x.as_slice().to_vec())
}
