//! Tensor-product operators on (0,1)^d built from 1D factors.
//!
//! Coefficient vectors are stored lexicographically with dimension 0
//! fastest: a multi-index (i_0, ..., i_{d-1}) with m unknowns per direction
//! maps to `i_0 + m*i_1 + m^2*i_2 + ...`. All operators act matrix-free via
//! dimension-by-dimension contractions; nothing of size m^d x m^d is ever
//! stored.

mod boundary;
mod kron;
mod partition;
mod project;
mod space;

pub use boundary::{boundary_mass, faces, BoundaryMassOperator, Face};
pub use kron::{contract_tri, h1_operator, interior_h1_operator, KronSumOperator, KronTerm};
pub use partition::{BlockOperator, BlockSel, DofPartition};
pub use project::tensor_l2_projection;
pub use space::TensorSpace;

/// Calls `f` for every multi-index of the mixed-radix space `dims`
/// (dimension 0 fastest). With `dims` empty, `f` is called once with `&[]`.
pub(crate) fn for_each_multi(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.iter().any(|&m| m == 0) {
        return;
    }
    let d = dims.len();
    let mut idx = vec![0usize; d];
    loop {
        f(&idx);
        let mut k = 0;
        loop {
            if k == d {
                return;
            }
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Flattens a multi-index with uniform extent `m` per dimension.
#[cfg(test)]
pub(crate) fn flatten(idx: &[usize], m: usize) -> usize {
    idx.iter().rev().fold(0, |acc, &i| acc * m + i)
}
