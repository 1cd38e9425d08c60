//! Exact solver for Kronecker-sum systems via per-dimension generalized
//! eigendecompositions of the 1D (stiffness, mass) pencil.
//!
//! With `K V = M V diag(lambda)` and `V' M V = I`, the interior operator
//! `sum_k M x..x K_(k) x..x M + M x..x M` diagonalizes in the tensor basis
//! `V x..x V` with entries `1 + sum_k lambda_{i_k}`, so a solve is d dense
//! contractions in, a pointwise division, and d contractions out.

use crate::error::{Error, Result};
use crate::linop::check_len;
use crate::space1d::Tri1D;
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct FastDiagSolver {
    d: usize,
    m: usize,
    /// Generalized eigenvector matrix, row-major m x m; column j is the
    /// j-th eigenvector.
    eigvecs: Vec<f64>,
    /// Kronecker-sum eigenvalue tensor `1 + sum_k lambda_{i_k}`.
    denom: Vec<f64>,
}

/// Builds the solver from the interior 1D pencil (stiffness, mass); the
/// mass factor must be symmetric positive definite.
pub fn fast_diag_build(stiff: &Tri1D, mass: &Tri1D, d: usize) -> Result<FastDiagSolver> {
    let m = stiff.len();
    if mass.len() != m || m == 0 {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: mass.len(),
        });
    }
    let k_dense = stiff.to_dense();
    let m_dense = mass.to_dense();
    let chol = nalgebra::Cholesky::new(m_dense).ok_or(Error::FactorizationFailed)?;
    let l = chol.l();
    // C = L^{-1} K L^{-T}, symmetric standard eigenproblem
    let y = l
        .clone()
        .solve_lower_triangular(&k_dense)
        .ok_or(Error::FactorizationFailed)?;
    let c = l
        .clone()
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::FactorizationFailed)?;
    let c = 0.5 * (&c + c.transpose());
    let eig = nalgebra::SymmetricEigen::new(c);
    // back-transform: V = L^{-T} U, columns M-orthonormal
    let v: DMatrix<f64> = l
        .transpose()
        .solve_upper_triangular(&eig.eigenvectors)
        .ok_or(Error::FactorizationFailed)?;
    let mut eigvecs = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            eigvecs[i * m + j] = v[(i, j)];
        }
    }
    let lambda: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if lambda.iter().any(|l| !l.is_finite()) {
        return Err(Error::FactorizationFailed);
    }
    let total = m.pow(d as u32);
    let mut denom = vec![1.0; total];
    for (pos, dv) in denom.iter_mut().enumerate() {
        let mut rest = pos;
        for _ in 0..d {
            *dv += lambda[rest % m];
            rest /= m;
        }
    }
    Ok(FastDiagSolver {
        d,
        m,
        eigvecs,
        denom,
    })
}

impl FastDiagSolver {
    pub fn len(&self) -> usize {
        self.denom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.denom.is_empty()
    }

    /// Solves the Kronecker-sum system for `rhs` (packed interior tensor).
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), rhs.len())?;
        let mut buf = rhs.to_vec();
        let mut tmp = vec![0.0; buf.len()];
        for dim in 0..self.d {
            self.contract(dim, true, &buf, &mut tmp);
            std::mem::swap(&mut buf, &mut tmp);
        }
        for (b, d) in buf.iter_mut().zip(&self.denom) {
            *b /= d;
        }
        for dim in 0..self.d {
            self.contract(dim, false, &buf, &mut tmp);
            std::mem::swap(&mut buf, &mut tmp);
        }
        Ok(buf)
    }

    /// Contracts V (or V transposed) along `dim`.
    fn contract(&self, dim: usize, transpose: bool, src: &[f64], dst: &mut [f64]) {
        let m = self.m;
        let w = |i: usize, j: usize| {
            if transpose {
                self.eigvecs[j * m + i]
            } else {
                self.eigvecs[i * m + j]
            }
        };
        if dim == 0 {
            for (s, t) in src.chunks_exact(m).zip(dst.chunks_exact_mut(m)) {
                for i in 0..m {
                    let mut acc = 0.0;
                    for (j, sj) in s.iter().enumerate() {
                        acc += w(i, j) * sj;
                    }
                    t[i] = acc;
                }
            }
            return;
        }
        let inner = m.pow(dim as u32);
        let block = inner * m;
        for (s_blk, t_blk) in src.chunks_exact(block).zip(dst.chunks_exact_mut(block)) {
            t_blk.fill(0.0);
            for i in 0..m {
                let t_line = i * inner;
                for j in 0..m {
                    let wij = w(i, j);
                    let s_line = &s_blk[j * inner..(j + 1) * inner];
                    for (t, s) in t_blk[t_line..t_line + inner].iter_mut().zip(s_line) {
                        *t += wij * s;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{norm2, LinOp};
    use crate::space1d::{
        assemble_mass_1d_interior, assemble_stiffness_1d_interior, Mesh1D, Modified1DBasis,
    };
    use crate::tensor::{KronSumOperator, KronTerm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// The interior-block operator the solver must invert, as an explicit
    /// Kronecker sum of the restricted 1D factors.
    fn interior_operator(n: usize, d: usize) -> (KronSumOperator, FastDiagSolver) {
        let basis = Modified1DBasis::new(Mesh1D::new(n).unwrap());
        let m = basis.len();
        let stiff = assemble_stiffness_1d_interior(&basis).principal_submatrix(1, m - 1);
        let mass = assemble_mass_1d_interior(&basis).principal_submatrix(1, m - 1);
        let mi = m - 2;
        let mut terms = Vec::new();
        for k in 0..d {
            terms.push(KronTerm {
                weight: 1.0,
                factors: (0..d)
                    .map(|j| if j == k { stiff.clone() } else { mass.clone() })
                    .collect(),
            });
        }
        terms.push(KronTerm {
            weight: 1.0,
            factors: vec![mass.clone(); d],
        });
        let op = KronSumOperator::new(d, mi, terms);
        let solver = fast_diag_build(&stiff, &mass, d).unwrap();
        (op, solver)
    }

    #[test]
    fn residual_is_tiny_in_1d() {
        let (op, solver) = interior_operator(8, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rhs: Vec<f64> = (0..op.len()).map(|_| rng.random::<f64>() - 0.5).collect();
        let x = solver.solve(&rhs).unwrap();
        let ax = op.apply(&x).unwrap();
        let res: Vec<f64> = ax.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        assert!(norm2(&res) / norm2(&rhs) <= 1e-12);
    }

    #[test]
    fn residual_is_tiny_in_3d() {
        let (op, solver) = interior_operator(8, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rhs: Vec<f64> = (0..op.len()).map(|_| rng.random::<f64>() - 0.5).collect();
        let x = solver.solve(&rhs).unwrap();
        let ax = op.apply(&x).unwrap();
        let res: Vec<f64> = ax.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        assert!(norm2(&res) / norm2(&rhs) <= 1e-11);
    }

    #[test]
    fn consistency_with_constant_vectors() {
        let (op, solver) = interior_operator(8, 2);
        let ones = vec![1.0; op.len()];
        let rhs = op.apply(&ones).unwrap();
        let x = solver.solve(&rhs).unwrap();
        for v in &x {
            assert!((v - 1.0).abs() <= 1e-11);
        }
    }
}
