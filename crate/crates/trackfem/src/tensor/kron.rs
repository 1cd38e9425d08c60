//! Kronecker-sum operators and the tridiagonal contraction kernel.

use crate::error::Result;
use crate::linop::{axpy, check_len, LinOp};
use crate::space1d::{
    assemble_mass_1d, assemble_mass_1d_interior, assemble_stiffness_1d,
    assemble_stiffness_1d_interior, Tri1D,
};
use crate::tensor::TensorSpace;

/// One Kronecker product `weight * (F_{d-1} x ... x F_0)`, with factor
/// `factors[k]` acting along dimension k.
#[derive(Debug, Clone)]
pub struct KronTerm {
    pub weight: f64,
    pub factors: Vec<Tri1D>,
}

/// A sum of Kronecker products of symmetric tridiagonal 1D factors.
///
/// Applying the operator contracts each factor along its dimension in turn,
/// costing O(m^d) per term; the m^d x m^d matrix is never formed.
#[derive(Debug, Clone)]
pub struct KronSumOperator {
    d: usize,
    m: usize,
    terms: Vec<KronTerm>,
    pub symmetric: bool,
}

impl KronSumOperator {
    pub fn new(d: usize, m: usize, terms: Vec<KronTerm>) -> Self {
        for t in &terms {
            assert_eq!(t.factors.len(), d);
            for f in &t.factors {
                assert_eq!(f.len(), m);
            }
        }
        Self {
            d,
            m,
            terms,
            symmetric: true,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    /// Diagonal of the operator: products of factor diagonals.
    pub fn diagonal(&self) -> Vec<f64> {
        let total = self.m.pow(self.d as u32);
        let mut diag = vec![0.0; total];
        for term in &self.terms {
            for (pos, dv) in diag.iter_mut().enumerate() {
                let mut rest = pos;
                let mut prod = term.weight;
                for factor in &term.factors {
                    prod *= factor.diag[rest % self.m];
                    rest /= self.m;
                }
                *dv += prod;
            }
        }
        diag
    }
}

impl LinOp for KronSumOperator {
    fn len(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.len(), v.len())?;
        check_len(self.len(), out.len())?;
        out.fill(0.0);
        let mut buf = vec![0.0; v.len()];
        let mut tmp = vec![0.0; v.len()];
        for term in &self.terms {
            buf.copy_from_slice(v);
            for (k, factor) in term.factors.iter().enumerate() {
                contract_tri(factor, k, self.m, self.d, &buf, &mut tmp);
                std::mem::swap(&mut buf, &mut tmp);
            }
            axpy(term.weight, &buf, out);
        }
        Ok(())
    }
}

/// Contracts a symmetric tridiagonal factor along dimension `dim` of a
/// d-dimensional tensor with extent `m` per dimension (dimension 0 fastest).
pub fn contract_tri(tri: &Tri1D, dim: usize, m: usize, d: usize, src: &[f64], dst: &mut [f64]) {
    debug_assert_eq!(src.len(), m.pow(d as u32));
    debug_assert_eq!(dst.len(), src.len());
    let diag = &tri.diag;
    let sub = &tri.sub;
    if dim == 0 {
        // contiguous lines of length m
        for (s, t) in src.chunks_exact(m).zip(dst.chunks_exact_mut(m)) {
            for i in 0..m {
                let mut acc = diag[i] * s[i];
                if i > 0 {
                    acc += sub[i - 1] * s[i - 1];
                }
                if i + 1 < m {
                    acc += sub[i] * s[i + 1];
                }
                t[i] = acc;
            }
        }
        return;
    }
    let inner = m.pow(dim as u32);
    let block = inner * m;
    for (s_blk, t_blk) in src.chunks_exact(block).zip(dst.chunks_exact_mut(block)) {
        for i in 0..m {
            let lo = i * inner;
            let di = diag[i];
            let (center, dst_line) = (&s_blk[lo..lo + inner], &mut t_blk[lo..lo + inner]);
            for (t, s) in dst_line.iter_mut().zip(center) {
                *t = di * s;
            }
            if i > 0 {
                let w = sub[i - 1];
                let prev = &s_blk[lo - inner..lo];
                for (t, s) in dst_line.iter_mut().zip(prev) {
                    *t += w * s;
                }
            }
            if i + 1 < m {
                let w = sub[i];
                let next = &s_blk[lo + inner..lo + 2 * inner];
                for (t, s) in dst_line.iter_mut().zip(next) {
                    *t += w * s;
                }
            }
        }
    }
}

/// The H1(Omega) inner-product operator on the tensor space: one stiffness
/// slot per dimension plus the full tensor mass.
pub fn h1_operator(space: &TensorSpace) -> KronSumOperator {
    let mass = assemble_mass_1d(space.basis());
    let stiff = assemble_stiffness_1d(space.basis());
    build_h1_terms(space.d(), space.m(), &mass, &stiff)
}

/// The H1 inner product over the interior subdomain `(h, 1-h)^d`, assembled
/// from the interior-interval 1D factors.
pub fn interior_h1_operator(space: &TensorSpace) -> KronSumOperator {
    let mass = assemble_mass_1d_interior(space.basis());
    let stiff = assemble_stiffness_1d_interior(space.basis());
    build_h1_terms(space.d(), space.m(), &mass, &stiff)
}

fn build_h1_terms(d: usize, m: usize, mass: &Tri1D, stiff: &Tri1D) -> KronSumOperator {
    let mut terms = Vec::with_capacity(d + 1);
    for k in 0..d {
        let factors = (0..d)
            .map(|j| if j == k { stiff.clone() } else { mass.clone() })
            .collect();
        terms.push(KronTerm {
            weight: 1.0,
            factors,
        });
    }
    terms.push(KronTerm {
        weight: 1.0,
        factors: vec![mass.clone(); d],
    });
    KronSumOperator::new(d, m, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::materialize;
    use crate::linop::dot;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(d: usize, n: usize) -> TensorSpace {
        TensorSpace::new(d, n).unwrap()
    }

    fn kron2(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        // entry ((i1,i0),(j1,j0)) = a[i1,j1] * b[i0,j0] with dim 0 fastest
        a.kronecker(b)
    }

    #[test]
    fn d1_is_stiffness_plus_mass() {
        let s = space(1, 4);
        let op = h1_operator(&s);
        let dense = materialize(&op).unwrap();
        let expected = assemble_stiffness_1d(s.basis()).to_dense()
            + assemble_mass_1d(s.basis()).to_dense();
        assert!((dense - expected).abs().max() < 1e-14);
    }

    #[test]
    fn d2_matches_dense_kronecker_oracle() {
        let s = space(2, 4);
        let op = h1_operator(&s);
        let dense = materialize(&op).unwrap();
        let k = assemble_stiffness_1d(s.basis()).to_dense();
        let m = assemble_mass_1d(s.basis()).to_dense();
        // dimension 0 fastest: slot order in the Kronecker product is
        // (dim1 x dim0)
        let expected = kron2(&m, &k) + kron2(&k, &m) + kron2(&m, &m);
        assert!((dense - expected).abs().max() < 1e-14);
    }

    #[test]
    fn constants_see_only_the_mass_part() {
        for d in 1..=3 {
            let s = space(d, 4);
            let op = h1_operator(&s);
            let ones = vec![1.0; s.total_dofs()];
            let av = op.apply(&ones).unwrap();
            // stiffness annihilates constants, so A*1 = (tensor mass)*1
            let mass_only = KronSumOperator::new(
                d,
                s.m(),
                vec![KronTerm {
                    weight: 1.0,
                    factors: vec![assemble_mass_1d(s.basis()); d],
                }],
            );
            let mv = mass_only.apply(&ones).unwrap();
            for (a, b) in av.iter().zip(&mv) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-13);
            }
            // <A 1, 1> = |Omega| = 1
            assert_abs_diff_eq!(dot(&av, &ones), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn apply_is_linear_and_matches_dense() {
        let s = space(2, 4);
        let op = h1_operator(&s);
        let dense = materialize(&op).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v: Vec<f64> = (0..s.total_dofs()).map(|_| rng.random::<f64>() - 0.5).collect();
        let got = op.apply(&v).unwrap();
        let want = &dense * DMatrix::from_column_slice(v.len(), 1, &v);
        for (g, w) in got.iter().zip(want.iter()) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-13);
        }
        // zero maps to zero
        let z = op.apply(&vec![0.0; s.total_dofs()]).unwrap();
        assert!(z.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn apply_is_symmetric() {
        let s = space(3, 4);
        let op = h1_operator(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let v: Vec<f64> = (0..s.total_dofs()).map(|_| rng.random::<f64>() - 0.5).collect();
            let w: Vec<f64> = (0..s.total_dofs()).map(|_| rng.random::<f64>() - 0.5).collect();
            let av = op.apply(&v).unwrap();
            let aw = op.apply(&w).unwrap();
            let lhs = dot(&av, &w);
            let rhs = dot(&v, &aw);
            let scale = lhs.abs().max(rhs.abs()).max(1e-30);
            assert!((lhs - rhs).abs() / scale < 1e-12);
        }
    }

    #[test]
    fn diagonal_matches_dense() {
        let s = space(2, 8);
        let op = interior_h1_operator(&s);
        let dense = materialize(&op).unwrap();
        let diag = op.diagonal();
        for (i, dv) in diag.iter().enumerate() {
            assert_abs_diff_eq!(*dv, dense[(i, i)], epsilon = 1e-13);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = space(2, 4);
        let op = h1_operator(&s);
        assert!(op.apply(&vec![0.0; 5]).is_err());
    }
}
