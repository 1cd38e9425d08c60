//! The boundary mass operator over Gamma = boundary of (0,1)^d.

use crate::error::Result;
use crate::linop::{check_len, LinOp};
use crate::space1d::{assemble_mass_1d, Tri1D};
use crate::tensor::{contract_tri, TensorSpace};

/// One of the 2d faces of the unit cube: coordinate `axis` frozen at 0
/// (lower) or 1 (upper).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub axis: usize,
    pub upper: bool,
}

/// Enumerates the 2d faces of (0,1)^d.
pub fn faces(d: usize) -> Vec<Face> {
    (0..d)
        .flat_map(|axis| {
            [false, true]
                .into_iter()
                .map(move |upper| Face { axis, upper })
        })
        .collect()
}

/// Gram operator of the L2(Gamma) inner product.
///
/// Only near-boundary unknowns (some 1D index equal to 1 or m) have a
/// nonzero trace, so rows at strict interior unknowns vanish. Faces are
/// summed as disjoint pieces; edge and corner overlaps have surface measure
/// zero. For d = 1 the operator degenerates to point evaluation at {0, 1}.
#[derive(Debug, Clone)]
pub struct BoundaryMassOperator {
    d: usize,
    m: usize,
    mass: Tri1D,
    faces: Vec<Face>,
}

pub fn boundary_mass(space: &TensorSpace) -> BoundaryMassOperator {
    BoundaryMassOperator {
        d: space.d(),
        m: space.m(),
        mass: assemble_mass_1d(space.basis()),
        faces: faces(space.d()),
    }
}

impl BoundaryMassOperator {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    fn slab_len(&self) -> usize {
        self.m.pow(self.d as u32 - 1)
    }

    /// Copies the slab with `index[face.axis]` frozen out of `v`.
    fn gather_slab(&self, face: Face, v: &[f64], slab: &mut [f64]) {
        let (m, d) = (self.m, self.d);
        let fix = if face.upper { m - 1 } else { 0 };
        let inner = m.pow(face.axis as u32);
        let outer = m.pow((d - 1 - face.axis) as u32);
        for a in 0..outer {
            let src = a * inner * m + fix * inner;
            slab[a * inner..(a + 1) * inner].copy_from_slice(&v[src..src + inner]);
        }
    }

    fn scatter_add_slab(&self, face: Face, slab: &[f64], out: &mut [f64]) {
        let (m, d) = (self.m, self.d);
        let fix = if face.upper { m - 1 } else { 0 };
        let inner = m.pow(face.axis as u32);
        let outer = m.pow((d - 1 - face.axis) as u32);
        for a in 0..outer {
            let dst = a * inner * m + fix * inner;
            for (o, s) in out[dst..dst + inner].iter_mut().zip(&slab[a * inner..]) {
                *o += s;
            }
        }
    }

    /// Diagonal entries (used by the lumped and Jacobi preconditioners).
    pub fn diagonal(&self) -> Vec<f64> {
        let total = self.m.pow(self.d as u32);
        let mut diag = vec![0.0; total];
        let slab_len = self.slab_len();
        let mut slab = vec![0.0; slab_len];
        for &face in &self.faces {
            for (pos, s) in slab.iter_mut().enumerate() {
                let mut rest = pos;
                let mut prod = 1.0;
                for _ in 0..self.d - 1 {
                    prod *= self.mass.diag[rest % self.m];
                    rest /= self.m;
                }
                *s = prod;
            }
            self.scatter_add_slab(face, &slab, &mut diag);
        }
        diag
    }
}

impl LinOp for BoundaryMassOperator {
    fn len(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.len(), v.len())?;
        check_len(self.len(), out.len())?;
        out.fill(0.0);
        let slab_len = self.slab_len();
        let mut slab = vec![0.0; slab_len];
        let mut tmp = vec![0.0; slab_len];
        for &face in &self.faces {
            self.gather_slab(face, v, &mut slab);
            // tensor mass over the d-1 tangential directions
            for k in 0..self.d - 1 {
                contract_tri(&self.mass, k, self.m, self.d - 1, &slab, &mut tmp);
                std::mem::swap(&mut slab, &mut tmp);
            }
            self.scatter_add_slab(face, &slab, out);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::materialize;
    use crate::linop::dot;
    use approx::assert_abs_diff_eq;

    fn op(d: usize, n: usize) -> (TensorSpace, BoundaryMassOperator) {
        let s = TensorSpace::new(d, n).unwrap();
        let b = boundary_mass(&s);
        (s, b)
    }

    #[test]
    fn d1_reduces_to_point_masses() {
        let (s, b) = op(1, 8);
        let dense = materialize(&b).unwrap();
        for i in 0..s.total_dofs() {
            for j in 0..s.total_dofs() {
                let expected = if i == j && (i == 0 || i == s.m() - 1) {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(dense[(i, j)], expected);
            }
        }
    }

    #[test]
    fn constants_measure_the_boundary() {
        // <M_Gamma 1, 1> = |Gamma|: 2 endpoints, perimeter 4, surface 6
        for (d, measure) in [(1usize, 2.0), (2, 4.0), (3, 6.0)] {
            let (s, b) = op(d, 4);
            let ones = vec![1.0; s.total_dofs()];
            let bv = b.apply(&ones).unwrap();
            assert_abs_diff_eq!(dot(&bv, &ones), measure, epsilon = 1e-12);
        }
    }

    #[test]
    fn rows_vanish_at_strict_interior_dofs() {
        let (s, b) = op(2, 8);
        let dense = materialize(&b).unwrap();
        let m = s.m();
        for i1 in 1..m - 1 {
            for i0 in 1..m - 1 {
                let row = i0 + m * i1;
                for j in 0..s.total_dofs() {
                    assert_eq!(dense[(row, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn diagonal_matches_dense() {
        for d in 1..=3 {
            let (_, b) = op(d, 4);
            let dense = materialize(&b).unwrap();
            for (i, dv) in b.diagonal().iter().enumerate() {
                assert_abs_diff_eq!(*dv, dense[(i, i)], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn symmetric_positive_semidefinite() {
        let (_, b) = op(2, 4);
        let dense = materialize(&b).unwrap();
        assert!((dense.clone() - dense.transpose()).abs().max() < 1e-14);
        let eig = nalgebra::SymmetricEigen::new(dense);
        assert!(eig.eigenvalues.iter().all(|&l| l > -1e-13));
    }
}
