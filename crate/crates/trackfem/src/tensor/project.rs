//! Tensor-product L2 projection: the 1D projection applied factor by factor.

use crate::quadrature::QuadratureRule;
use crate::space1d::{assemble_mass_1d, Tri1D};
use crate::tensor::{for_each_multi, TensorSpace};

/// L2-orthogonal projection of `f` onto the tensor space.
///
/// The moment tensor `b_k = \int_Omega f phi_k dx` is accumulated with
/// element-wise tensor Gauss quadrature; the tensor mass system then factors
/// into d successive tridiagonal solves, one sweep per dimension.
pub fn tensor_l2_projection(
    space: &TensorSpace,
    f: impl Fn(&[f64]) -> f64,
    quad: &QuadratureRule,
) -> Vec<f64> {
    let d = space.d();
    let m = space.m();
    let n = space.basis().mesh().intervals();
    let h = space.h();
    let basis = space.basis();
    let mut b = vec![0.0; space.total_dofs()];
    let q = quad.len();

    let mut x = vec![0.0; d];
    for_each_multi(&vec![n; d], |elem| {
        for_each_multi(&vec![q; d], |qp| {
            let mut w = 1.0;
            for k in 0..d {
                x[k] = basis.mesh().node(elem[k]) + h * quad.points[qp[k]];
                w *= h * quad.weights[qp[k]];
            }
            let fx = f(&x) * w;
            // scatter into the <= 2^d basis functions alive on this element
            scatter_combos(basis, elem, qp, quad, m, fx, &mut b);
        });
    });

    let mass = assemble_mass_1d(basis);
    for dim in 0..d {
        solve_tri_along_dim(&mass, dim, m, d, &mut b);
    }
    b
}

fn scatter_combos(
    basis: &crate::space1d::Modified1DBasis,
    elem: &[usize],
    qp: &[usize],
    quad: &QuadratureRule,
    m: usize,
    fx: f64,
    b: &mut [f64],
) {
    let d = elem.len();
    // per-axis support: (dof, shape value at the quadrature point)
    let mut supports: [Vec<(usize, f64)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for k in 0..d {
        let p = quad.points[qp[k]];
        supports[k] = basis
            .local_support(elem[k])
            .map(|(j, s)| (j, s.value(p)))
            .collect();
    }
    let mut idx = [0usize; 3];
    combo_rec(&supports[..d], 0, &mut idx, fx, &mut |idx, v| {
        let mut pos = 0usize;
        for k in (0..d).rev() {
            pos = pos * m + idx[k];
        }
        b[pos] += v;
    });
}

fn combo_rec(
    supports: &[Vec<(usize, f64)>],
    k: usize,
    idx: &mut [usize; 3],
    val: f64,
    f: &mut impl FnMut(&[usize; 3], f64),
) {
    if k == supports.len() {
        f(idx, val);
        return;
    }
    for &(j, v) in &supports[k] {
        idx[k] = j;
        combo_rec(supports, k + 1, idx, val * v, f);
    }
}

/// Solves `T x = rhs` along dimension `dim` for every line of the tensor.
pub(crate) fn solve_tri_along_dim(tri: &Tri1D, dim: usize, m: usize, d: usize, data: &mut [f64]) {
    let inner = m.pow(dim as u32);
    let outer = m.pow((d - 1 - dim) as u32);
    let mut line = vec![0.0; m];
    for o in 0..outer {
        for s in 0..inner {
            let base = o * inner * m + s;
            for i in 0..m {
                line[i] = data[base + i * inner];
            }
            tri.solve_in_place(&mut line);
            for i in 0..m {
                data[base + i * inner] = line[i];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn constants_are_reproduced() {
        for d in 1..=3 {
            let space = TensorSpace::new(d, 4).unwrap();
            let c = tensor_l2_projection(&space, |_| 1.0, &gauss_rule(5).unwrap());
            for v in &c {
                assert_abs_diff_eq!(v, &1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn volume_error_is_second_order() {
        let quad = gauss_rule(8).unwrap();
        let f = |x: &[f64]| (PI * x[0]).cos() * (PI * x[1]).cos();
        let mut errs = Vec::new();
        for n in [8usize, 16, 32] {
            let space = TensorSpace::new(2, n).unwrap();
            let c = tensor_l2_projection(&space, f, &quad);
            errs.push(crate::ocp::volume_l2_error(&space, &c, f, &quad));
        }
        for pair in errs.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!(order >= 1.9, "observed order {order}");
        }
    }

    #[test]
    fn boundary_trace_error_is_second_order() {
        let quad = gauss_rule(8).unwrap();
        let f = |x: &[f64]| (PI * x[0]).cos() * (PI * x[1]).cos();
        let mut errs = Vec::new();
        for n in [8usize, 16, 32] {
            let space = TensorSpace::new(2, n).unwrap();
            let c = tensor_l2_projection(&space, f, &quad);
            errs.push(crate::ocp::boundary_l2_error_fn(&space, &c, &f, &quad));
        }
        for pair in errs.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!(order >= 1.9, "observed order {order}");
        }
    }
}
