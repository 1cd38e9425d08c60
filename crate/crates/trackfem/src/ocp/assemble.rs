//! Quadrature loops over the boundary faces and the volume.

use crate::ocp::Target;
use crate::quadrature::QuadratureRule;
use crate::space1d::Modified1DBasis;
use crate::tensor::{faces, for_each_multi, TensorSpace};

/// Local support on one interval at one reference point:
/// (dof, value, derivative).
type AxisEntries = Vec<(usize, f64, f64)>;

fn axis_support(basis: &Modified1DBasis, elem: usize, p: f64) -> AxisEntries {
    let h = basis.mesh().h();
    basis
        .local_support(elem)
        .map(|(j, s)| (j, s.value(p), s.deriv(h)))
        .collect()
}

/// Product basis values over the tensor support, with running flat index.
fn for_each_value_combo(
    supports: &[(usize, &AxisEntries)],
    base: usize,
    coef: f64,
    f: &mut impl FnMut(usize, f64),
) {
    match supports.split_first() {
        None => f(base, coef),
        Some((&(stride, entries), rest)) => {
            for &(j, v, _) in entries {
                for_each_value_combo(rest, base + stride * j, coef * v, f);
            }
        }
    }
}

/// Entries `int_Gamma ybar phi_k ds`, face by face with tensor Gauss
/// quadrature per surface element. Strict interior unknowns receive zero.
pub fn assemble_boundary_rhs(
    target: &Target,
    space: &TensorSpace,
    quad: &QuadratureRule,
) -> Vec<f64> {
    let mut rhs = vec![0.0; space.total_dofs()];
    face_quadrature(space, quad, |x, w, supports, base| {
        let fw = target.eval(x) * w;
        let mut scatter = |flat: usize, v: f64| rhs[flat] += fw * v;
        for_each_value_combo(supports, base, 1.0, &mut scatter);
    });
    rhs
}

/// `|| y_h - f ||_{L2(Gamma)}` for the finite element function with the
/// given coefficients.
pub fn boundary_l2_error_fn(
    space: &TensorSpace,
    coeffs: &[f64],
    f: &dyn Fn(&[f64]) -> f64,
    quad: &QuadratureRule,
) -> f64 {
    assert_eq!(coeffs.len(), space.total_dofs());
    let mut acc = 0.0;
    face_quadrature(space, quad, |x, w, supports, base| {
        let mut value = 0.0;
        let mut gather = |flat: usize, v: f64| value += coeffs[flat] * v;
        for_each_value_combo(supports, base, 1.0, &mut gather);
        let diff = value - f(x);
        acc += w * diff * diff;
    });
    acc.sqrt()
}

/// `|| y_h - ybar ||_{L2(Gamma)}` against a target.
pub fn boundary_l2_error(
    space: &TensorSpace,
    coeffs: &[f64],
    target: &Target,
    quad: &QuadratureRule,
) -> f64 {
    boundary_l2_error_fn(space, coeffs, &|x| target.eval(x), quad)
}

/// `|| ybar ||_{L2(Gamma)}`.
pub fn boundary_l2_norm(target: &Target, space: &TensorSpace, quad: &QuadratureRule) -> f64 {
    let zeros = vec![0.0; space.total_dofs()];
    boundary_l2_error(space, &zeros, target, quad)
}

/// Visits every surface quadrature point of every face. The callback gets
/// the point, its surface weight, the per-tangential-axis supports (with
/// their flat-index strides) and the flat-index offset of the frozen axis.
/// For d = 1 the faces are the two endpoints with weight 1.
fn face_quadrature(
    space: &TensorSpace,
    quad: &QuadratureRule,
    mut visit: impl FnMut(&[f64], f64, &[(usize, &AxisEntries)], usize),
) {
    let d = space.d();
    let m = space.m();
    let basis = space.basis();
    let n = basis.mesh().intervals();
    let h = space.h();
    let q = quad.len();
    let mut x = vec![0.0; d];
    for face in faces(d) {
        let fixed_dof = if face.upper { m - 1 } else { 0 };
        let base = fixed_dof * m.pow(face.axis as u32);
        x[face.axis] = if face.upper { 1.0 } else { 0.0 };
        let tangential: Vec<usize> = (0..d).filter(|&a| a != face.axis).collect();
        for_each_multi(&vec![n; d - 1], |elem| {
            for_each_multi(&vec![q; d - 1], |qp| {
                let mut w = 1.0;
                let mut supports: Vec<(usize, AxisEntries)> = Vec::with_capacity(d - 1);
                for (t, &axis) in tangential.iter().enumerate() {
                    let p = quad.points[qp[t]];
                    x[axis] = basis.mesh().node(elem[t]) + h * p;
                    w *= h * quad.weights[qp[t]];
                    supports.push((m.pow(axis as u32), axis_support(basis, elem[t], p)));
                }
                let borrowed: Vec<(usize, &AxisEntries)> =
                    supports.iter().map(|(s, e)| (*s, e)).collect();
                visit(&x, w, &borrowed, base);
            });
        });
    }
}

/// `|| y_h - f ||_{L2(Omega)}` by element-wise tensor quadrature.
pub fn volume_l2_error(
    space: &TensorSpace,
    coeffs: &[f64],
    f: impl Fn(&[f64]) -> f64,
    quad: &QuadratureRule,
) -> f64 {
    let d = space.d();
    let m = space.m();
    let basis = space.basis();
    let n = basis.mesh().intervals();
    let h = space.h();
    let q = quad.len();
    let mut x = vec![0.0; d];
    let mut acc = 0.0;
    for_each_multi(&vec![n; d], |elem| {
        for_each_multi(&vec![q; d], |qp| {
            let mut w = 1.0;
            let mut supports: Vec<(usize, AxisEntries)> = Vec::with_capacity(d);
            for axis in 0..d {
                let p = quad.points[qp[axis]];
                x[axis] = basis.mesh().node(elem[axis]) + h * p;
                w *= h * quad.weights[qp[axis]];
                supports.push((m.pow(axis as u32), axis_support(basis, elem[axis], p)));
            }
            let borrowed: Vec<(usize, &AxisEntries)> =
                supports.iter().map(|(s, e)| (*s, e)).collect();
            let mut value = 0.0;
            let mut gather = |flat: usize, v: f64| value += coeffs[flat] * v;
            for_each_value_combo(&borrowed, 0, 1.0, &mut gather);
            let diff = value - f(&x);
            acc += w * diff * diff;
        });
    });
    acc.sqrt()
}

/// Full H1(Omega) norm of a finite element function evaluated by volume
/// quadrature (an oracle independent of the assembled operators).
pub fn h1_norm_quadrature(space: &TensorSpace, coeffs: &[f64], quad: &QuadratureRule) -> f64 {
    let d = space.d();
    let m = space.m();
    let basis = space.basis();
    let n = basis.mesh().intervals();
    let h = space.h();
    let q = quad.len();
    let mut acc = 0.0;
    for_each_multi(&vec![n; d], |elem| {
        for_each_multi(&vec![q; d], |qp| {
            let mut w = 1.0;
            let mut supports: Vec<(usize, AxisEntries)> = Vec::with_capacity(d);
            for axis in 0..d {
                let p = quad.points[qp[axis]];
                w *= h * quad.weights[qp[axis]];
                supports.push((m.pow(axis as u32), axis_support(basis, elem[axis], p)));
            }
            let mut value = 0.0;
            let mut grad = [0.0; 3];
            value_grad_combos(
                &supports,
                0,
                0,
                1.0,
                [1.0; 3],
                &mut |flat, v, g: &[f64; 3]| {
                    let c = coeffs[flat];
                    value += c * v;
                    for k in 0..d {
                        grad[k] += c * g[k];
                    }
                },
            );
            acc += w * (value * value + grad[..d].iter().map(|g| g * g).sum::<f64>());
        });
    });
    acc.sqrt()
}

fn value_grad_combos(
    supports: &[(usize, AxisEntries)],
    axis: usize,
    base: usize,
    val: f64,
    grad: [f64; 3],
    f: &mut impl FnMut(usize, f64, &[f64; 3]),
) {
    if axis == supports.len() {
        f(base, val, &grad);
        return;
    }
    let (stride, entries) = &supports[axis];
    for &(j, v, dv) in entries {
        let mut g = grad;
        for (k, gk) in g.iter_mut().enumerate() {
            *gk *= if k == axis { dv } else { v };
        }
        value_grad_combos(supports, axis + 1, base + stride * j, val * v, g, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_target_gives_zero_rhs() {
        let space = TensorSpace::new(2, 8).unwrap();
        let rhs = assemble_boundary_rhs(&Target::zero(), &space, &gauss_rule(5).unwrap());
        assert!(rhs.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_target_rhs_sums_to_the_boundary_measure() {
        // sum_k int_Gamma phi_k = |Gamma| by the partition of unity
        let one = Target::Custom {
            name: "one".into(),
            smoothness: crate::ocp::Smoothness::Unknown,
            eval: std::sync::Arc::new(|_| 1.0),
        };
        for (d, measure) in [(1usize, 2.0), (2, 4.0), (3, 6.0)] {
            let space = TensorSpace::new(d, 4).unwrap();
            let rhs = assemble_boundary_rhs(&one, &space, &gauss_rule(5).unwrap());
            let total: f64 = rhs.iter().sum();
            assert_abs_diff_eq!(total, measure, epsilon = 1e-13);
        }
    }

    #[test]
    fn rhs_vanishes_at_strict_interior_dofs() {
        let space = TensorSpace::new(3, 8).unwrap();
        let rhs = assemble_boundary_rhs(&Target::Cosine, &space, &gauss_rule(5).unwrap());
        let part = crate::tensor::DofPartition::new(&space).unwrap();
        for &id in part.interior_ids() {
            assert_eq!(rhs[id], 0.0);
        }
    }

    #[test]
    fn refined_quadrature_oracle_for_the_cosine_rhs() {
        // assembly is quadrature-converged: order 8 vs order 10 agree far
        // below the discretization scales
        let space = TensorSpace::new(3, 4).unwrap();
        let a = assemble_boundary_rhs(&Target::Cosine, &space, &gauss_rule(8).unwrap());
        let b = assemble_boundary_rhs(&Target::Cosine, &space, &gauss_rule(10).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-10);
        }
    }

    #[test]
    fn default_order_rhs_is_close_to_the_refined_oracle() {
        let space = TensorSpace::new(3, 4).unwrap();
        let a = assemble_boundary_rhs(&Target::Cosine, &space, &gauss_rule(5).unwrap());
        let b = assemble_boundary_rhs(&Target::Cosine, &space, &gauss_rule(10).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-6);
        }
    }

    #[test]
    fn boundary_error_of_zero_coefficients_is_the_target_norm() {
        let space = TensorSpace::new(2, 8).unwrap();
        let quad = gauss_rule(8).unwrap();
        let norm = boundary_l2_norm(&Target::Cosine, &space, &quad);
        // 4 edges, each carrying int_0^1 cos^2(pi t) dt = 1/2
        assert_abs_diff_eq!(norm, 2.0_f64.sqrt(), epsilon = 1e-12);
        let zeros = vec![0.0; space.total_dofs()];
        assert_eq!(
            boundary_l2_error(&space, &zeros, &Target::zero(), &quad),
            0.0
        );
    }

    #[test]
    fn d1_boundary_error_is_a_point_evaluation_sum() {
        let space = TensorSpace::new(1, 8).unwrap();
        let quad = gauss_rule(5).unwrap();
        let mut coeffs = vec![0.0; space.total_dofs()];
        coeffs[0] = 2.0; // y_h(0) = 2
        let err = boundary_l2_error(&space, &coeffs, &Target::zero(), &quad);
        assert_abs_diff_eq!(err, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn h1_quadrature_norm_of_constants() {
        // || 1 ||_{H1} = 1 on the unit cube
        for d in 1..=3 {
            let space = TensorSpace::new(d, 4).unwrap();
            let ones = vec![1.0; space.total_dofs()];
            let norm = h1_norm_quadrature(&space, &ones, &gauss_rule(5).unwrap());
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn h1_quadrature_norm_matches_the_operator_norm() {
        use crate::linop::{dot, LinOp};
        let space = TensorSpace::new(2, 8).unwrap();
        let h1 = crate::tensor::h1_operator(&space);
        let coeffs: Vec<f64> = (0..space.total_dofs())
            .map(|i| ((i * 7919 % 101) as f64) / 101.0 - 0.5)
            .collect();
        let via_quad = h1_norm_quadrature(&space, &coeffs, &gauss_rule(5).unwrap());
        let via_op = dot(&coeffs, &h1.apply(&coeffs).unwrap()).sqrt();
        assert_abs_diff_eq!(via_quad, via_op, epsilon = 1e-11);
    }
}
