//! L2 projection onto the modified 1D space.

use crate::quadrature::QuadratureRule;
use crate::space1d::{assemble_mass_1d, Modified1DBasis};

/// L2-orthogonal projection of `f` onto the space: solves `M c = b` with
/// `b_i = \int_0^1 f phi_i dx` computed element by element with the given
/// rule, then a tridiagonal direct solve. The projection is non-expansive
/// in L2.
pub fn l2_projection(
    basis: &Modified1DBasis,
    f: impl Fn(f64) -> f64,
    quad: &QuadratureRule,
) -> Vec<f64> {
    let n = basis.mesh().intervals();
    let h = basis.mesh().h();
    let mut b = vec![0.0; basis.len()];
    for e in 0..n {
        let left = basis.mesh().node(e);
        for (&p, &w) in quad.points.iter().zip(&quad.weights) {
            let x = left + h * p;
            let fx = f(x) * w * h;
            for (j, shape) in basis.local_support(e) {
                b[j] += fx * shape.value(p);
            }
        }
    }
    let mass = assemble_mass_1d(basis);
    mass.solve_in_place(&mut b);
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;
    use crate::space1d::Mesh1D;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn basis(n: usize) -> Modified1DBasis {
        Modified1DBasis::new(Mesh1D::new(n).unwrap())
    }

    fn l2_norm(basis: &Modified1DBasis, f: impl Fn(f64) -> f64) -> f64 {
        let rule = gauss_rule(8).unwrap();
        let n = basis.mesh().intervals();
        let mut s = 0.0;
        for e in 0..n {
            let (a, b) = (basis.mesh().node(e), basis.mesh().node(e + 1));
            s += rule.integrate(a, b, |x| f(x) * f(x));
        }
        s.sqrt()
    }

    #[test]
    fn constants_are_reproduced() {
        let b = basis(8);
        let c = l2_projection(&b, |_| 1.0, &gauss_rule(5).unwrap());
        for v in &c {
            assert_abs_diff_eq!(v, &1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn cosine_error_bound() {
        // || y - Q_h y || <= h^2/2 ||y''|| for y with zero end derivatives
        let quad = gauss_rule(8).unwrap();
        for n in [8usize, 16, 32] {
            let b = basis(n);
            let h = b.mesh().h();
            let y = |x: f64| (PI * x).cos();
            let c = l2_projection(&b, y, &quad);
            let err = l2_norm(&b, |x| y(x) - b.eval_coeffs(&c, x));
            let d2 = l2_norm(&b, |x| PI * PI * (PI * x).cos());
            assert!(err <= 0.5 * h * h * d2, "n={n}: {err} > bound");
        }
    }

    #[test]
    fn cosine_gradient_stability() {
        // || (Q_h y)' || <= (1 + 4 sqrt(6)) || y' ||
        let quad = gauss_rule(8).unwrap();
        let bound = 1.0 + 4.0 * 6.0_f64.sqrt();
        for n in [8usize, 16, 32] {
            let b = basis(n);
            let y = |x: f64| (PI * x).cos();
            let c = l2_projection(&b, y, &quad);
            let lhs = l2_norm(&b, |x| b.eval_coeffs_deriv(&c, x));
            let rhs = l2_norm(&b, |x| -PI * (PI * x).sin());
            assert!(lhs <= bound * rhs);
        }
    }

    #[test]
    fn error_rate_is_second_order() {
        let quad = gauss_rule(8).unwrap();
        let y = |x: f64| (2.0 * PI * x).cos();
        let mut errs = Vec::new();
        for n in [8usize, 16, 32, 64] {
            let b = basis(n);
            let c = l2_projection(&b, y, &quad);
            errs.push(l2_norm(&b, |x| y(x) - b.eval_coeffs(&c, x)));
        }
        for pair in errs.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!(order >= 1.9, "observed order {order}");
        }
    }
}
