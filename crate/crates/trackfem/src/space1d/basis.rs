//! The modified piecewise-linear basis with flat end intervals.

use crate::error::Result;
use crate::linop::check_len;
use crate::space1d::Mesh1D;

/// Basis `phi_1 .. phi_m`, `m = n - 1`, of continuous piecewise linears on a
/// uniform mesh. `phi_1` is 1 on the first interval and decays to 0 over the
/// second; `phi_m` mirrors it at the right end; the rest are standard hats.
/// Every basis function has zero one-sided derivative at x = 0 and x = 1,
/// and the functions sum to 1 on all of [0, 1].
#[derive(Debug, Clone)]
pub struct Modified1DBasis {
    mesh: Mesh1D,
    m: usize,
}

/// Restriction of a basis function to a single mesh interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalShape {
    /// Constant 1 (end intervals of the two modified functions).
    Flat,
    /// Linear from 0 at the left node to 1 at the right node.
    Rising,
    /// Linear from 1 at the left node to 0 at the right node.
    Falling,
}

impl LocalShape {
    /// Value at reference coordinate `p` in [0, 1].
    pub fn value(self, p: f64) -> f64 {
        match self {
            LocalShape::Flat => 1.0,
            LocalShape::Rising => p,
            LocalShape::Falling => 1.0 - p,
        }
    }

    /// Derivative on an interval of width `h`.
    pub fn deriv(self, h: f64) -> f64 {
        match self {
            LocalShape::Flat => 0.0,
            LocalShape::Rising => 1.0 / h,
            LocalShape::Falling => -1.0 / h,
        }
    }
}

impl Modified1DBasis {
    pub fn new(mesh: Mesh1D) -> Self {
        let m = mesh.intervals() - 1;
        Self { mesh, m }
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    /// Number of basis functions, `n - 1`.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of the node carrying dof `j` (0-based), i.e. `x_{j+1}`.
    pub fn dof_node(&self, j: usize) -> f64 {
        self.mesh.node(j + 1)
    }

    /// The (at most two) basis functions supported on interval `e`,
    /// as (dof index, shape on that interval).
    pub fn local_support(&self, e: usize) -> impl Iterator<Item = (usize, LocalShape)> {
        let n = self.mesh.intervals();
        let m = self.m;
        let pair: [Option<(usize, LocalShape)>; 2] = if e == 0 {
            [Some((0, LocalShape::Flat)), None]
        } else if e == n - 1 {
            [Some((m - 1, LocalShape::Flat)), None]
        } else {
            [
                Some((e - 1, LocalShape::Falling)),
                Some((e, LocalShape::Rising)),
            ]
        };
        pair.into_iter().flatten()
    }

    /// Evaluates basis function `j` (0-based) at `x` in [0, 1].
    pub fn eval(&self, j: usize, x: f64) -> f64 {
        let nodes = self.mesh.nodes();
        let n = self.mesh.intervals();
        let h = self.mesh.h();
        if j == 0 && x <= nodes[1] {
            return 1.0;
        }
        if j == self.m - 1 && x >= nodes[n - 1] {
            return 1.0;
        }
        let center = nodes[j + 1];
        (1.0 - (x - center).abs() / h).max(0.0)
    }

    /// Derivative of basis function `j` at `x` (taken one-sidedly from the
    /// right at nodes; the value at kinks is irrelevant for integration).
    pub fn eval_deriv(&self, j: usize, x: f64) -> f64 {
        let nodes = self.mesh.nodes();
        let n = self.mesh.intervals();
        let h = self.mesh.h();
        if j == 0 && x < nodes[1] {
            return 0.0;
        }
        if j == self.m - 1 && x > nodes[n - 1] {
            return 0.0;
        }
        let center = nodes[j + 1];
        if x > center - h && x < center {
            1.0 / h
        } else if x > center && x < center + h {
            -1.0 / h
        } else {
            0.0
        }
    }

    /// Evaluates the function with coefficients `c` at `x`.
    pub fn eval_coeffs(&self, c: &[f64], x: f64) -> f64 {
        debug_assert_eq!(c.len(), self.m);
        let e = self.interval_of(x);
        let h = self.mesh.h();
        let p = (x - self.mesh.node(e)) / h;
        self.local_support(e)
            .map(|(j, shape)| c[j] * shape.value(p))
            .sum()
    }

    /// Derivative of the function with coefficients `c` at `x`.
    pub fn eval_coeffs_deriv(&self, c: &[f64], x: f64) -> f64 {
        debug_assert_eq!(c.len(), self.m);
        let e = self.interval_of(x);
        let h = self.mesh.h();
        self.local_support(e)
            .map(|(j, shape)| c[j] * shape.deriv(h))
            .sum()
    }

    /// Index of the mesh interval containing `x` (clamped to [0, n-1]).
    pub fn interval_of(&self, x: f64) -> usize {
        let n = self.mesh.intervals();
        ((x * n as f64).floor() as usize).min(n - 1)
    }
}

/// Nodal interpolation from pre-sampled values at the dof nodes
/// `x_1 .. x_{n-1}`. The represented function is constant on the first and
/// last subinterval.
pub fn interpolate_nodal(basis: &Modified1DBasis, samples: &[f64]) -> Result<Vec<f64>> {
    check_len(basis.len(), samples.len())?;
    Ok(samples.to_vec())
}

/// Nodal interpolation of a callable.
pub fn interpolate_fn(basis: &Modified1DBasis, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..basis.len()).map(|j| f(basis.dof_node(j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basis(n: usize) -> Modified1DBasis {
        Modified1DBasis::new(Mesh1D::new(n).unwrap())
    }

    #[test]
    fn partition_of_unity_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [4usize, 8, 16] {
            let b = basis(n);
            for _ in 0..100 {
                let x: f64 = rng.random();
                let sum: f64 = (0..b.len()).map(|j| b.eval(j, x)).sum();
                assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn zero_endpoint_derivatives() {
        for n in [4usize, 8, 16] {
            let b = basis(n);
            let h = b.mesh().h();
            for j in 0..b.len() {
                // one-sided difference quotients across the end intervals
                let left = (b.eval(j, h) - b.eval(j, 0.0)) / h;
                let right = (b.eval(j, 1.0) - b.eval(j, 1.0 - h)) / h;
                assert_eq!(left, 0.0);
                assert_eq!(right, 0.0);
            }
        }
    }

    #[test]
    fn first_function_is_flat_then_decays() {
        let b = basis(4);
        assert_eq!(b.eval(0, 0.0), 1.0);
        assert_eq!(b.eval(0, 0.1), 1.0);
        assert_eq!(b.eval(0, 0.25), 1.0);
        assert_abs_diff_eq!(b.eval(0, 0.375), 0.5, epsilon = 1e-15);
        assert_eq!(b.eval(0, 0.5), 0.0);
        // mirrored at the right end
        assert_eq!(b.eval(2, 1.0), 1.0);
        assert_eq!(b.eval(2, 0.8), 1.0);
        assert_abs_diff_eq!(b.eval(2, 0.625), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn interpolation_of_constants_is_exact() {
        let b = basis(8);
        let c = interpolate_fn(&b, |_| 1.0);
        assert!(c.iter().all(|&v| v == 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x: f64 = rng.random();
            assert_abs_diff_eq!(b.eval_coeffs(&c, x), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn interpolation_rejects_wrong_length() {
        let b = basis(8);
        assert!(interpolate_nodal(&b, &[0.0; 3]).is_err());
        assert!(interpolate_nodal(&b, &[0.0; 7]).is_ok());
    }

    #[test]
    fn interpolant_l2_error_bound_for_cosine() {
        // || y - I_h y || <= h^2/2 * || y'' || for y with zero end derivatives
        let b = basis(16);
        let h = b.mesh().h();
        let y = |x: f64| (std::f64::consts::PI * x).cos();
        let c = interpolate_fn(&b, y);
        let rule = gauss_rule(8).unwrap();
        let mut err2 = 0.0;
        let mut d2norm2 = 0.0;
        let pi = std::f64::consts::PI;
        for e in 0..16 {
            let (a, bb) = (b.mesh().node(e), b.mesh().node(e + 1));
            err2 += rule.integrate(a, bb, |x| (y(x) - b.eval_coeffs(&c, x)).powi(2));
            d2norm2 += rule.integrate(a, bb, |x| (pi * pi * (pi * x).cos()).powi(2));
        }
        assert!(err2.sqrt() <= 0.5 * h * h * d2norm2.sqrt());
    }

    #[test]
    fn interpolant_gradient_of_identity() {
        // y(x) = x: the interpolant is flat on both end intervals, slope 1
        // in between, so ||(I_h y)'|| = sqrt(1 - 2h) <= 1 = ||y'||.
        for n in [8usize, 16] {
            let b = basis(n);
            let h = b.mesh().h();
            let c = interpolate_fn(&b, |x| x);
            let rule = gauss_rule(4).unwrap();
            let mut grad2 = 0.0;
            for e in 0..n {
                let (a, bb) = (b.mesh().node(e), b.mesh().node(e + 1));
                grad2 += rule.integrate(a, bb, |x| b.eval_coeffs_deriv(&c, x).powi(2));
            }
            assert_abs_diff_eq!(grad2.sqrt(), (1.0 - 2.0 * h).sqrt(), epsilon = 1e-13);
            assert!(grad2.sqrt() <= 1.0);
        }
    }
}
