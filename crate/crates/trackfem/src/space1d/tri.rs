//! Symmetric tridiagonal matrices of the 1D bilinear forms.

use crate::error::Result;
use crate::linop::check_len;
use crate::space1d::{LocalShape, Modified1DBasis};

/// Which bilinear form a [`Tri1D`] represents. The `Interior` kinds
/// integrate over `(x_1, x_{n-1})` instead of the full interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriKind {
    MassFull,
    StiffnessFull,
    MassInterior,
    StiffnessInterior,
}

/// Symmetric tridiagonal storage: `diag` of length m, `sub` of length m-1.
#[derive(Debug, Clone)]
pub struct Tri1D {
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
    pub kind: TriKind,
}

impl Tri1D {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `out = T v`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let m = self.len();
        debug_assert_eq!(v.len(), m);
        debug_assert_eq!(out.len(), m);
        for i in 0..m {
            let mut s = self.diag[i] * v[i];
            if i > 0 {
                s += self.sub[i - 1] * v[i - 1];
            }
            if i + 1 < m {
                s += self.sub[i] * v[i + 1];
            }
            out[i] = s;
        }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.apply_into(v, &mut out);
        out
    }

    /// Direct solve `T x = rhs` by the Thomas algorithm (no pivoting; the
    /// mass kinds are symmetric positive definite, which makes the
    /// elimination unconditionally stable).
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), rhs.len())?;
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    pub(crate) fn solve_in_place(&self, x: &mut [f64]) {
        let m = self.len();
        let mut c = vec![0.0; m]; // modified superdiagonal coefficients
        let mut inv = 1.0 / self.diag[0];
        if m > 1 {
            c[0] = self.sub[0] * inv;
        }
        x[0] *= inv;
        for i in 1..m {
            inv = 1.0 / (self.diag[i] - self.sub[i - 1] * c[i - 1]);
            if i + 1 < m {
                c[i] = self.sub[i] * inv;
            }
            x[i] = (x[i] - self.sub[i - 1] * x[i - 1]) * inv;
        }
        for i in (0..m - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
    }

    /// Principal submatrix on rows/columns `lo..hi`.
    pub fn principal_submatrix(&self, lo: usize, hi: usize) -> Tri1D {
        Tri1D {
            diag: self.diag[lo..hi].to_vec(),
            sub: self.sub[lo..hi - 1].to_vec(),
            kind: self.kind,
        }
    }

    /// Dense copy, for small oracle computations.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let m = self.len();
        let mut a = nalgebra::DMatrix::zeros(m, m);
        for i in 0..m {
            a[(i, i)] = self.diag[i];
            if i + 1 < m {
                a[(i, i + 1)] = self.sub[i];
                a[(i + 1, i)] = self.sub[i];
            }
        }
        a
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        let m = self.len();
        let mut s = self.diag[i];
        if i > 0 {
            s += self.sub[i - 1];
        }
        if i + 1 < m {
            s += self.sub[i];
        }
        s
    }
}

/// Closed-form integrals of shape-function products over one interval of
/// width h: value products and derivative products.
fn pairwise_mass(a: LocalShape, b: LocalShape, h: f64) -> f64 {
    use LocalShape::*;
    h * match (a, b) {
        (Flat, Flat) => 1.0,
        (Rising, Rising) | (Falling, Falling) => 1.0 / 3.0,
        (Rising, Falling) | (Falling, Rising) => 1.0 / 6.0,
        (Flat, _) | (_, Flat) => 0.5,
    }
}

fn pairwise_stiffness(a: LocalShape, b: LocalShape, h: f64) -> f64 {
    a.deriv(h) * b.deriv(h) * h
}

fn assemble(
    basis: &Modified1DBasis,
    elements: std::ops::Range<usize>,
    kind: TriKind,
    entry: fn(LocalShape, LocalShape, f64) -> f64,
) -> Tri1D {
    let m = basis.len();
    let h = basis.mesh().h();
    let mut diag = vec![0.0; m];
    let mut sub = vec![0.0; m - 1];
    for e in elements {
        let support: Vec<(usize, LocalShape)> = basis.local_support(e).collect();
        for &(i, si) in &support {
            for &(j, sj) in &support {
                let v = entry(si, sj, h);
                if i == j {
                    diag[i] += v;
                } else if j == i + 1 {
                    sub[i] += v;
                }
            }
        }
    }
    Tri1D { diag, sub, kind }
}

/// Gram matrix of the basis in L2(0, 1).
pub fn assemble_mass_1d(basis: &Modified1DBasis) -> Tri1D {
    let n = basis.mesh().intervals();
    assemble(basis, 0..n, TriKind::MassFull, pairwise_mass)
}

/// Gram matrix of the derivatives in L2(0, 1). The end intervals contribute
/// nothing because the modified functions are flat there.
pub fn assemble_stiffness_1d(basis: &Modified1DBasis) -> Tri1D {
    let n = basis.mesh().intervals();
    assemble(basis, 0..n, TriKind::StiffnessFull, pairwise_stiffness)
}

/// Mass matrix integrated over `(x_1, x_{n-1})` only; differs from the full
/// mass in the two corner entries, which lose the flat-segment contribution.
pub fn assemble_mass_1d_interior(basis: &Modified1DBasis) -> Tri1D {
    let n = basis.mesh().intervals();
    assemble(basis, 1..n - 1, TriKind::MassInterior, pairwise_mass)
}

/// Stiffness integrated over `(x_1, x_{n-1})`. All derivative support lies
/// inside that interval, so the result equals the full stiffness; it is
/// assembled independently so the identity is checked, not assumed.
pub fn assemble_stiffness_1d_interior(basis: &Modified1DBasis) -> Tri1D {
    let n = basis.mesh().intervals();
    assemble(basis, 1..n - 1, TriKind::StiffnessInterior, pairwise_stiffness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;
    use crate::space1d::Mesh1D;
    use approx::assert_abs_diff_eq;

    fn basis(n: usize) -> Modified1DBasis {
        Modified1DBasis::new(Mesh1D::new(n).unwrap())
    }

    /// Numerical-quadrature oracle: assembles the same Gram matrix from
    /// pointwise basis evaluations, order-4 Gauss per subinterval.
    fn quad_oracle(b: &Modified1DBasis, deriv: bool, lo: usize, hi: usize) -> Tri1D {
        let m = b.len();
        let rule = gauss_rule(4).unwrap();
        let mut diag = vec![0.0; m];
        let mut sub = vec![0.0; m - 1];
        let f = |j: usize, x: f64| {
            if deriv {
                b.eval_deriv(j, x)
            } else {
                b.eval(j, x)
            }
        };
        for e in lo..hi {
            let (a, bb) = (b.mesh().node(e), b.mesh().node(e + 1));
            for i in 0..m {
                diag[i] += rule.integrate(a, bb, |x| f(i, x) * f(i, x));
                if i + 1 < m {
                    sub[i] += rule.integrate(a, bb, |x| f(i, x) * f(i + 1, x));
                }
            }
        }
        Tri1D {
            diag,
            sub,
            kind: TriKind::MassFull,
        }
    }

    fn assert_tri_eq(a: &Tri1D, b: &Tri1D, tol: f64) {
        for (x, y) in a.diag.iter().zip(&b.diag) {
            assert_abs_diff_eq!(x, y, epsilon = tol);
        }
        for (x, y) in a.sub.iter().zip(&b.sub) {
            assert_abs_diff_eq!(x, y, epsilon = tol);
        }
    }

    #[test]
    fn mass_n4_closed_form() {
        let b = basis(4);
        let h = 0.25;
        let mass = assemble_mass_1d(&b);
        assert_tri_eq(
            &mass,
            &Tri1D {
                diag: vec![4.0 * h / 3.0, 2.0 * h / 3.0, 4.0 * h / 3.0],
                sub: vec![h / 6.0, h / 6.0],
                kind: TriKind::MassFull,
            },
            1e-15,
        );
    }

    #[test]
    fn mass_row_sums_are_basis_integrals() {
        for n in [4usize, 8, 16] {
            let b = basis(n);
            let h = b.mesh().h();
            let mass = assemble_mass_1d(&b);
            let m = b.len();
            for i in 0..m {
                let expected = if i == 0 || i == m - 1 { 1.5 * h } else { h };
                assert_abs_diff_eq!(mass.row_sum(i), expected, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn mass_matches_quadrature_oracle() {
        let b = basis(8);
        let mass = assemble_mass_1d(&b);
        let oracle = quad_oracle(&b, false, 0, 8);
        assert_tri_eq(&mass, &oracle, 1e-14);
    }

    #[test]
    fn stiffness_n4_closed_form() {
        let b = basis(4);
        let h = 0.25;
        let k = assemble_stiffness_1d(&b);
        assert_tri_eq(
            &k,
            &Tri1D {
                diag: vec![1.0 / h, 2.0 / h, 1.0 / h],
                sub: vec![-1.0 / h, -1.0 / h],
                kind: TriKind::StiffnessFull,
            },
            1e-15,
        );
    }

    #[test]
    fn stiffness_annihilates_constants() {
        for n in [4usize, 8, 32] {
            let b = basis(n);
            let k = assemble_stiffness_1d(&b);
            let ones = vec![1.0; b.len()];
            for v in k.apply(&ones) {
                assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn stiffness_matches_quadrature_oracle() {
        let b = basis(8);
        let k = assemble_stiffness_1d(&b);
        let oracle = quad_oracle(&b, true, 0, 8);
        assert_tri_eq(&k, &oracle, 1e-14);
    }

    #[test]
    fn interior_mass_n4_closed_form() {
        let b = basis(4);
        let h = 0.25;
        let mass = assemble_mass_1d_interior(&b);
        assert_tri_eq(
            &mass,
            &Tri1D {
                diag: vec![h / 3.0, 2.0 * h / 3.0, h / 3.0],
                sub: vec![h / 6.0, h / 6.0],
                kind: TriKind::MassInterior,
            },
            1e-15,
        );
    }

    #[test]
    fn interior_mass_differs_only_in_corners() {
        for n in [4usize, 8, 16] {
            let b = basis(n);
            let h = b.mesh().h();
            let full = assemble_mass_1d(&b);
            let interior = assemble_mass_1d_interior(&b);
            let m = b.len();
            for i in 0..m {
                let expected = if i == 0 || i == m - 1 { h } else { 0.0 };
                assert_abs_diff_eq!(full.diag[i] - interior.diag[i], expected, epsilon = 1e-15);
            }
            for i in 0..m - 1 {
                assert_abs_diff_eq!(full.sub[i], interior.sub[i], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn interior_mass_matches_quadrature_oracle() {
        let b = basis(8);
        let mass = assemble_mass_1d_interior(&b);
        let oracle = quad_oracle(&b, false, 1, 7);
        assert_tri_eq(&mass, &oracle, 1e-14);
    }

    #[test]
    fn interior_stiffness_equals_full() {
        for n in [4usize, 16] {
            let b = basis(n);
            let full = assemble_stiffness_1d(&b);
            let interior = assemble_stiffness_1d_interior(&b);
            let max_diff = full
                .diag
                .iter()
                .zip(&interior.diag)
                .chain(full.sub.iter().zip(&interior.sub))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert_eq!(max_diff, 0.0);
        }
    }

    #[test]
    fn interior_stiffness_matches_quadrature_oracle() {
        let b = basis(8);
        let k = assemble_stiffness_1d_interior(&b);
        let oracle = quad_oracle(&b, true, 1, 7);
        assert_tri_eq(&k, &oracle, 1e-14);
    }

    #[test]
    fn thomas_solves_spd_system() {
        let b = basis(16);
        let mass = assemble_mass_1d(&b);
        let x_true: Vec<f64> = (0..b.len()).map(|i| (i as f64 * 0.37).sin()).collect();
        let rhs = mass.apply(&x_true);
        let x = mass.solve(&rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}
