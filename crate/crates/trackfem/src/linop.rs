//! Matrix-free linear operator abstraction used by every solver in the crate.

use crate::error::{Error, Result};

/// A symmetric linear operator acting on packed coefficient vectors.
///
/// Implementations never materialize the matrix; `apply_into` is the only
/// primitive the Krylov solvers need.
pub trait LinOp {
    /// Length of the vectors the operator acts on.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Computes `out = A v`. `out` is overwritten.
    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()>;

    /// Allocating convenience wrapper around [`LinOp::apply_into`].
    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Sum `a + weight * b` of two operators on the same space.
pub struct ScaledSum<'a, A: ?Sized, B: ?Sized> {
    pub a: &'a A,
    pub b: &'a B,
    pub weight: f64,
}

impl<A: LinOp + ?Sized, B: LinOp + ?Sized> LinOp for ScaledSum<'_, A, B> {
    fn len(&self) -> usize {
        self.a.len()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        self.a.apply_into(v, out)?;
        let bv = self.b.apply(v)?;
        for (o, b) in out.iter_mut().zip(&bv) {
            *o += self.weight * b;
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
