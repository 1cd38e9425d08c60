//! The d-dimensional tensor-product space.

use crate::error::{Error, Result};
use crate::space1d::{Mesh1D, Modified1DBasis};

/// Tensor product of `d` copies of the modified 1D space on a shared
/// uniform mesh. Holds `m = n - 1` unknowns per direction, `m^d` in total.
#[derive(Debug, Clone)]
pub struct TensorSpace {
    d: usize,
    basis: Modified1DBasis,
}

impl TensorSpace {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidConfig(format!(
                "spatial dimension must be 1, 2 or 3, got {d}"
            )));
        }
        Ok(Self {
            d,
            basis: Modified1DBasis::new(Mesh1D::new(n)?),
        })
    }

    /// Space for refinement level `level >= 1`, with `n = 2^(level+1)`
    /// intervals per direction, i.e. `m = 2^(level+1) - 1` unknowns per
    /// direction.
    pub fn at_level(d: usize, level: usize) -> Result<Self> {
        if level == 0 || level > 24 {
            return Err(Error::InvalidConfig(format!("invalid level {level}")));
        }
        Self::new(d, 1 << (level + 1))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &Modified1DBasis {
        &self.basis
    }

    pub fn h(&self) -> f64 {
        self.basis.mesh().h()
    }

    /// Unknowns per direction.
    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn total_dofs(&self) -> usize {
        self.m().pow(self.d as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_sizes() {
        let s = TensorSpace::at_level(3, 1).unwrap();
        assert_eq!(s.m(), 3);
        assert_eq!(s.total_dofs(), 27);
        assert_eq!(s.h(), 0.25);

        let s = TensorSpace::at_level(3, 5).unwrap();
        assert_eq!(s.m(), 63);
        assert_eq!(s.total_dofs(), 250_047);

        // the dof-count formula at level 7
        let m7 = (1usize << 8) - 1;
        assert_eq!(m7.pow(3), 16_581_375);
    }

    #[test]
    fn rejects_bad_dimension() {
        assert!(TensorSpace::new(0, 8).is_err());
        assert!(TensorSpace::new(4, 8).is_err());
    }
}
