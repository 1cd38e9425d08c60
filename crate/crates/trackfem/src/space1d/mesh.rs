//! Uniform partition of the unit interval.

use crate::error::{Error, Result};

/// Uniform mesh `0 = x_0 < x_1 < ... < x_n = 1` with spacing `h = 1/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    n: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Mesh1D {
    /// Builds a uniform mesh with `n` intervals. Requires `n >= 4` so the
    /// modified space contains at least one standard interior hat function.
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidMesh(n));
        }
        let h = 1.0 / n as f64;
        let nodes = (0..=n).map(|i| i as f64 * h).collect();
        Ok(Self { n, h, nodes })
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }
}
