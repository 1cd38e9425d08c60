//! The modified piecewise-linear space on a uniform partition of (0, 1).
//!
//! The first and last basis functions are constant on the first and last
//! subinterval, so every member of the space has vanishing one-sided
//! derivatives at both endpoints. This is the 1D building block for the
//! tensor-product spaces in [`crate::tensor`].

mod basis;
mod mesh;
mod project;
mod tri;

pub use basis::{interpolate_fn, interpolate_nodal, LocalShape, Modified1DBasis};
pub use mesh::Mesh1D;
pub use project::l2_projection;
pub use tri::{
    assemble_mass_1d, assemble_mass_1d_interior, assemble_stiffness_1d,
    assemble_stiffness_1d_interior, Tri1D, TriKind,
};
