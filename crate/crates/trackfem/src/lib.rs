//! Matrix-free tensor-product finite elements for an elliptic optimal
//! control problem with boundary value tracking on the unit cube.
//!
//! The state equation is a Neumann problem for `-Laplace y + y = u`; with
//! energy regularization the optimal state solves a boundary-tracking
//! system whose discrete form is `[M~ + rho (K~ + K)] y = ybar` on a
//! tensor-product space of piecewise multilinears with vanishing normal
//! derivatives. This crate provides:
//!
//! - the modified 1D space with flat end intervals and its Gram matrices
//!   ([`space1d`]),
//! - Kronecker-sum operators, the boundary mass, the interior/near-boundary
//!   splitting and tensor L2 projection ([`tensor`]),
//! - CG/PCG, the boundary Schur complement with an exact
//!   fast-diagonalization interior solve, a lumped-boundary-mass
//!   preconditioner, geometric multigrid and dense oracles ([`solver`]),
//! - targets, right-hand sides, single solves, convergence studies and
//!   regularization sweeps ([`ocp`]),
//! - numerical verification of the interpolation/projection estimates the
//!   discretization rests on ([`verify`]),
//! - a small CLI (`trackfem`) exposing solve / study / rho-sweep /
//!   verify-appendix ([`cli`]).
//!
//! See the crate examples for runnable entry points per capability.

pub mod cli;
pub mod dense;
pub mod error;
pub mod linop;
pub mod ocp;
pub mod quadrature;
pub mod solver;
pub mod space1d;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use linop::LinOp;
