//! Non-conservative nonlocal regularisation of scalar conservation laws.
//!
//! The crate solves `u_t + (η_ε ∗ u) u_x = 0` and its general-flux, two-dimensional and
//! isentropic-Euler relatives, provides local entropy reference solvers (exact Riemann,
//! Lax–Oleinik, Godunov, front tracking), and turns the structural properties of the nonlocal
//! equation into executable diagnostics.

pub mod diagnostics;
pub mod error;
pub mod euler;
pub mod expr;
pub mod flux;
pub mod funcspace;
pub mod kernel;
pub mod local;
pub mod multidim;
pub mod nonlocal;
pub mod parallel;
pub mod scenario;
pub mod selftest;

pub use error::{Error, Result};

/// Crate version, written into the header of every result file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
