//! Entropy-solution reference solvers for the local conservation law.

mod front_tracking;
mod godunov;
mod lax_oleinik;
mod riemann;

pub use front_tracking::{default_delta, front_tracking_solve, FrontEvent, FrontTracking, PiecewiseConstant, WaveFront};
pub use godunov::{godunov_flux, godunov_solve, godunov_solve_with_stride};
pub use lax_oleinik::{lax_oleinik_at, lax_oleinik_solve};
pub use riemann::{burgers_riemann_exact, burgers_riemann_profile};
