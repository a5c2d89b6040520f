//! Time integration of fBBM and its power-k generalization
//!
//! ```text
//! u_t = A u + A(u^k),    A = -∂_x (1 + D^α)^{-1}
//! ```
//!
//! by integrating-factor RK4 in spectrum space, with `u^k` dealiased before
//! `A` is applied.

mod config;
mod diagnostics;
mod stepper;
mod trajectory;

pub use config::EvolveConfig;
pub use diagnostics::{energy, hamiltonian, DiagnosticsSeries};
pub use stepper::{rhs_nonlinear, step_ifrk4, IfRk4};
pub use trajectory::{run, Termination, Trajectory};
