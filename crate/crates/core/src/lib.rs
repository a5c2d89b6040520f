//! Numerical laboratory for the fractional Benjamin–Bona–Mahony equation
//!
//! ```text
//! ∂_t u + ∂_x u + D^α ∂_t u + ∂_x(u^k) = 0
//! ```
//!
//! on a periodic box standing in for the real line. The crate provides the
//! Fourier-multiplier calculus of the equation, an integrating-factor RK4
//! evolution, Petviashvili ground states with tail-exponent fits, weighted
//! norms and Stein-derivative quadrature, and randomized checks of the
//! commutator and weighted-growth estimates.

pub mod error;
pub mod estimates;
pub mod evolution;
pub mod fit;
pub mod ground_state;
pub mod spectral;
pub mod weighted;

pub use error::{Error, Result};
pub use spectral::{Field, MultiplierKind, SpectralGrid, Spectrum};
