//! Periodic grid, the continuum-matching transform, and Fourier multipliers.
//!
//! The box `[-L, L)` stands in for the real line. Transforms use
//! `û(ξ) = dx Σ u_j e^{-iξ x_j}` so that discrete sums approximate the
//! corresponding integrals directly.

mod field;
mod grid;
mod multiplier;
mod symbol;

pub use field::{forward, inverse, Field, Spectrum};
pub use grid::SpectralGrid;
pub use multiplier::{
    apply_multiplier, apply_to_field, group_propagate, Multiplier, MultiplierKind,
};
pub use symbol::{group_velocity, symbol_a, symbol_d2f, symbol_df, symbol_f};

/// Alias for [`SpectralGrid::new`].
pub fn make_grid(
    n: usize,
    half_length: f64,
) -> crate::error::Result<std::sync::Arc<SpectralGrid>> {
    SpectralGrid::new(n, half_length)
}
