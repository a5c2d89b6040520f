//! Solitary waves: Petviashvili profiles of `Ψ + D^αΨ - ½Ψ² = 0`, their
//! rescaling to travelling waves `Q_c`, and power-law tail fits.

mod petviashvili;
mod scaling;
mod tail;

pub use petviashvili::{
    ground_state_residual, petviashvili_solve, GroundState, GroundStateSummary,
    PetviashviliOptions, TAIL_EXTENSION,
};
pub use scaling::{
    interpolate, qc_residual, scale_to_qc, scale_to_qc_on, solve_qc, speed_scale,
    translated_shape_error, ShapeError,
};
pub use tail::{default_tail_window, fit_tail_exponent, TailFit};
