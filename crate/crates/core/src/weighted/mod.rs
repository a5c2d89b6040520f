//! Weights, weighted norms, and the Stein fractional derivative.
//!
//! Pointwise Stein derivatives of compactly supported symbols are computed by
//! tanh–sinh quadrature split at every kink and at the singular point; the
//! grid version for sampled fields is a direct O(n²) sum.

mod asymptotics;
mod cutoff;
mod interpolation;
mod norms;
pub mod quadrature;
mod stein;
mod weights;

pub use asymptotics::{
    bbm_symbol_stein_bound, l2_dichotomy, log_probes, negative_power_probe, stein_asymptotics,
    stein_asymptotics_with, stein_curve, L2Dichotomy, NegativePowerReport, SlopeFit,
    SteinAsymptotics, SymbolBoundReport, ETA_MIN, LARGE_WINDOW, MIN_R_SQUARED, PROBES_PER_DECADE,
    SMALL_WINDOW,
};
pub use cutoff::CutoffSpec;
pub use interpolation::interpolation_ratio;
pub use norms::{tail_fraction, weighted_norm};
pub use stein::{
    stein_derivative, stein_pointwise, stein_pointwise_sq, CompactFunction, SteinQuadrature,
};
pub use weights::{japanese, weight_values, TruncatedWeight, WeightMode, WeightSpec};
