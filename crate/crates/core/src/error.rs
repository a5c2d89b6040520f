use thiserror::Error;

/// Errors raised by the laboratory's numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 16")]
    InvalidPointCount(usize),
    #[error("box half-length must be positive and finite, got {0}")]
    InvalidHalfLength(f64),
    #[error("grid mismatch: expected n={expected_n}, L={expected_l}, got n={got_n}, L={got_l}")]
    GridMismatch {
        expected_n: usize,
        expected_l: f64,
        got_n: usize,
        got_l: f64,
    },
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("blow-up suspected at t={time}: {reason}")]
    BlowUp { time: f64, reason: String },
    #[error("Petviashvili iteration did not converge after {iterations} iterations (last update {last_update:e})")]
    NoConvergence { iterations: usize, last_update: f64 },
    #[error("iteration collapsed to the zero profile: {0}")]
    ZeroCollapse(String),
    #[error("nonpositive profile sample {value:e} at x={x} inside the fit window")]
    NonPositiveSample { x: f64, value: f64 },
    #[error("fit window ({lo}, {hi}) is invalid: {reason}")]
    InvalidWindow { lo: f64, hi: f64, reason: String },
    #[error("boundary contamination: tail mass fraction {fraction:e} beyond 0.8L at t={time}")]
    BoundaryContamination { time: f64, fraction: f64 },
    #[error("time {0} is not a recorded snapshot time")]
    TimeNotRecorded(f64),
    #[error("degenerate ratio: numerator {numerator:e} with zero normalizer")]
    DegenerateRatio { numerator: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
