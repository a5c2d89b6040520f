use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::fit_log_log;
use crate::spectral::Field;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// `p` in `Ψ ~ |x|^{-p}`.
    pub exponent: f64,
    pub window: (f64, f64),
    pub r_squared: f64,
    pub points: usize,
}

/// Default window `(0.15L, 0.6L)`.
pub fn default_tail_window(half_length: f64) -> (f64, f64) {
    (0.15 * half_length, 0.6 * half_length)
}

/// Least-squares slope of `ln Ψ` against `ln x` over grid points with
/// `x ∈ [lo, hi]`; `p = -slope`.
pub fn fit_tail_exponent(profile: &Field, window: (f64, f64)) -> Result<TailFit> {
    let (lo, hi) = window;
    let l = profile.grid().half_length();
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidWindow {
            lo,
            hi,
            reason: "need 0 < lo < hi".into(),
        });
    }
    if hi > 0.7 * l {
        return Err(Error::InvalidWindow {
            lo,
            hi,
            reason: format!("upper edge exceeds 0.7L = {}", 0.7 * l),
        });
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (&x, &v) in profile.grid().xs().iter().zip(profile.values()) {
        if x >= lo && x <= hi {
            if !(v > 0.0) {
                return Err(Error::NonPositiveSample { x, value: v });
            }
            xs.push(x);
            ys.push(v);
        }
    }
    let fit = fit_log_log(&xs, &ys)?;
    Ok(TailFit {
        exponent: -fit.slope,
        window,
        r_squared: fit.r_squared,
        points: fit.points,
    })
}
