use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fit::fit_log_log;
use crate::spectral::{group_propagate, Field};
use crate::weighted::{tail_fraction, weighted_norm};

/// L² fraction beyond `0.8L` above which the torus is considered contaminated.
pub const TAIL_LIMIT: f64 = 1e-8;
pub const TAIL_EDGE: f64 = 0.8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthReport {
    pub alpha: f64,
    pub r: f64,
    pub times: Vec<f64>,
    /// `‖⟨x⟩^r e^{tA}φ‖₂ / ‖⟨x⟩^r φ‖₂`.
    pub norm_ratios: Vec<f64>,
    /// Fitted exponent of `t` in the weighted norm.
    pub slope: f64,
    pub r_squared: f64,
    /// `⌈r⌉`.
    pub ceiling: f64,
    pub max_tail_fraction: f64,
}

/// Fits `log ‖⟨x⟩^r e^{tA}φ‖₂` against `log t`.
///
/// Aborts with [`Error::BoundaryContamination`] when more than
/// [`TAIL_LIMIT`] of the L² mass has reached `|x| > 0.8L` at any probe time.
pub fn group_weighted_growth(phi: &Field, alpha: f64, r: f64, times: &[f64]) -> Result<GrowthReport> {
    if !(r >= 0.0 && r < 1.5 + alpha) {
        return Err(invalid("r", format!("must lie in [0, 3/2 + alpha), got {r}")));
    }
    if times.len() < 2 || times.iter().any(|&t| !(t > 0.0)) {
        return Err(invalid("times", "need at least two positive times"));
    }
    let base = weighted_norm(phi, r);
    if base == 0.0 {
        return Err(Error::DegenerateRatio { numerator: 0.0 });
    }
    let spec = phi.forward();
    let samples: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&t| -> Result<(f64, f64)> {
            let u = group_propagate(&spec, t, alpha)?.inverse();
            Ok((weighted_norm(&u, r) / base, tail_fraction(&u, 0.0, TAIL_EDGE)))
        })
        .collect::<Result<_>>()?;
    let max_tail_fraction = samples.iter().fold(0.0f64, |m, s| m.max(s.1));
    for (&t, s) in times.iter().zip(&samples) {
        if s.1 > TAIL_LIMIT {
            return Err(Error::BoundaryContamination {
                time: t,
                fraction: s.1,
            });
        }
    }
    let norm_ratios: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let fit = fit_log_log(times, &norm_ratios)?;
    Ok(GrowthReport {
        alpha,
        r,
        times: times.to_vec(),
        norm_ratios,
        slope: fit.slope,
        r_squared: fit.r_squared,
        ceiling: r.ceil(),
        max_tail_fraction,
    })
}
