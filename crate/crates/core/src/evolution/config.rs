use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Parameters of a single fBBM run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    /// Dispersion order α ∈ (0, 2].
    pub alpha: f64,
    /// Nonlinearity power k ≥ 2; k = 2 is the quadratic fBBM.
    pub power: u32,
    pub dt: f64,
    pub final_time: f64,
    pub n: usize,
    pub half_length: f64,
    /// Fraction of `ξ_max` kept when forming `u^k`; `None` uses `2/(k+1)`.
    pub dealias_fraction: Option<f64>,
    /// Steps between diagnostic records.
    pub record_every: usize,
    /// Switch off `∂_x(u^k)` to run the free group.
    pub nonlinear: bool,
    /// Keep field snapshots at record points.
    pub record_fields: bool,
    /// Exponents `r` of the weighted norms `‖⟨x⟩^r u‖₂` to record.
    pub weight_exponents: Vec<f64>,
    /// Abort when `‖u‖_∞` exceeds this multiple of its initial value.
    pub blowup_factor: f64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            power: 2,
            dt: 5e-3,
            final_time: 10.0,
            n: 4096,
            half_length: 100.0,
            dealias_fraction: None,
            record_every: 20,
            nonlinear: true,
            record_fields: true,
            weight_exponents: Vec::new(),
            blowup_factor: 1e6,
        }
    }
}

impl EvolveConfig {
    pub fn dealias(&self) -> f64 {
        self.dealias_fraction
            .unwrap_or(2.0 / (self.power as f64 + 1.0))
    }

    /// Number of steps of size `dt` covering `[0, T]`.
    pub fn steps(&self) -> usize {
        (self.final_time / self.dt).round() as usize
    }

    /// Smallest half-length keeping `sup|a'|·T ≤ L/2`; `sup|a'| = 1`, attained at ξ = 0.
    pub fn wrap_safe_half_length(final_time: f64) -> f64 {
        2.0 * final_time
    }

    /// Collects every violated precondition.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            out.push(format!("alpha must lie in (0, 2], got {}", self.alpha));
        }
        if self.power < 2 {
            out.push(format!("k must be at least 2, got {}", self.power));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            out.push("dt must be positive".to_string());
        }
        if !(self.final_time >= 0.0) || !self.final_time.is_finite() {
            out.push("T must be nonnegative".to_string());
        }
        if self.dt > 0.0 && self.final_time >= 0.0 {
            let steps = self.final_time / self.dt;
            if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
                out.push(format!(
                    "T = {} is not an integer multiple of dt = {}",
                    self.final_time, self.dt
                ));
            }
        }
        if self.n < 16 || !self.n.is_power_of_two() {
            out.push(format!("n must be a power of two >= 16, got {}", self.n));
        }
        if !(self.half_length > 0.0) {
            out.push("L must be positive".to_string());
        }
        if let Some(f) = self.dealias_fraction {
            if !(f > 0.0 && f <= 1.0) {
                out.push(format!("dealias_fraction must lie in (0, 1], got {f}"));
            }
        }
        if self.record_every == 0 {
            out.push("record_every must be at least 1".to_string());
        }
        if !(self.blowup_factor > 1.0) {
            out.push("blowup_factor must exceed 1".to_string());
        }
        if self.weight_exponents.iter().any(|r| !(*r >= 0.0)) {
            out.push("weight exponents must be nonnegative".to_string());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(invalid("evolve", v.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_dealias_follows_power() {
        let mut c = EvolveConfig::default();
        assert!((c.dealias() - 2.0 / 3.0).abs() < 1e-15);
        c.power = 3;
        assert!((c.dealias() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn negative_dt_is_reported() {
        let c = EvolveConfig {
            dt: -0.01,
            ..Default::default()
        };
        assert!(c.violations().iter().any(|v| v == "dt must be positive"));
    }

    #[test]
    fn all_violations_are_listed() {
        let c = EvolveConfig {
            alpha: 3.0,
            power: 1,
            n: 100,
            ..Default::default()
        };
        assert_eq!(c.violations().len(), 3);
    }
}
