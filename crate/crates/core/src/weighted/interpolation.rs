use super::norms::weighted_norm;
use super::weights::japanese;
use crate::error::{Error, Result};
use crate::spectral::{apply_to_field, Field, MultiplierKind};

/// `‖J^{θs}(⟨x⟩^{(1-θ)b} f)‖₂ / (‖⟨x⟩^b f‖₂^{1-θ} ‖J^s f‖₂^θ)`.
pub fn interpolation_ratio(f: &Field, s: f64, b: f64, theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(crate::error::invalid("theta", format!("must lie in [0, 1], got {theta}")));
    }
    let grid = f.grid();
    let weighted = Field::new(
        grid.clone(),
        grid.xs()
            .iter()
            .zip(f.values())
            .map(|(&x, &v)| japanese(x).powf((1.0 - theta) * b) * v)
            .collect(),
    )?;
    let lhs = apply_to_field(&weighted, MultiplierKind::Bessel(theta * s))?.l2_norm();
    let a = weighted_norm(f, b);
    let j = apply_to_field(f, MultiplierKind::Bessel(s))?.l2_norm();
    let rhs = a.powf(1.0 - theta) * j.powf(theta);
    if rhs == 0.0 {
        return Err(Error::DegenerateRatio { numerator: lhs });
    }
    Ok(lhs / rhs)
}
