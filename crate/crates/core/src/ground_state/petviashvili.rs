use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tail::TailFit;
use crate::error::{invalid, Error, Result};
use crate::spectral::{Field, SpectralGrid};

/// Extension factor used when a profile is destined for a tail fit.
pub const TAIL_EXTENSION: usize = 128;

/// Stabilizer exponent `γ = p/(p-1)` for the quadratic nonlinearity.
const GAMMA: i32 = 2;

#[derive(Clone, Debug)]
pub struct PetviashviliOptions {
    /// Bound on the successive-iterate L∞ difference.
    pub tol: f64,
    pub max_iter: usize,
    /// Solve on a periodic box `extension` times larger (same spacing) and
    /// restrict to the requested grid. `1` solves on the grid itself.
    pub extension: usize,
    /// Even, positive starting profile on the requested grid; `3e^{-x²}` when absent.
    pub initial_guess: Option<Field>,
}

impl Default for PetviashviliOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 5000,
            extension: 1,
            initial_guess: None,
        }
    }
}

impl PetviashviliOptions {
    pub fn for_tail_fit() -> Self {
        Self {
            extension: TAIL_EXTENSION,
            ..Self::default()
        }
    }
}

/// Solution of `Ψ + D^αΨ - ½Ψ² = 0`.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub alpha: f64,
    pub profile: Field,
    /// `‖Ψ + D^αΨ - ½Ψ²‖_∞` on the solve box.
    pub residual_inf: f64,
    pub iterations: usize,
    /// Final stabilizer `M`; tends to 1 at the fixed point.
    pub stabilizer: f64,
    /// Last successive-iterate difference.
    pub last_update: f64,
    pub extension: usize,
    pub tail_fit: Option<TailFit>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroundStateSummary {
    pub alpha: f64,
    pub n: usize,
    pub half_length: f64,
    pub residual_inf: f64,
    pub iterations: usize,
    pub stabilizer: f64,
    pub extension: usize,
    pub tail_fit: Option<TailFit>,
}

impl GroundState {
    pub fn summary(&self) -> GroundStateSummary {
        let g = self.profile.grid();
        GroundStateSummary {
            alpha: self.alpha,
            n: g.n(),
            half_length: g.half_length(),
            residual_inf: self.residual_inf,
            iterations: self.iterations,
            stabilizer: self.stabilizer,
            extension: self.extension,
            tail_fit: self.tail_fit.clone(),
        }
    }

    /// Runs [`super::fit_tail_exponent`] and stores the result.
    pub fn with_tail_fit(mut self, window: (f64, f64)) -> Result<Self> {
        self.tail_fit = Some(super::tail::fit_tail_exponent(&self.profile, window)?);
        Ok(self)
    }
}

/// `x_j ↔ x_{n-j}` averaging; index 0 (`x = -L`) is its own mirror image.
fn symmetrize(v: &mut [f64]) {
    let n = v.len();
    for j in 1..n / 2 {
        let m = 0.5 * (v[j] + v[n - j]);
        v[j] = m;
        v[n - j] = m;
    }
}

fn embed(field: &Field, big: &Arc<SpectralGrid>) -> Vec<f64> {
    let n = field.grid().n();
    let offset = (big.n() - n) / 2;
    let mut out = vec![0.0; big.n()];
    out[offset..offset + n].copy_from_slice(field.values());
    out
}

fn restrict(values: &[f64], grid: &Arc<SpectralGrid>) -> Result<Field> {
    let n = grid.n();
    let offset = (values.len() - n) / 2;
    Field::new(grid.clone(), values[offset..offset + n].to_vec())
}

/// `‖Ψ + D^αΨ - ½Ψ²‖_∞`.
pub fn ground_state_residual(psi: &Field, alpha: f64) -> f64 {
    let grid = psi.grid();
    let spec = psi.forward();
    let lin: Vec<Complex64> = spec
        .coeffs()
        .iter()
        .zip(grid.xis())
        .map(|(c, xi)| c * (1.0 + xi.abs().powf(alpha)))
        .collect();
    let lin = crate::spectral::Spectrum::from_raw(grid.clone(), lin).inverse();
    lin.values()
        .iter()
        .zip(psi.values())
        .fold(0.0, |m, (l, p)| m.max((l - 0.5 * p * p).abs()))
}

/// Petviashvili iteration
///
/// ```text
/// Ψ ← M^γ (1+|ξ|^α)^{-1} (½Ψ²)^,   M = ⟨(1+|ξ|^α)Ψ̂, Ψ̂⟩ / ⟨(½Ψ²)^, Ψ̂⟩,   γ = 2
/// ```
///
/// with even symmetrization of every iterate.
pub fn petviashvili_solve(
    alpha: f64,
    grid: &Arc<SpectralGrid>,
    opts: &PetviashviliOptions,
) -> Result<GroundState> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(invalid("alpha", format!("must lie in (0, 2], got {alpha}")));
    }
    if !(opts.tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {}", opts.tol)));
    }
    if opts.max_iter == 0 {
        return Err(invalid("max_iter", "must be at least 1"));
    }
    let big = if opts.extension == 1 {
        grid.clone()
    } else {
        grid.extended(opts.extension)?
    };
    let mut psi = match &opts.initial_guess {
        Some(g) => {
            grid.ensure_same(g.grid())?;
            embed(g, &big)
        }
        None => big.xs().iter().map(|x| 3.0 * (-(x * x)).exp()).collect(),
    };
    symmetrize(&mut psi);
    let symbol: Vec<f64> = big.xis().iter().map(|xi| 1.0 + xi.abs().powf(alpha)).collect();
    let scale = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroCollapse("initial guess is identically zero".into()));
    }

    // Mirroring a real field conjugates its spectrum, so even symmetrization
    // of an iterate is the real part of its coefficients.
    let mut spec = Field::from_raw(big.clone(), psi.clone()).forward();
    let mut stabilizer = f64::NAN;
    let mut last_update = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let nl = Field::from_raw(big.clone(), psi.iter().map(|v| 0.5 * v * v).collect()).forward();
        let (mut num, mut den) = (0.0, 0.0);
        for ((p, q), l) in spec.coeffs().iter().zip(nl.coeffs()).zip(&symbol) {
            num += l * p.norm_sqr();
            den += (q * p.conj()).re;
        }
        stabilizer = num / den;
        if !stabilizer.is_finite() || stabilizer <= 0.0 {
            return Err(Error::ZeroCollapse(format!(
                "stabilizer degenerated to {stabilizer:e} at iteration {iterations}"
            )));
        }
        let factor = stabilizer.powi(GAMMA);
        let next_spec: Vec<Complex64> = nl
            .coeffs()
            .iter()
            .zip(&symbol)
            .map(|(q, l)| Complex64::new(q.re * factor / l, 0.0))
            .collect();
        let next_spec = crate::spectral::Spectrum::from_raw(big.clone(), next_spec);
        let next = next_spec.inverse().into_values();
        let peak = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(peak > 1e-300) || !peak.is_finite() {
            return Err(Error::ZeroCollapse(format!(
                "profile collapsed (sup {peak:e}) at iteration {iterations}"
            )));
        }
        last_update = next
            .iter()
            .zip(&psi)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        psi = next;
        spec = next_spec;
        if last_update <= opts.tol {
            break;
        }
    }
    if last_update > opts.tol {
        return Err(Error::NoConvergence {
            iterations,
            last_update,
        });
    }
    let full = Field::from_raw(big, psi);
    let residual_inf = ground_state_residual(&full, alpha);
    let profile = restrict(full.values(), grid)?;
    Ok(GroundState {
        alpha,
        profile,
        residual_inf,
        iterations,
        stabilizer,
        last_update,
        extension: opts.extension,
        tail_fit: None,
    })
}
