use std::sync::Arc;

use num_complex::Complex64;

use super::grid::SpectralGrid;
use crate::error::{Error, Result};

/// Real samples of a function on a [`SpectralGrid`].
#[derive(Clone, Debug)]
pub struct Field {
    grid: Arc<SpectralGrid>,
    values: Vec<f64>,
}

/// Fourier coefficients `û(ξ_k) = dx · Σ_j u_j e^{-iξ_k x_j}` in FFT order.
///
/// With this normalization `û(0) = ∫u dx` and `‖u‖₂² = Σ|û_k|² / (2L)`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    grid: Arc<SpectralGrid>,
    coeffs: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        let n = grid.n();
        Self {
            grid,
            values: vec![0.0; n],
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Arc<SpectralGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.xs().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub(crate) fn from_raw(grid: Arc<SpectralGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self::from_raw(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn forward(&self) -> Spectrum {
        forward(self)
    }

    /// `∫ u dx` by the rectangle rule (spectrally accurate for periodic data).
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.dx()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.dx())
    }
}

impl Spectrum {
    pub fn new(grid: Arc<SpectralGrid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        let n = grid.n();
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub(crate) fn from_raw(grid: Arc<SpectralGrid>, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.n());
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of the signed mode `k`.
    pub fn mode(&self, k: i64) -> Complex64 {
        self.coeffs[self.grid.mode_index(k)]
    }

    /// `û(0)`, which equals `∫u dx`.
    pub fn mass(&self) -> f64 {
        self.coeffs[0].re
    }

    /// `Σ|û_k|² / (2L)`, the discrete Parseval form of `‖u‖₂²`.
    pub fn parseval_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / (2.0 * self.grid.half_length())
    }

    pub fn l2_norm(&self) -> f64 {
        self.parseval_sq().sqrt()
    }

    /// Largest deviation from `û(-ξ) = conj(û(ξ))` over the paired modes, plus
    /// the imaginary parts of the self-conjugate modes.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = self.coeffs[0].im.abs().max(self.coeffs[n / 2].im.abs());
        for k in 1..n / 2 {
            let d = (self.coeffs[k] - self.coeffs[n - k].conj()).norm();
            worst = worst.max(d);
        }
        worst
    }

    pub fn inverse(&self) -> Field {
        inverse(self)
    }

    /// Inverse transform keeping the imaginary part, for realness checks.
    pub fn inverse_complex(&self) -> Vec<Complex64> {
        inverse_raw(self)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_raw(
            self.grid.clone(),
            self.coeffs.iter().map(|c| c * factor).collect(),
        )
    }

    pub fn add(&self, other: &Spectrum) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self::from_raw(
            self.grid.clone(),
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }
}

/// Continuum-matching forward transform.
///
/// Since `x_j = -L + j dx`, the phase `e^{-iξ_k x_j}` factors as
/// `(-1)^k e^{-2πi jk/n}`.
pub fn forward(field: &Field) -> Spectrum {
    let grid = &field.grid;
    let dx = grid.dx();
    let mut buf: Vec<Complex64> = field
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    grid.fft_forward(&mut buf);
    for (idx, c) in buf.iter_mut().enumerate() {
        let sign = if grid.signed_mode(idx) % 2 == 0 { dx } else { -dx };
        *c *= sign;
    }
    Spectrum::from_raw(grid.clone(), buf)
}

fn inverse_raw(spec: &Spectrum) -> Vec<Complex64> {
    let grid = &spec.grid;
    let scale = 1.0 / (2.0 * grid.half_length());
    let mut buf: Vec<Complex64> = spec
        .coeffs
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            if grid.signed_mode(idx) % 2 == 0 {
                c * scale
            } else {
                -c * scale
            }
        })
        .collect();
    grid.fft_inverse(&mut buf);
    buf
}

/// Inverse of [`forward`]; the imaginary part is discarded.
pub fn inverse(spec: &Spectrum) -> Field {
    let values = inverse_raw(spec).into_iter().map(|c| c.re).collect();
    Field::from_raw(spec.grid.clone(), values)
}
