use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L, L)` together with its wavenumber lattice.
///
/// Wavenumbers are stored in FFT order: index `k` for `k < n/2` holds
/// `ξ = πk/L`, index `k >= n/2` holds `ξ = π(k - n)/L`. Index `n/2` is the
/// unpaired mode `-n/2`.
#[derive(Clone)]
pub struct SpectralGrid {
    n: usize,
    half_length: f64,
    dx: f64,
    xs: Vec<f64>,
    xis: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SpectralGrid {
    pub fn new(n: usize, half_length: f64) -> Result<Arc<Self>> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidPointCount(n));
        }
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(Error::InvalidHalfLength(half_length));
        }
        let dx = 2.0 * half_length / n as f64;
        let xs = (0..n).map(|j| -half_length + j as f64 * dx).collect();
        let xis = (0..n)
            .map(|k| PI * signed_mode(k, n) as f64 / half_length)
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Arc::new(Self {
            n,
            half_length,
            dx,
            xs,
            xis,
            forward,
            inverse,
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Half-length `L` of the box `[-L, L)`.
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Lattice spacing `π/L` in wavenumber space.
    pub fn dxi(&self) -> f64 {
        PI / self.half_length
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Wavenumbers in FFT order.
    pub fn xis(&self) -> &[f64] {
        &self.xis
    }

    /// Magnitude of the most negative (unpaired) wavenumber, `πn/(2L)`.
    pub fn xi_max(&self) -> f64 {
        PI * (self.n / 2) as f64 / self.half_length
    }

    /// Storage index of the unpaired mode `-n/2`.
    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Storage index of the signed mode `k`, which must lie in `[-n/2, n/2)`.
    pub fn mode_index(&self, k: i64) -> usize {
        let n = self.n as i64;
        assert!(-n / 2 <= k && k < n / 2, "mode {k} outside lattice");
        k.rem_euclid(n) as usize
    }

    /// Signed mode number stored at index `idx`.
    pub fn signed_mode(&self, idx: usize) -> i64 {
        signed_mode(idx, self.n)
    }

    pub fn same_as(&self, other: &SpectralGrid) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }

    pub(crate) fn ensure_same(&self, other: &SpectralGrid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected_n: self.n,
                expected_l: self.half_length,
                got_n: other.n,
                got_l: other.half_length,
            })
        }
    }

    pub(crate) fn fft_forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    pub(crate) fn fft_inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    /// Grid with the same spacing and `factor` times as many points.
    pub fn extended(&self, factor: usize) -> Result<Arc<Self>> {
        if factor == 0 || !factor.is_power_of_two() {
            return Err(crate::error::invalid(
                "extension",
                format!("factor must be a power of two, got {factor}"),
            ));
        }
        Self::new(self.n * factor, self.half_length * factor as f64)
    }
}

fn signed_mode(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("half_length", &self.half_length)
            .field("dx", &self.dx)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_box_gives_integer_wavenumbers() {
        let g = SpectralGrid::new(16, PI).unwrap();
        assert!((g.dx() - 2.0 * PI / 16.0).abs() < 1e-15);
        let mut ks: Vec<f64> = g.xis().to_vec();
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (i, k) in ks.iter().enumerate() {
            assert!((k - (i as f64 - 8.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn wavenumber_step_is_pi_over_l() {
        let g = SpectralGrid::new(16, 4.0).unwrap();
        assert!((g.xis()[1] - PI / 4.0).abs() < 1e-15);
        assert!((g.xis()[g.nyquist_index()] + 2.0 * PI).abs() < 1e-12);
        assert!((g.dxi() - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn sample_points_are_uniform() {
        let g = SpectralGrid::new(64, 3.0).unwrap();
        assert_eq!(g.xs().len(), 64);
        assert_eq!(g.xs()[0], -3.0);
        for w in g.xs().windows(2) {
            assert!((w[1] - w[0] - g.dx()).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(
            SpectralGrid::new(12, 1.0).unwrap_err(),
            Error::InvalidPointCount(12)
        );
        assert_eq!(
            SpectralGrid::new(8, 4.0).unwrap_err(),
            Error::InvalidPointCount(8)
        );
        assert!(matches!(
            SpectralGrid::new(32, 0.0),
            Err(Error::InvalidHalfLength(_))
        ));
        assert!(matches!(
            SpectralGrid::new(32, -2.0),
            Err(Error::InvalidHalfLength(_))
        ));
    }

    #[test]
    fn lattice_contains_zero_and_pairs() {
        let g = SpectralGrid::new(32, 5.0).unwrap();
        assert_eq!(g.xis()[0], 0.0);
        for k in 1..16i64 {
            let p = g.xis()[g.mode_index(k)];
            let m = g.xis()[g.mode_index(-k)];
            assert_eq!(p, -m);
        }
    }
}
