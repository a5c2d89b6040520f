use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{Field, SpectralGrid, Spectrum};

/// `Σ amp·cos(freq·x + phase)`, a band-limited function of the line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    pub offset: f64,
    /// `(freq, amp, phase)` triples.
    pub terms: Vec<(f64, f64, f64)>,
}

impl TrigSeries {
    pub fn eval(&self, x: f64) -> f64 {
        self.offset
            + self
                .terms
                .iter()
                .map(|&(k, a, p)| a * (k * x + p).cos())
                .sum::<f64>()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        -self
            .terms
            .iter()
            .map(|&(k, a, p)| a * k * (k * x + p).sin())
            .sum::<f64>()
    }

    /// Samples on `grid`; series whose frequencies all sit on the grid's
    /// lattice below the unpaired mode are synthesized exactly by one
    /// inverse transform, others are summed pointwise.
    pub fn sample(&self, grid: &Arc<SpectralGrid>) -> Result<Field> {
        if let Some(spec) = self.lattice_spectrum(grid) {
            return Ok(spec.inverse());
        }
        let vals = grid.xs().par_iter().map(|&x| self.eval(x)).collect();
        Field::new(grid.clone(), vals)
    }

    fn lattice_spectrum(&self, grid: &Arc<SpectralGrid>) -> Option<Spectrum> {
        let l = grid.half_length();
        let base = PI / l;
        let nyq = grid.nyquist_index() as i64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.n()];
        coeffs[0] += 2.0 * l * self.offset;
        for &(freq, amp, phase) in &self.terms {
            let k = freq / base;
            let kr = k.round();
            if (k - kr).abs() > 1e-9 || kr < 1.0 || kr as i64 >= nyq {
                return None;
            }
            let kr = kr as i64;
            // ∫ cos(ξx + p) e^{-iξ_k x} dx = L e^{±ip} at k = ±m
            coeffs[grid.mode_index(kr)] += Complex64::from_polar(l * amp, phase);
            coeffs[grid.mode_index(-kr)] += Complex64::from_polar(l * amp, -phase);
        }
        Some(Spectrum::from_raw(grid.clone(), coeffs))
    }

    pub fn max_frequency(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.0.abs()))
    }
}

/// Smooth plateau `½[tanh((x+a)/w) - tanh((x-a)/w)]` and its derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub half_width: f64,
    pub edge: f64,
    /// Constant plateaus (`edge = ∞`) are the identity weight 1.
    pub constant: Option<f64>,
}

impl Plateau {
    pub fn constant(value: f64) -> Self {
        Self {
            half_width: f64::INFINITY,
            edge: 1.0,
            constant: Some(value),
        }
    }

    /// `m`-th derivative, `m ≤ 2`.
    pub fn derivative(&self, x: f64, m: u32) -> f64 {
        if let Some(c) = self.constant {
            return if m == 0 { c } else { 0.0 };
        }
        let w = self.edge;
        let part = |s: f64| -> f64 {
            let t = s.tanh();
            let sech2 = 1.0 - t * t;
            match m {
                0 => t,
                1 => sech2 / w,
                2 => -2.0 * sech2 * t / (w * w),
                _ => f64::NAN,
            }
        };
        0.5 * (part((x + self.half_width) / w) - part((x - self.half_width) / w))
    }

    pub fn sample(&self, grid: &Arc<SpectralGrid>) -> Result<Field> {
        Field::from_fn(grid.clone(), |x| self.derivative(x, 0))
    }
}

fn dense_sup(half_length: f64, f: impl Fn(f64) -> f64 + Sync) -> f64 {
    const SAMPLES: usize = 1 << 17;
    (0..=SAMPLES)
        .into_par_iter()
        .map(|i| f(-half_length + 2.0 * half_length * i as f64 / SAMPLES as f64).abs())
        .reduce(|| 0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub size: usize,
    /// Modes per random field; frequencies are `πk/L` for `k = 1..=modes`.
    pub modes: usize,
    pub half_length: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            size: 50,
            modes: 256,
            half_length: 32.0 * PI,
        }
    }
}

/// Seeded random fields, weights and plateaus with their recorded
/// derivative bounds. Everything is defined on the line and periodic on
/// `[-L, L)`, so the same corpus can be sampled at any resolution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TestCorpus {
    pub spec: CorpusSpec,
    pub fs: Vec<TrigSeries>,
    pub gs: Vec<TrigSeries>,
    /// `‖g'‖_∞` per weight.
    pub g_slope: Vec<f64>,
    pub psis: Vec<Plateau>,
    /// `‖ψ^{(m)}‖_∞` for `m = 0, 1, 2`, per plateau.
    pub psi_sup: Vec<[f64; 3]>,
}

impl TestCorpus {
    pub fn generate(spec: CorpusSpec) -> Result<Self> {
        if spec.size == 0 || spec.modes == 0 {
            return Err(invalid("corpus", "size and modes must be positive"));
        }
        if !(spec.half_length > 0.0) {
            return Err(invalid("corpus", "half length must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let base = PI / spec.half_length;
        let mut fs = Vec::with_capacity(spec.size);
        let mut gs = Vec::with_capacity(spec.size);
        let mut psis = Vec::with_capacity(spec.size);
        for _ in 0..spec.size {
            let terms = (1..=spec.modes)
                .map(|k| {
                    (
                        base * k as f64,
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(0.0..2.0 * PI),
                    )
                })
                .collect();
            fs.push(TrigSeries {
                offset: rng.gen_range(-1.0..1.0),
                terms,
            });
            let terms = (1..=4)
                .map(|j| {
                    let k = base * j as f64;
                    (k, rng.gen_range(-1.0..1.0) / (4.0 * k), rng.gen_range(0.0..2.0 * PI))
                })
                .collect();
            gs.push(TrigSeries {
                offset: rng.gen_range(-2.0..2.0),
                terms,
            });
            psis.push(Plateau {
                half_width: rng.gen_range(2.0..8.0),
                edge: rng.gen_range(0.5..2.0),
                constant: None,
            });
        }
        let l = spec.half_length;
        let g_slope = gs.iter().map(|g| dense_sup(l, |x| g.derivative(x))).collect();
        let psi_sup = psis
            .iter()
            .map(|p| {
                [
                    dense_sup(l, |x| p.derivative(x, 0)),
                    dense_sup(l, |x| p.derivative(x, 1)),
                    dense_sup(l, |x| p.derivative(x, 2)),
                ]
            })
            .collect();
        Ok(Self {
            spec,
            fs,
            gs,
            g_slope,
            psis,
            psi_sup,
        })
    }

    pub fn len(&self) -> usize {
        self.fs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fs.is_empty()
    }

    pub fn max_frequency(&self) -> f64 {
        self.fs.iter().fold(0.0, |m, f| m.max(f.max_frequency()))
    }

    /// Checks that `grid` matches the corpus box and keeps every field in the
    /// lower third of its spectrum.
    pub fn check_grid(&self, grid: &SpectralGrid) -> Result<()> {
        if (grid.half_length() - self.spec.half_length).abs() > 1e-12 * self.spec.half_length {
            return Err(invalid(
                "grid",
                format!(
                    "corpus lives on L = {}, grid has L = {}",
                    self.spec.half_length,
                    grid.half_length()
                ),
            ));
        }
        if self.max_frequency() > grid.xi_max() / 3.0 * (1.0 + 1e-12) {
            return Err(invalid(
                "n",
                format!(
                    "corpus frequencies reach {} but the lower third of the grid ends at {}",
                    self.max_frequency(),
                    grid.xi_max() / 3.0
                ),
            ));
        }
        Ok(())
    }
}
