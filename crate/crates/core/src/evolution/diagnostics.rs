use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::{Multiplier, MultiplierKind, Spectrum};
use crate::weighted::weighted_norm;

/// Energy `∫ (D^{α/2}u)² + u² dx`, evaluated spectrally.
pub fn energy(spec: &Spectrum, alpha: f64) -> f64 {
    let grid = spec.grid();
    spec.coeffs()
        .iter()
        .zip(grid.xis())
        .map(|(c, xi)| (1.0 + xi.abs().powf(alpha)) * c.norm_sqr())
        .sum::<f64>()
        / (2.0 * grid.half_length())
}

/// Hamiltonian `½∫ u² + (2/(k+1)) u^{k+1} dx`; for k = 2 the cubic weight is 2/3.
pub fn hamiltonian(spec: &Spectrum, power: u32) -> f64 {
    let u = spec.inverse();
    let c = 2.0 / (power as f64 + 1.0);
    let dx = u.grid().dx();
    0.5 * u
        .values()
        .iter()
        .map(|&v| v * v + c * v.powi(power as i32 + 1))
        .sum::<f64>()
        * dx
}

/// Time series recorded along a trajectory.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DiagnosticsSeries {
    pub alpha: f64,
    pub power: u32,
    pub dealias_fraction: f64,
    pub times: Vec<f64>,
    /// `û(0,t) = ∫u dx`.
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    pub hamiltonian: Vec<f64>,
    /// `‖u‖₂²`.
    pub l2_sq: Vec<f64>,
    pub sup: Vec<f64>,
    /// `∫ u^k dx`.
    pub power_integral: Vec<f64>,
    /// `2⟨u, Au + A(u^k)⟩`, the instantaneous rate of `‖u‖₂²`.
    pub l2_rate: Vec<f64>,
    pub weight_exponents: Vec<f64>,
    /// `weighted[i][j] = ‖⟨x⟩^{r_i} u(t_j)‖₂`.
    pub weighted: Vec<Vec<f64>>,
}

impl DiagnosticsSeries {
    pub fn new(alpha: f64, power: u32, dealias_fraction: f64, weight_exponents: Vec<f64>) -> Self {
        let weighted = vec![Vec::new(); weight_exponents.len()];
        Self {
            alpha,
            power,
            dealias_fraction,
            weight_exponents,
            weighted,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends a record; `nonlinear` selects whether `A(u^k)` enters the L² rate.
    pub fn record(&mut self, t: f64, spec: &Spectrum, nonlinear: bool) -> Result<()> {
        let u = spec.inverse();
        let grid = spec.grid();
        let k = self.power as i32;
        let a = Multiplier::new(MultiplierKind::OpA(self.alpha), grid)?;
        let mut drive = a.apply(spec)?;
        if nonlinear {
            let mut nl = a.apply(&u.map(|v| v.powi(k)).forward())?;
            let cut = self.dealias_fraction * grid.xi_max() * (1.0 + 1e-12);
            for (c, xi) in nl.coeffs_mut().iter_mut().zip(grid.xis()) {
                if xi.abs() > cut {
                    *c = num_complex::Complex64::new(0.0, 0.0);
                }
            }
            drive = drive.add(&nl)?;
        }
        let rate = 2.0 * u.inner(&drive.inverse())?;

        self.times.push(t);
        self.mass.push(spec.mass());
        self.energy.push(energy(spec, self.alpha));
        self.hamiltonian.push(hamiltonian(spec, self.power));
        self.l2_sq.push(u.l2_norm().powi(2));
        self.sup.push(u.sup_norm());
        self.power_integral
            .push(u.values().iter().map(|v| v.powi(k)).sum::<f64>() * grid.dx());
        self.l2_rate.push(rate);
        for (r, series) in self.weight_exponents.iter().zip(self.weighted.iter_mut()) {
            series.push(weighted_norm(&u, *r));
        }
        Ok(())
    }

    /// `max_t |q(t) - q(0)|` for a recorded quantity.
    pub fn max_drift(series: &[f64]) -> f64 {
        match series.first() {
            Some(&q0) => series.iter().fold(0.0, |m, q| m.max((q - q0).abs())),
            None => 0.0,
        }
    }
}
