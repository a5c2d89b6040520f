use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::{Field, SpectralGrid};

use super::config::EvolveConfig;
use super::diagnostics::DiagnosticsSeries;
use super::stepper::IfRk4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Termination {
    Completed,
    /// The run stopped early; the last record is the final healthy state.
    BlowUpSuspected { time: f64, reason: String },
}

/// Recorded output of [`run`].
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Snapshots at `times`; empty when field recording is disabled.
    pub fields: Vec<Field>,
    pub diagnostics: DiagnosticsSeries,
    pub termination: Termination,
    pub config: EvolveConfig,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// Index of the record at time `t` (to within a hundredth of a step).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let tol = 1e-2 * self.config.dt;
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= tol)
            .ok_or(Error::TimeNotRecorded(t))
    }

    pub fn last_field(&self) -> Option<&Field> {
        self.fields.last()
    }
}

/// Integrates fBBM from `phi` over `[0, T]`.
///
/// Records at step 0, every `record_every` steps, and at the final step. The
/// run stops early, flagged [`Termination::BlowUpSuspected`], when the state
/// becomes non-finite or `‖u‖_∞` exceeds `blowup_factor` times its initial
/// value.
pub fn run(cfg: &EvolveConfig, phi: &Field) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = phi.grid().clone();
    if grid.n() != cfg.n || grid.half_length() != cfg.half_length {
        return Err(invalid(
            "phi",
            format!(
                "initial field lives on n={}, L={} but the config asks for n={}, L={}",
                grid.n(),
                grid.half_length(),
                cfg.n,
                cfg.half_length
            ),
        ));
    }
    run_on(cfg, phi, grid)
}

fn run_on(cfg: &EvolveConfig, phi: &Field, grid: std::sync::Arc<SpectralGrid>) -> Result<Trajectory> {
    let stepper = IfRk4::new(grid, cfg)?;
    let steps = cfg.steps();
    let mut diagnostics = DiagnosticsSeries::new(
        cfg.alpha,
        cfg.power,
        cfg.dealias(),
        cfg.weight_exponents.clone(),
    );
    let mut times = Vec::new();
    let mut fields = Vec::new();
    let mut spec = phi.forward();
    let initial_sup = phi.sup_norm();
    let ceiling = cfg.blowup_factor * initial_sup;
    let mut termination = Termination::Completed;

    let mut record = |t: f64, spec: &crate::spectral::Spectrum| -> Result<()> {
        diagnostics.record(t, spec, cfg.nonlinear)?;
        times.push(t);
        if cfg.record_fields {
            fields.push(spec.inverse());
        }
        Ok(())
    };
    record(0.0, &spec)?;

    for step in 1..=steps {
        let t_prev = (step - 1) as f64 * cfg.dt;
        match stepper.advance(&spec) {
            Ok((next, sup)) => {
                if initial_sup > 0.0 && sup > ceiling {
                    termination = Termination::BlowUpSuspected {
                        time: t_prev,
                        reason: format!(
                            "sup norm {sup:e} exceeds {} x initial {initial_sup:e}",
                            cfg.blowup_factor
                        ),
                    };
                    break;
                }
                spec = next;
            }
            Err(Error::BlowUp { reason, .. }) => {
                termination = Termination::BlowUpSuspected {
                    time: t_prev,
                    reason,
                };
                break;
            }
            Err(e) => return Err(e),
        }
        if step % cfg.record_every == 0 || step == steps {
            let t = step as f64 * cfg.dt;
            let sup = spec.inverse().sup_norm();
            if !sup.is_finite() || (initial_sup > 0.0 && sup > ceiling) {
                termination = Termination::BlowUpSuspected {
                    time: t,
                    reason: format!("sup norm {sup:e} at record point"),
                };
                break;
            }
            record(t, &spec)?;
        }
    }

    Ok(Trajectory {
        times,
        fields,
        diagnostics,
        termination,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> EvolveConfig {
        EvolveConfig {
            n: 256,
            half_length: 40.0,
            dt: 0.01,
            final_time: 0.5,
            record_every: 10,
            ..Default::default()
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let cfg = small_cfg();
        let g = SpectralGrid::new(cfg.n, cfg.half_length).unwrap();
        let traj = run(&cfg, &Field::zeros(g)).unwrap();
        assert!(traj.completed());
        assert_eq!(traj.times.len(), 6);
        assert!(traj.fields.iter().all(|f| f.sup_norm() == 0.0));
    }

    #[test]
    fn times_start_at_zero_and_increase() {
        let cfg = EvolveConfig {
            final_time: 0.55,
            ..small_cfg()
        };
        let g = SpectralGrid::new(cfg.n, cfg.half_length).unwrap();
        let phi = Field::from_fn(g, |x| (-(x * x)).exp()).unwrap();
        let traj = run(&cfg, &phi).unwrap();
        assert_eq!(traj.times[0], 0.0);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert!((traj.times.last().unwrap() - 0.55).abs() < 1e-12);
    }

    #[test]
    fn tiny_blowup_factor_trips_the_guard() {
        let cfg = EvolveConfig {
            blowup_factor: 1.0 + 1e-9,
            final_time: 2.0,
            ..small_cfg()
        };
        let g = SpectralGrid::new(cfg.n, cfg.half_length).unwrap();
        let phi = Field::from_fn(g, |x| 3.0 * (-(x * x)).exp()).unwrap();
        let traj = run(&cfg, &phi).unwrap();
        assert!(matches!(
            traj.termination,
            Termination::BlowUpSuspected { .. }
        ));
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let cfg = small_cfg();
        let g = SpectralGrid::new(128, cfg.half_length).unwrap();
        assert!(run(&cfg, &Field::zeros(g)).is_err());
    }
}
