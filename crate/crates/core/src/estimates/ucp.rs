use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::evolution::Trajectory;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UcpReport {
    pub t1: f64,
    pub t2: f64,
    pub power: u32,
    /// `û(0, t1)`.
    pub mass_t1: f64,
    /// `(1/(t2-t1)) ∫_{t1}^{t2} ∫ u^k dx dτ`.
    pub mean_power_integral: f64,
    /// `R = û(0,t1) + mean_power_integral`.
    pub residual: f64,
}

/// Two-time residual `R = û(0,t1) + (1/(t2-t1)) ∫_{t1}^{t2} ∫ u^k dx dτ`.
///
/// The τ-integral is the trapezoid rule over the recorded snapshots between
/// `t1` and `t2`, which must both be record times. When `k` differs from the
/// trajectory's own power the snapshots themselves are needed.
pub fn ucp_residual(traj: &Trajectory, t1: f64, t2: f64, k: u32) -> Result<UcpReport> {
    if !(t2 > t1) {
        return Err(invalid("t1", format!("t1 < t2 required, got t1={t1}, t2={t2}")));
    }
    if t1 < 0.0 {
        return Err(invalid("t1", format!("must be nonnegative, got {t1}")));
    }
    let i1 = traj.index_of(t1)?;
    let i2 = traj.index_of(t2)?;
    let diag = &traj.diagnostics;
    let integrand: Vec<f64> = if k == diag.power {
        diag.power_integral[i1..=i2].to_vec()
    } else {
        if traj.fields.len() != traj.times.len() {
            return Err(invalid(
                "k",
                "a power other than the trajectory's needs recorded fields",
            ));
        }
        traj.fields[i1..=i2]
            .iter()
            .map(|u| u.values().iter().map(|v| v.powi(k as i32)).sum::<f64>() * u.grid().dx())
            .collect()
    };
    let ts = &traj.times[i1..=i2];
    let integral: f64 = ts
        .windows(2)
        .zip(integrand.windows(2))
        .map(|(t, q)| 0.5 * (t[1] - t[0]) * (q[0] + q[1]))
        .sum();
    let mean = integral / (ts[ts.len() - 1] - ts[0]);
    let mass_t1 = diag.mass[i1];
    Ok(UcpReport {
        t1,
        t2,
        power: k,
        mass_t1,
        mean_power_integral: mean,
        residual: mass_t1 + mean,
    })
}
