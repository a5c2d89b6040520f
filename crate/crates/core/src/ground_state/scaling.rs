use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::petviashvili::{petviashvili_solve, GroundState, PetviashviliOptions};
use crate::error::{invalid, Result};
use crate::spectral::{apply_to_field, Field, MultiplierKind, SpectralGrid, Spectrum};

fn check_speed(c: f64) -> Result<()> {
    if c > 1.0 && c.is_finite() {
        Ok(())
    } else {
        Err(invalid("c", format!("speed must exceed 1, got {c}")))
    }
}

/// `λ = ((c-1)/c)^{1/α}`, so that `Q_c(y) = ((c-1)/2) Ψ(λy)`.
pub fn speed_scale(alpha: f64, c: f64) -> f64 {
    ((c - 1.0) / c).powf(1.0 / alpha)
}

/// `Q_c` sampled exactly: `Ψ`'s grid points `x_j` map to `y_j = x_j/λ`, so
/// the result lives on `(n, L/λ)`.
pub fn scale_to_qc(gs: &GroundState, c: f64) -> Result<Field> {
    check_speed(c)?;
    let g = gs.profile.grid();
    let lambda = speed_scale(gs.alpha, c);
    let target = SpectralGrid::new(g.n(), g.half_length() / lambda)?;
    let amp = 0.5 * (c - 1.0);
    Field::new(target, gs.profile.values().iter().map(|v| amp * v).collect())
}

/// Trigonometric interpolant of `f` at arbitrary points; the unpaired
/// mode contributes as a cosine.
pub fn interpolate(f: &Field, points: &[f64]) -> Vec<f64> {
    let grid = f.grid();
    let spec = f.forward();
    let nyq = grid.nyquist_index();
    let scale = 1.0 / (2.0 * grid.half_length());
    points
        .iter()
        .map(|&x| {
            let mut s = 0.0;
            for (idx, (c, xi)) in spec.coeffs().iter().zip(grid.xis()).enumerate() {
                if idx == nyq {
                    s += c.re * (xi * x).cos();
                } else {
                    s += (c * Complex64::from_polar(1.0, xi * x)).re;
                }
            }
            s * scale
        })
        .collect()
}

/// `Q_c` resampled on an arbitrary grid by spectral interpolation of `Ψ`.
/// The grid must map inside the box `Ψ` was solved on.
pub fn scale_to_qc_on(gs: &GroundState, c: f64, grid: &Arc<SpectralGrid>) -> Result<Field> {
    check_speed(c)?;
    let lambda = speed_scale(gs.alpha, c);
    let reach = lambda * grid.half_length();
    let box_l = gs.profile.grid().half_length();
    if reach > box_l * (1.0 + 1e-12) {
        return Err(invalid(
            "grid",
            format!("needs Ψ on |x| <= {reach}, but Ψ lives on |x| <= {box_l}"),
        ));
    }
    let pts: Vec<f64> = grid.xs().iter().map(|y| lambda * y).collect();
    let amp = 0.5 * (c - 1.0);
    let vals = interpolate(&gs.profile, &pts);
    Field::new(grid.clone(), vals.into_iter().map(|v| amp * v).collect())
}

/// Solves for `Ψ` on `(n, λL)` so that `Q_c` lands exactly on `grid`.
pub fn solve_qc(
    alpha: f64,
    c: f64,
    grid: &Arc<SpectralGrid>,
    opts: &PetviashviliOptions,
) -> Result<(GroundState, Field)> {
    check_speed(c)?;
    let lambda = speed_scale(alpha, c);
    let psi_grid = SpectralGrid::new(grid.n(), lambda * grid.half_length())?;
    let gs = petviashvili_solve(alpha, &psi_grid, opts)?;
    let q = scale_to_qc(&gs, c)?;
    let q = Field::new(grid.clone(), q.into_values())?;
    Ok((gs, q))
}

/// `‖(c-1)Q + cD^αQ - Q²‖_∞`.
pub fn qc_residual(q: &Field, alpha: f64, c: f64) -> Result<f64> {
    let d = apply_to_field(q, MultiplierKind::FracDeriv(alpha))?;
    Ok(q
        .values()
        .iter()
        .zip(d.values())
        .fold(0.0f64, |m, (&v, &dv)| m.max(((c - 1.0) * v + c * dv - v * v).abs())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeError {
    /// `min_τ ‖u - q(· - τ)‖₂ / ‖q‖₂`.
    pub relative: f64,
    pub shift: f64,
}

/// Best translate of `q` matching `u`, searched within one box length of
/// `shift_guess`. Shifts are applied spectrally.
pub fn translated_shape_error(u: &Field, q: &Field, shift_guess: f64) -> Result<ShapeError> {
    u.grid().ensure_same(q.grid())?;
    let grid = u.grid().clone();
    let (uh, qh): (Spectrum, Spectrum) = (u.forward(), q.forward());
    let nyq = grid.nyquist_index();
    let cross: Vec<Complex64> = uh
        .coeffs()
        .iter()
        .zip(qh.coeffs())
        .enumerate()
        .map(|(i, (a, b))| if i == nyq { Complex64::new(0.0, 0.0) } else { a.conj() * b })
        .collect();
    let corr = |tau: f64| -> f64 {
        cross
            .iter()
            .zip(grid.xis())
            .map(|(c, xi)| (c * Complex64::from_polar(1.0, -xi * tau)).re)
            .sum::<f64>()
    };
    let dx = grid.dx();
    let span = grid.half_length();
    let steps = (2.0 * span / dx).round() as i64;
    let (mut best, mut best_val) = (shift_guess, f64::NEG_INFINITY);
    for i in -steps / 2..=steps / 2 {
        let tau = shift_guess + i as f64 * dx;
        let v = corr(tau);
        if v > best_val {
            best_val = v;
            best = tau;
        }
    }
    // golden section on [best - dx, best + dx]
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (best - dx, best + dx);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (corr(x1), corr(x2));
    while b - a > 1e-12 * dx.max(1.0) {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = corr(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = corr(x2);
        }
    }
    let tau = 0.5 * (a + b);
    // evaluate the misfit directly; the expanded form cancels catastrophically
    let shifted: Vec<Complex64> = qh
        .coeffs()
        .iter()
        .zip(grid.xis())
        .enumerate()
        .map(|(i, (c, xi))| if i == nyq { *c } else { c * Complex64::from_polar(1.0, -xi * tau) })
        .collect();
    let q_tau = Spectrum::from_raw(grid.clone(), shifted).inverse();
    let diff = u.zip_with(&q_tau, |x, y| x - y)?;
    Ok(ShapeError {
        relative: diff.l2_norm() / q.l2_norm(),
        shift: tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_reproduces_band_limited_functions() {
        let g = SpectralGrid::new(64, std::f64::consts::PI).unwrap();
        let f = Field::from_fn(g, |x| (3.0 * x).cos() + 0.5 * (7.0 * x).sin()).unwrap();
        let pts = [0.123, -2.5, 1.7];
        for (p, v) in pts.iter().zip(interpolate(&f, &pts)) {
            assert!((v - ((3.0 * p).cos() + 0.5 * (7.0 * p).sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_is_recovered() {
        let g = SpectralGrid::new(512, 40.0).unwrap();
        let q = Field::from_fn(g.clone(), |x| (-(x * x)).exp()).unwrap();
        let u = Field::from_fn(g, |x| (-(x - 3.3).powi(2)).exp()).unwrap();
        let e = translated_shape_error(&u, &q, 3.0).unwrap();
        // the correlation peak is quadratic, so τ is resolved to ~√ε
        assert!((e.shift - 3.3).abs() < 1e-6, "{}", e.shift);
        assert!(e.relative < 1e-7);
    }

    #[test]
    fn speed_must_exceed_one() {
        let g = SpectralGrid::new(256, 30.0).unwrap();
        let gs = petviashvili_solve(1.0, &g, &PetviashviliOptions::default()).unwrap();
        assert!(scale_to_qc(&gs, 1.0).is_err());
        let q = scale_to_qc(&gs, 3.0).unwrap();
        let mid = g.n() / 2;
        assert_eq!(q.values()[mid], gs.profile.values()[mid]);
    }
}
