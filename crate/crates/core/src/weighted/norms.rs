use super::weights::japanese;
use crate::spectral::Field;

/// `(Σ ⟨x_j⟩^{2r} u_j² dx)^{1/2}`.
pub fn weighted_norm(u: &Field, r: f64) -> f64 {
    let grid = u.grid();
    let sum: f64 = grid
        .xs()
        .iter()
        .zip(u.values())
        .map(|(&x, &v)| japanese(x).powf(2.0 * r) * v * v)
        .sum();
    (sum * grid.dx()).sqrt()
}

/// Fraction of `‖⟨x⟩^r u‖₂²` carried by `|x| > fraction·L`.
pub fn tail_fraction(u: &Field, r: f64, fraction: f64) -> f64 {
    let grid = u.grid();
    let edge = fraction * grid.half_length();
    let (mut tail, mut total) = (0.0, 0.0);
    for (&x, &v) in grid.xs().iter().zip(u.values()) {
        let w = japanese(x).powf(2.0 * r) * v * v;
        total += w;
        if x.abs() > edge {
            tail += w;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}
