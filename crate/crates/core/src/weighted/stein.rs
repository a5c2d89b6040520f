//! The Stein derivative
//!
//! ```text
//! 𝒟^b f(x) = ( ∫ |f(x) - f(y)|² / |x - y|^{1+2b} dy )^{1/2},   0 < b < 1
//! ```
//!
//! in two flavours: a grid version for sampled fields, and a pointwise
//! quadrature version for compactly supported functions of one variable
//! (used on symbols in frequency space).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::tanh_sinh;
use crate::error::{invalid, Result};
use crate::spectral::{apply_to_field, Field, MultiplierKind};

fn check_order(b: f64) -> Result<()> {
    if b > 0.0 && b < 1.0 {
        Ok(())
    } else {
        Err(invalid("b", format!("Stein order must lie in (0, 1), got {b}")))
    }
}

/// Grid Stein derivative of a sampled field.
///
/// Off-diagonal cells use the midpoint rule over the box. The diagonal cell
/// `|y - x_j| < dx/2` uses the local linear model `|f(x)-f(y)| ≈ |f'(x)||x-y|`,
/// contributing `2 |f'(x_j)|² (dx/2)^{2-2b} / (2-2b)`; `f'` is taken spectrally.
pub fn stein_derivative(f: &Field, b: f64) -> Result<Field> {
    check_order(b)?;
    let grid = f.grid().clone();
    let n = grid.n();
    let dx = grid.dx();
    let vals = f.values();
    let slope = apply_to_field(f, MultiplierKind::Derivative(1))?;
    let slope = slope.values();
    let expo = 1.0 + 2.0 * b;
    // kernel |i dx|^{-1-2b} by separation
    let kernel: Vec<f64> = (0..n)
        .map(|d| if d == 0 { 0.0 } else { (d as f64 * dx).powf(-expo) })
        .collect();
    let diag = 2.0 * (0.5 * dx).powf(2.0 - 2.0 * b) / (2.0 - 2.0 * b);
    let out: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let fj = vals[j];
            let mut acc = 0.0;
            for (i, &fi) in vals.iter().enumerate() {
                let d = (fj - fi) * (fj - fi);
                acc += d * kernel[i.abs_diff(j)];
            }
            (acc * dx + slope[j] * slope[j] * diag).sqrt()
        })
        .collect();
    Field::new(grid, out)
}

/// A function of one variable vanishing outside `support`, with known kinks.
pub struct CompactFunction<'a> {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    support: (f64, f64),
    breakpoints: Vec<f64>,
}

impl<'a> CompactFunction<'a> {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'a,
        support: (f64, f64),
        breakpoints: &[f64],
    ) -> Self {
        let mut bps: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&p| p > support.0 && p < support.1)
            .collect();
        bps.push(support.0);
        bps.push(support.1);
        bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bps.dedup();
        Self {
            f: Box::new(f),
            support,
            breakpoints: bps,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.support.0 || x >= self.support.1 {
            0.0
        } else {
            (self.f)(x)
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }
}

/// Quadrature settings for [`stein_pointwise`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinQuadrature {
    pub rel_tol: f64,
    /// Below `|ξ - η| < local_fraction·|η|` the linear model replaces the
    /// difference quotient.
    pub local_fraction: f64,
}

impl Default for SteinQuadrature {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            local_fraction: 1e-9,
        }
    }
}

impl SteinQuadrature {
    pub fn refined(&self) -> Self {
        Self {
            rel_tol: self.rel_tol * 1e-2,
            local_fraction: self.local_fraction * 0.1,
        }
    }
}

/// `(𝒟^θ g)(η)²` for a compactly supported `g`, by tanh–sinh on the pieces
/// between breakpoints plus the closed-form tails where `g = 0`.
pub fn stein_pointwise_sq(g: &CompactFunction, theta: f64, eta: f64, q: SteinQuadrature) -> f64 {
    let expo = 1.0 + 2.0 * theta;
    let g_eta = g.eval(eta);
    let (lo, hi) = g.support;

    // tails outside the support: integrand g(η)²/|η-ξ|^{1+2θ}
    let mut total = 0.0;
    if g_eta != 0.0 {
        if eta > lo {
            total += g_eta * g_eta * (eta - lo).powf(-2.0 * theta) / (2.0 * theta);
        }
        if eta < hi {
            total += g_eta * g_eta * (hi - eta).powf(-2.0 * theta) / (2.0 * theta);
        }
    }

    let inside = eta > lo && eta < hi;
    let mut bps = g.breakpoints.clone();
    if inside && !bps.contains(&eta) {
        bps.push(eta);
        bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }

    // slope for the local model
    let scale = eta.abs().max(1e-300);
    let h = 1e-5 * scale;
    let local_radius = q.local_fraction * eta.abs();
    let slope = if inside && local_radius > 0.0 {
        (g.eval(eta + h) - g.eval(eta - h)) / (2.0 * h)
    } else {
        0.0
    };

    for w in bps.windows(2) {
        let (a, b) = (w[0], w[1]);
        if inside && (a == eta || b == eta) {
            // offset coordinate s = ξ - η, singular endpoint at s = 0
            let (s0, s1) = (a - eta, b - eta);
            let integrand = |s: f64| {
                let d = s.abs();
                if d < local_radius {
                    slope * slope * d.powf(1.0 - 2.0 * theta)
                } else {
                    let diff = g_eta - g.eval(eta + s);
                    diff * diff / d.powf(expo)
                }
            };
            total += tanh_sinh(integrand, s0, s1, q.rel_tol).abs();
        } else {
            let integrand = |xi: f64| {
                let diff = g_eta - g.eval(xi);
                diff * diff / (eta - xi).abs().powf(expo)
            };
            total += tanh_sinh(integrand, a, b, q.rel_tol);
        }
    }
    total
}

pub fn stein_pointwise(g: &CompactFunction, theta: f64, eta: f64, q: SteinQuadrature) -> f64 {
    stein_pointwise_sq(g, theta, eta, q).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralGrid;

    #[test]
    fn constant_field_has_zero_stein_derivative() {
        let g = SpectralGrid::new(256, 10.0).unwrap();
        let f = Field::from_fn(g, |_| 2.5).unwrap();
        let d = stein_derivative(&f, 0.4).unwrap();
        assert!(d.sup_norm() < 1e-12);
    }

    #[test]
    fn order_outside_unit_interval_is_rejected() {
        let g = SpectralGrid::new(32, 10.0).unwrap();
        let f = Field::zeros(g);
        assert!(stein_derivative(&f, 1.0).is_err());
        assert!(stein_derivative(&f, 0.0).is_err());
    }

    #[test]
    fn indicator_outside_support_matches_closed_form() {
        // g = 1 on (-1, 1): at η = 3, ∫_{-1}^{1} |3-ξ|^{-1-2θ} dξ = (2^{-2θ} - 4^{-2θ})/(2θ)
        let g = CompactFunction::new(|_| 1.0, (-1.0, 1.0), &[]);
        let theta = 0.3;
        let v = stein_pointwise_sq(&g, theta, 3.0, SteinQuadrature::default());
        let exact = (2f64.powf(-2.0 * theta) - 4f64.powf(-2.0 * theta)) / (2.0 * theta);
        assert!((v - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn indicator_inside_support_is_tails_only() {
        // g = 1 on (-1, 1): at η = 0.5 the integrand vanishes inside and the tails give
        // ((1.5)^{-2θ} + (0.5)^{-2θ})/(2θ)
        let g = CompactFunction::new(|_| 1.0, (-1.0, 1.0), &[]);
        let theta = 0.6;
        let v = stein_pointwise_sq(&g, theta, 0.5, SteinQuadrature::default());
        let exact = (1.5f64.powf(-2.0 * theta) + 0.5f64.powf(-2.0 * theta)) / (2.0 * theta);
        assert!((v - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn linear_function_on_interval() {
        // g(ξ) = ξ on (-1, 1), η = 0: ∫_{-1}^{1} |ξ|^{1-2θ} dξ = 2/(2-2θ)
        let g = CompactFunction::new(|x| x, (-1.0, 1.0), &[]);
        for theta in [0.2, 0.5, 0.8] {
            let v = stein_pointwise_sq(&g, theta, 0.0, SteinQuadrature::default());
            let exact = 2.0 / (2.0 - 2.0 * theta);
            assert!((v - exact).abs() < 1e-9 * exact, "θ={theta}: {v} vs {exact}");
        }
    }

    #[test]
    fn linear_function_off_centre_uses_local_model_consistently() {
        // g(ξ) = ξ on (-1, 1), η = 0.25:
        // inside: ∫_{-1}^{1} |ξ-η|^{1-2θ} = ((1.25)^{2-2θ} + (0.75)^{2-2θ})/(2-2θ)
        // tails: η²((1.25)^{-2θ} + (0.75)^{-2θ})/(2θ)
        let g = CompactFunction::new(|x| x, (-1.0, 1.0), &[]);
        let eta: f64 = 0.25;
        for theta in [0.3, 0.75] {
            let v = stein_pointwise_sq(&g, theta, eta, SteinQuadrature::default());
            let p = 2.0 - 2.0 * theta;
            let inside = (1.25f64.powf(p) + 0.75f64.powf(p)) / p;
            let tails = eta * eta * (1.25f64.powf(-2.0 * theta) + 0.75f64.powf(-2.0 * theta))
                / (2.0 * theta);
            let exact = inside + tails;
            assert!((v - exact).abs() < 1e-8 * exact, "θ={theta}: {v} vs {exact}");
        }
    }
}
