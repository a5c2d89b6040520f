use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::quadrature::gauss_legendre_composite;
use crate::error::{invalid, Result};
use crate::spectral::{Field, SpectralGrid};

/// `⟨x⟩ = (1 + x²)^{1/2}`.
pub fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WeightMode {
    /// Bounded surrogate `w_N^θ` of `⟨x⟩^θ`.
    Truncated,
    /// `⟨x⟩^r`.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub theta: f64,
    /// Truncation radius `N`.
    pub radius: f64,
    pub mode: WeightMode,
    /// Exponent of the plain weight.
    pub r: f64,
}

impl WeightSpec {
    pub fn truncated(theta: f64, radius: f64) -> Self {
        Self {
            theta,
            radius,
            mode: WeightMode::Truncated,
            r: theta,
        }
    }

    pub fn plain(r: f64) -> Self {
        Self {
            theta: r,
            radius: f64::INFINITY,
            mode: WeightMode::Plain,
            r,
        }
    }
}

fn smoothstep5(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

/// Even, nondecreasing, smooth weight equal to `⟨x⟩^θ` on `|x| ≤ N` and to
/// `(2N)^θ` on `|x| ≥ 3N`.
///
/// Past `N + μ` the slope of `⟨x⟩^θ` is tapered to zero by a quintic
/// smoothstep over a length `N`; the shift `μ ∈ [0, N]` is solved for so the
/// weight lands exactly on `(2N)^θ`. Since `w' = ρ·(⟨x⟩^θ)'` with `0 ≤ ρ ≤ 1`,
/// `|w'| ≤ θ` for every `N`.
#[derive(Clone, Debug)]
pub struct TruncatedWeight {
    theta: f64,
    radius: f64,
    taper_start: f64,
    taper_len: f64,
    plateau: f64,
}

impl TruncatedWeight {
    pub fn new(theta: f64, radius: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(invalid("theta", format!("must lie in (0, 1], got {theta}")));
        }
        if !(radius >= 1.0) || !radius.is_finite() {
            return Err(invalid("N", format!("must be finite and >= 1, got {radius}")));
        }
        let plateau = (2.0 * radius).powf(theta);
        let taper_len = radius;
        let reached = |mu: f64| {
            let start = radius + mu;
            japanese(start).powf(theta) + taper_rise(theta, start, taper_len, start + taper_len)
        };
        let (mut lo, mut hi) = (0.0, radius);
        debug_assert!(reached(lo) <= plateau && reached(hi) >= plateau);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if reached(mid) < plateau {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * radius {
                break;
            }
        }
        Ok(Self {
            theta,
            radius,
            taper_start: radius + 0.5 * (lo + hi),
            taper_len,
            plateau,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn plateau(&self) -> f64 {
        self.plateau
    }

    pub fn value(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= self.taper_start {
            japanese(ax).powf(self.theta)
        } else if ax >= self.taper_start + self.taper_len {
            self.plateau
        } else {
            let v = japanese(self.taper_start).powf(self.theta)
                + taper_rise(self.theta, self.taper_start, self.taper_len, ax);
            v.min(self.plateau)
        }
    }

    /// Exact derivative `ρ(x)·(⟨x⟩^θ)'`.
    pub fn derivative(&self, x: f64) -> f64 {
        let ax = x.abs();
        let rho = 1.0 - smoothstep5((ax - self.taper_start) / self.taper_len);
        x.signum() * rho * bracket_slope(self.theta, ax)
    }
}

/// `(⟨y⟩^θ)' = θ y ⟨y⟩^{θ-2}`.
fn bracket_slope(theta: f64, y: f64) -> f64 {
    theta * y * (1.0 + y * y).powf(0.5 * theta - 1.0)
}

/// `∫_start^x (1 - S((y-start)/len)) (⟨y⟩^θ)' dy`.
fn taper_rise(theta: f64, start: f64, len: f64, x: f64) -> f64 {
    if x <= start {
        return 0.0;
    }
    gauss_legendre_composite(
        |y| (1.0 - smoothstep5((y - start) / len)) * bracket_slope(theta, y),
        start,
        x,
        4,
    )
}

/// Samples the weight described by `spec` on `grid`.
pub fn weight_values(grid: &Arc<SpectralGrid>, spec: &WeightSpec) -> Result<Field> {
    match spec.mode {
        WeightMode::Plain => Field::from_fn(grid.clone(), |x| japanese(x).powf(spec.r)),
        WeightMode::Truncated => {
            let w = TruncatedWeight::new(spec.theta, spec.radius)?;
            Field::from_fn(grid.clone(), |x| w.value(x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn value_at_origin_is_one() {
        let w = TruncatedWeight::new(1.0, 5.0).unwrap();
        assert_eq!(w.value(0.0), 1.0);
    }

    #[test]
    fn plateau_is_exact_beyond_three_n() {
        for theta in [0.05, 0.5, 1.0] {
            for n in [1.0, 10.0, 40.0] {
                let w = TruncatedWeight::new(theta, n).unwrap();
                assert_eq!(w.value(4.0 * n), (2.0 * n).powf(theta));
                assert_eq!(w.value(3.0 * n), (2.0 * n).powf(theta));
                assert_eq!(w.value(-3.5 * n), (2.0 * n).powf(theta));
            }
        }
    }

    #[test]
    fn first_branch_is_exact() {
        let w = TruncatedWeight::new(0.5, 10.0).unwrap();
        for x in [-10.0, -3.0, 0.5, 9.99, 10.0] {
            assert_eq!(w.value(x), japanese(x).powf(0.5));
        }
    }

    #[test]
    fn continuous_at_taper_edges() {
        for theta in [0.1, 0.5, 1.0] {
            let w = TruncatedWeight::new(theta, 20.0).unwrap();
            let end = w.taper_start + w.taper_len;
            assert!((w.value(end - 1e-9) - w.plateau()).abs() < 1e-9);
            assert!((w.value(w.taper_start + 1e-9) - w.value(w.taper_start)).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TruncatedWeight::new(0.0, 5.0).is_err());
        assert!(TruncatedWeight::new(0.5, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn even_and_nondecreasing(theta in 0.05f64..=1.0, n in 1.0f64..60.0, x in 0.0f64..250.0, dx in 0.0f64..5.0) {
            let w = TruncatedWeight::new(theta, n).unwrap();
            prop_assert_eq!(w.value(x), w.value(-x));
            prop_assert!(w.value(x + dx) >= w.value(x) - 1e-12);
            prop_assert!(w.derivative(x).abs() <= theta + 1e-12);
        }
    }
}
