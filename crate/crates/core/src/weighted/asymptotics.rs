//! Probes of `η ↦ 𝒟^θ(g ψ)(η)` for the symbol families `|ξ|^α`, `|ξ|^{-β}`
//! and `(1+|ξ|^α)^{-1}` cut off by `ψ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffSpec;
use super::quadrature::gauss_legendre_composite;
use super::stein::{stein_pointwise, stein_pointwise_sq, CompactFunction, SteinQuadrature};
use crate::error::{invalid, Result};
use crate::fit::{fit_log_log, LineFit};

/// Minimum R² for a slope fit to count as conclusive.
pub const MIN_R_SQUARED: f64 = 0.98;
pub const PROBES_PER_DECADE: usize = 40;
pub const SMALL_WINDOW: (f64, f64) = (1e-3, 1e-1);
pub const LARGE_WINDOW: (f64, f64) = (10.0, 100.0);
/// Smallest probe; stands in for `η → 0` when estimating the plateau.
pub const ETA_MIN: f64 = 1e-7;

/// Log-spaced points in `[lo, hi]`, `per_decade` per factor of ten, both ends included.
pub fn log_probes(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let m = (decades * per_decade as f64).round().max(1.0) as usize;
    (0..=m)
        .map(|i| lo * 10f64.powf(decades * i as f64 / m as f64))
        .collect()
}

fn powered(cutoff: CutoffSpec, alpha: f64) -> CompactFunction<'static> {
    CompactFunction::new(
        move |x: f64| x.abs().powf(alpha) * cutoff.psi(x),
        cutoff.support(),
        &cutoff.breakpoints(),
    )
}

fn plain(cutoff: CutoffSpec) -> CompactFunction<'static> {
    CompactFunction::new(move |x| cutoff.psi(x), cutoff.support(), &cutoff.breakpoints())
}

fn bbm(cutoff: CutoffSpec, alpha: f64) -> CompactFunction<'static> {
    CompactFunction::new(
        move |x: f64| cutoff.psi(x) / (1.0 + x.abs().powf(alpha)),
        cutoff.support(),
        &cutoff.breakpoints(),
    )
}

/// `𝒟^θ g` at every probe, in parallel.
pub fn stein_curve(g: &CompactFunction, theta: f64, etas: &[f64], q: SteinQuadrature) -> Vec<f64> {
    etas.par_iter()
        .map(|&eta| stein_pointwise(g, theta, eta, q))
        .collect()
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(invalid("theta", format!("must lie in (0, 1), got {theta}")))
    }
}

fn window(etas: &[f64], vals: &[f64], (lo, hi): (f64, f64)) -> (Vec<f64>, Vec<f64>) {
    let tol = 1e-9;
    etas.iter()
        .zip(vals)
        .filter(|(&e, _)| e >= lo * (1.0 - tol) && e <= hi * (1.0 + tol))
        .map(|(&e, &v)| (e, v))
        .unzip()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopeFit {
    /// Fitted exponent: `value ∝ η^exponent`.
    pub exponent: f64,
    pub r_squared: f64,
    pub conclusive: bool,
}

impl From<LineFit> for SlopeFit {
    fn from(f: LineFit) -> Self {
        Self {
            exponent: f.slope,
            r_squared: f.r_squared,
            conclusive: f.r_squared >= MIN_R_SQUARED,
        }
    }
}

/// Fitted behaviour of `𝒟^θ(|ξ|^α ψ)` near 0 and at infinity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SteinAsymptotics {
    pub alpha: f64,
    pub theta: f64,
    pub etas: Vec<f64>,
    pub values: Vec<f64>,
    /// Value at the smallest probe, subtracted before the small-η fit when `α > θ`.
    pub plateau: Option<f64>,
    /// Fit of `|𝒟 - plateau|` (α > θ) or of `𝒟` (α < θ) on the small window.
    pub small: SlopeFit,
    pub large: SlopeFit,
}

impl SteinAsymptotics {
    pub fn expected_small(&self) -> f64 {
        self.alpha - self.theta
    }

    pub fn expected_large(&self) -> f64 {
        -(0.5 + self.theta)
    }
}

/// Probes `𝒟^θ(|ξ|^α ψ)` on `[ETA_MIN, 100]` at [`PROBES_PER_DECADE`] and fits
/// log–log slopes on [`SMALL_WINDOW`] and [`LARGE_WINDOW`].
pub fn stein_asymptotics(alpha: f64, theta: f64, cutoff: CutoffSpec) -> Result<SteinAsymptotics> {
    stein_asymptotics_with(
        alpha,
        theta,
        cutoff,
        PROBES_PER_DECADE,
        ETA_MIN,
        SteinQuadrature::default(),
    )
}

pub fn stein_asymptotics_with(
    alpha: f64,
    theta: f64,
    cutoff: CutoffSpec,
    per_decade: usize,
    eta_min: f64,
    q: SteinQuadrature,
) -> Result<SteinAsymptotics> {
    check_theta(theta)?;
    if !(alpha > 0.0) {
        return Err(invalid("alpha", format!("must be positive, got {alpha}")));
    }
    if alpha == theta {
        return Err(invalid("alpha", "the small-η fit needs alpha != theta"));
    }
    let g = powered(cutoff, alpha);
    if !(eta_min > 0.0 && eta_min <= SMALL_WINDOW.0) {
        return Err(invalid("eta_min", format!("must lie in (0, {}], got {eta_min}", SMALL_WINDOW.0)));
    }
    let etas = log_probes(eta_min, LARGE_WINDOW.1, per_decade);
    let values = stein_curve(&g, theta, &etas, q);

    let plateau = (alpha > theta).then(|| values[0]);
    let (se, sv) = window(&etas, &values, SMALL_WINDOW);
    let sv: Vec<f64> = match plateau {
        Some(c1) => sv.iter().map(|v| (v - c1).abs()).collect(),
        None => sv,
    };
    let small = fit_log_log(&se, &sv)?.into();
    let (le, lv) = window(&etas, &values, LARGE_WINDOW);
    let large = fit_log_log(&le, &lv)?.into();
    Ok(SteinAsymptotics {
        alpha,
        theta,
        etas,
        values,
        plateau,
        small,
        large,
    })
}

/// Partial integrals of `𝒟^θ(|ξ|^α ψ)²` over `[10^{-k}, 1]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct L2Dichotomy {
    pub alpha: f64,
    pub theta: f64,
    /// `∫_{10^{-k-1}}^{10^{-k}} 𝒟² dη` for `k = 0, 1, …`.
    pub decade_increments: Vec<f64>,
    /// Ratio of the last two increments; below 1 means the partial integrals are Cauchy.
    pub tail_ratio: f64,
    pub convergent: bool,
}

/// Refines the integration domain toward `η = 0` one decade at a time and
/// records how much each decade adds.
pub fn l2_dichotomy(alpha: f64, theta: f64, cutoff: CutoffSpec, decades: usize) -> Result<L2Dichotomy> {
    check_theta(theta)?;
    if decades < 2 {
        return Err(invalid("decades", "need at least two decades"));
    }
    let g = powered(cutoff, alpha);
    let q = SteinQuadrature::default();
    let decade_increments: Vec<f64> = (0..decades)
        .into_par_iter()
        .map(|k| {
            // in s = ln η, ∫ 𝒟²(η) dη = ∫ 𝒟²(e^s) e^s ds
            let hi = -(k as f64) * std::f64::consts::LN_10;
            let lo = hi - std::f64::consts::LN_10;
            gauss_legendre_composite(
                |s| {
                    let eta = s.exp();
                    stein_pointwise_sq(&g, theta, eta, q) * eta
                },
                lo,
                hi,
                2,
            )
        })
        .collect();
    let m = decade_increments.len();
    let tail_ratio = decade_increments[m - 1] / decade_increments[m - 2];
    Ok(L2Dichotomy {
        alpha,
        theta,
        decade_increments,
        tail_ratio,
        convergent: tail_ratio < 1.0,
    })
}

/// Pointwise comparison of `𝒟^θ((1+|ξ|^α)^{-1}ψ)` with
/// `𝒟^θψ + 𝒟^θ(|ξ|^αψ)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolBoundReport {
    pub alpha: f64,
    pub theta: f64,
    pub etas: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Smallest admissible constant on the probe set.
    pub c_max: f64,
    /// The same on a denser probe set with tighter quadrature.
    pub c_max_refined: f64,
    pub refinement_factor: f64,
}

fn symbol_ratios(alpha: f64, theta: f64, cutoff: CutoffSpec, etas: &[f64], q: SteinQuadrature) -> Vec<f64> {
    let lhs = stein_curve(&bbm(cutoff, alpha), theta, etas, q);
    let a = stein_curve(&plain(cutoff), theta, etas, q);
    let b = stein_curve(&powered(cutoff, alpha), theta, etas, q);
    lhs.iter()
        .zip(a.iter().zip(&b))
        .map(|(l, (a, b))| l / (a + b))
        .collect()
}

/// Probes `η ∈ [1e-3, 100]`.
pub fn bbm_symbol_stein_bound(alpha: f64, theta: f64, cutoff: CutoffSpec) -> Result<SymbolBoundReport> {
    check_theta(theta)?;
    let q = SteinQuadrature::default();
    let etas = log_probes(1e-3, 100.0, PROBES_PER_DECADE);
    let ratios = symbol_ratios(alpha, theta, cutoff, &etas, q);
    let fine = log_probes(1e-3, 100.0, 2 * PROBES_PER_DECADE);
    let fine_ratios = symbol_ratios(alpha, theta, cutoff, &fine, q.refined());
    let c_max = ratios.iter().cloned().fold(0.0, f64::max);
    let c_max_refined = fine_ratios.iter().cloned().fold(0.0, f64::max);
    Ok(SymbolBoundReport {
        alpha,
        theta,
        etas,
        ratios,
        c_max,
        c_max_refined,
        refinement_factor: c_max_refined / c_max,
    })
}

/// `𝒟^θ(|ξ|^{-β}ψ)(η)·|η|^{β+θ}` over a probe window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NegativePowerReport {
    pub beta: f64,
    pub theta: f64,
    pub etas: Vec<f64>,
    pub scaled: Vec<f64>,
    pub max: f64,
    pub max_refined: f64,
    pub refinement_factor: f64,
}

pub fn negative_power_probe(
    beta: f64,
    theta: f64,
    cutoff: CutoffSpec,
    window: (f64, f64),
) -> Result<NegativePowerReport> {
    check_theta(theta)?;
    if !(beta > 0.0 && beta < 0.5) {
        return Err(invalid("beta", format!("must lie in (0, 1/2), got {beta}")));
    }
    let g = CompactFunction::new(
        move |x: f64| x.abs().powf(-beta) * cutoff.psi(x),
        cutoff.support(),
        &cutoff.breakpoints(),
    );
    let scale = |etas: &[f64], q| -> Vec<f64> {
        stein_curve(&g, theta, etas, q)
            .iter()
            .zip(etas)
            .map(|(v, e)| v * e.powf(beta + theta))
            .collect()
    };
    let q = SteinQuadrature::default();
    let etas = log_probes(window.0, window.1, PROBES_PER_DECADE);
    let scaled = scale(&etas, q);
    let fine = log_probes(window.0, window.1, 2 * PROBES_PER_DECADE);
    let fine_scaled = scale(&fine, q.refined());
    let max = scaled.iter().cloned().fold(0.0, f64::max);
    let max_refined = fine_scaled.iter().cloned().fold(0.0, f64::max);
    Ok(NegativePowerReport {
        beta,
        theta,
        etas,
        scaled,
        max,
        max_refined,
        refinement_factor: max_refined / max,
    })
}
