use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corpus::{Plateau, TestCorpus};
use crate::error::{invalid, Error, Result};
use crate::spectral::{apply_to_field, Field, MultiplierKind, SpectralGrid};

/// Numerators below this multiple of `‖ψ‖_∞‖f‖₂` count as exact zeros when
/// the derivative bound in the denominator vanishes.
const ZERO_FLOOR: f64 = 1e-11;
/// Derivative bounds below this multiple of `‖ψ‖_∞` are transform rounding
/// of a constant and count as zero.
const FLAT_FLOOR: f64 = 1e-10;

fn product(a: &Field, b: &Field) -> Result<Field> {
    a.zip_with(b, |x, y| x * y)
}

fn finish(numerator: f64, bound: f64, scale: f64, f: &Field) -> Result<f64> {
    let fl2 = f.l2_norm();
    if fl2 == 0.0 {
        return Err(Error::DegenerateRatio { numerator });
    }
    if bound <= FLAT_FLOOR * scale {
        return if numerator <= ZERO_FLOOR * scale.max(1.0) * fl2 {
            Ok(0.0)
        } else {
            Err(Error::DegenerateRatio { numerator })
        };
    }
    Ok(numerator / (bound * fl2))
}

fn sup_abs(f: &Field) -> f64 {
    f.sup_norm()
}

/// `‖A(gf) - gAf‖₂ / (‖g'‖_∞ ‖f‖₂)` with `‖g'‖_∞` taken spectrally on the grid.
pub fn commutator_a_ratio(g: &Field, f: &Field, alpha: f64) -> Result<f64> {
    let slope = sup_abs(&apply_to_field(g, MultiplierKind::Derivative(1))?);
    commutator_a_ratio_with_bound(g, f, alpha, slope)
}

/// As [`commutator_a_ratio`] with a supplied `‖g'‖_∞`.
pub fn commutator_a_ratio_with_bound(g: &Field, f: &Field, alpha: f64, g_slope: f64) -> Result<f64> {
    let a = MultiplierKind::OpA(alpha);
    let lhs = apply_to_field(&product(g, f)?, a)?;
    let rhs = product(g, &apply_to_field(f, a)?)?;
    let num = lhs.zip_with(&rhs, |x, y| x - y)?.l2_norm();
    finish(num, g_slope, sup_abs(g), f)
}

/// `‖∂^l [H, ψ] ∂^m f‖₂ / (‖∂^{l+m}ψ‖_∞ ‖f‖₂)` for `l + m ≤ 2`, with
/// `[H, ψ]h = H(ψh) - ψ Hh`.
pub fn calderon_ratio(psi: &Field, f: &Field, l: u32, m: u32) -> Result<f64> {
    if l + m > 2 {
        return Err(invalid("l+m", format!("must be at most 2, got {}", l + m)));
    }
    let bound = sup_abs(&derivative(psi, l + m)?);
    calderon_ratio_with_bound(psi, f, l, m, bound)
}

pub fn calderon_ratio_with_bound(psi: &Field, f: &Field, l: u32, m: u32, bound: f64) -> Result<f64> {
    if l + m > 2 {
        return Err(invalid("l+m", format!("must be at most 2, got {}", l + m)));
    }
    let h = derivative(f, m)?;
    let a = apply_to_field(&product(psi, &h)?, MultiplierKind::Hilbert)?;
    let b = product(psi, &apply_to_field(&h, MultiplierKind::Hilbert)?)?;
    let comm = a.zip_with(&b, |x, y| x - y)?;
    let num = derivative(&comm, l)?.l2_norm();
    finish(num, bound, sup_abs(psi), f)
}

fn derivative(f: &Field, m: u32) -> Result<Field> {
    if m == 0 {
        Ok(f.clone())
    } else {
        apply_to_field(f, MultiplierKind::Derivative(m))
    }
}

fn check_dalpha(alpha: f64, beta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(invalid("alpha", format!("must lie in [0, 1), got {alpha}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid("beta", format!("must lie in (0, 1), got {beta}")));
    }
    if alpha + beta > 1.0 {
        return Err(invalid("alpha+beta", format!("must be at most 1, got {}", alpha + beta)));
    }
    Ok(())
}

/// `‖D^α [D^β, ψ] D^{1-(α+β)} f‖₂ / (‖ψ'‖_∞ ‖f‖₂)`.
pub fn dalpha_commutator_ratio(psi: &Field, f: &Field, alpha: f64, beta: f64) -> Result<f64> {
    check_dalpha(alpha, beta)?;
    let bound = sup_abs(&derivative(psi, 1)?);
    dalpha_commutator_ratio_with_bound(psi, f, alpha, beta, bound)
}

pub fn dalpha_commutator_ratio_with_bound(
    psi: &Field,
    f: &Field,
    alpha: f64,
    beta: f64,
    bound: f64,
) -> Result<f64> {
    check_dalpha(alpha, beta)?;
    let rest = 1.0 - alpha - beta;
    let h = if rest > 0.0 {
        apply_to_field(f, MultiplierKind::FracDeriv(rest))?
    } else {
        f.clone()
    };
    let db = MultiplierKind::FracDeriv(beta);
    let a = apply_to_field(&product(psi, &h)?, db)?;
    let b = product(psi, &apply_to_field(&h, db)?)?;
    let comm = a.zip_with(&b, |x, y| x - y)?;
    let num = if alpha > 0.0 {
        apply_to_field(&comm, MultiplierKind::FracDeriv(alpha))?.l2_norm()
    } else {
        comm.l2_norm()
    };
    finish(num, bound, sup_abs(psi), f)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "lemma", rename_all = "snake_case")]
pub enum Lemma {
    /// `[A, g]` against `‖g'‖_∞`.
    CommutatorA { alpha: f64 },
    /// `∂^l [H, ψ] ∂^m` against `‖∂^{l+m}ψ‖_∞`.
    Calderon { l: u32, m: u32 },
    /// `D^α [D^β, ψ] D^{1-α-β}` against `‖ψ'‖_∞`.
    DAlpha { alpha: f64, beta: f64 },
}

impl Lemma {
    pub fn id(&self) -> String {
        match *self {
            Lemma::CommutatorA { alpha } => format!("commutator_a(alpha={alpha})"),
            Lemma::Calderon { l, m } => format!("calderon(l={l},m={m})"),
            Lemma::DAlpha { alpha, beta } => format!("dalpha(alpha={alpha},beta={beta})"),
        }
    }

    /// Ratio for corpus instance `i`, denominators from the recorded
    /// continuum bounds.
    fn instance(&self, corpus: &TestCorpus, i: usize, grid: &Arc<SpectralGrid>) -> Result<f64> {
        let f = corpus.fs[i].sample(grid)?;
        match *self {
            Lemma::CommutatorA { alpha } => {
                let g = corpus.gs[i].sample(grid)?;
                commutator_a_ratio_with_bound(&g, &f, alpha, corpus.g_slope[i])
            }
            Lemma::Calderon { l, m } => {
                let psi = corpus.psis[i].sample(grid)?;
                calderon_ratio_with_bound(&psi, &f, l, m, corpus.psi_sup[i][(l + m) as usize])
            }
            Lemma::DAlpha { alpha, beta } => {
                let psi = corpus.psis[i].sample(grid)?;
                dalpha_commutator_ratio_with_bound(&psi, &f, alpha, beta, corpus.psi_sup[i][1])
            }
        }
    }

    /// The same ratio with a constant symbol/weight; should vanish.
    pub fn constant_case(&self, corpus: &TestCorpus, grid: &Arc<SpectralGrid>) -> Result<f64> {
        let f = corpus.fs[0].sample(grid)?;
        let c = Plateau::constant(1.7).sample(grid)?;
        match *self {
            Lemma::CommutatorA { alpha } => commutator_a_ratio(&c, &f, alpha),
            Lemma::Calderon { l, m } => calderon_ratio(&c, &f, l, m),
            Lemma::DAlpha { alpha, beta } => dalpha_commutator_ratio(&c, &f, alpha, beta),
        }
    }
}

/// Corpus ratios for one lemma at resolution `n` and `2n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioReport {
    pub lemma: Lemma,
    pub id: String,
    pub seed: u64,
    pub corpus_size: usize,
    pub n: usize,
    pub ratios: Vec<f64>,
    pub corpus_max: f64,
    pub refined_max: f64,
    /// `refined_max / corpus_max`; a passing lemma stays within `[1/2, 2]`.
    pub refinement_factor: f64,
    /// Ratio with a constant symbol/weight.
    pub constant_ratio: f64,
}

impl RatioReport {
    pub fn stable(&self) -> bool {
        self.corpus_max.is_finite()
            && self.refinement_factor >= 0.5
            && self.refinement_factor <= 2.0
    }
}

fn corpus_ratios(lemma: &Lemma, corpus: &TestCorpus, grid: &Arc<SpectralGrid>) -> Result<Vec<f64>> {
    corpus.check_grid(grid)?;
    (0..corpus.len())
        .into_par_iter()
        .map(|i| lemma.instance(corpus, i, grid))
        .collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max)
}

pub fn ratio_report(lemma: Lemma, corpus: &TestCorpus, n: usize) -> Result<RatioReport> {
    let l = corpus.spec.half_length;
    let grid = SpectralGrid::new(n, l)?;
    let fine = SpectralGrid::new(2 * n, l)?;
    let ratios = corpus_ratios(&lemma, corpus, &grid)?;
    let refined = corpus_ratios(&lemma, corpus, &fine)?;
    let corpus_max = max_of(&ratios);
    let refined_max = max_of(&refined);
    Ok(RatioReport {
        lemma,
        id: lemma.id(),
        seed: corpus.spec.seed,
        corpus_size: corpus.len(),
        n,
        ratios,
        corpus_max,
        refined_max,
        refinement_factor: refined_max / corpus_max,
        constant_ratio: lemma.constant_case(corpus, &grid)?,
    })
}
