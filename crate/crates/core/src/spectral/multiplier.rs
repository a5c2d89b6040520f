use std::sync::Arc;

use num_complex::Complex64;

use super::field::{Field, Spectrum};
use super::grid::SpectralGrid;
use super::symbol::{symbol_a, symbol_d2f, symbol_df, symbol_f};
use crate::error::{Error, Result};

/// Fourier-multiplier families used throughout the laboratory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MultiplierKind {
    /// `D^α`, symbol `|ξ|^α`.
    FracDeriv(f64),
    /// `J^s`, symbol `(1+ξ²)^{s/2}`.
    Bessel(f64),
    /// Hilbert transform, symbol `-i sgn ξ`.
    Hilbert,
    /// `A = -∂_x (1+D^α)^{-1}`, symbol `-iξ/(1+|ξ|^α)`.
    OpA(f64),
    /// `e^{tA}`, symbol `e^{-i a(ξ) t}`.
    Group { t: f64, alpha: f64 },
    /// `∂_ξ F(t,ξ)`.
    DxiF { t: f64, alpha: f64 },
    /// `∂²_ξ F(t,ξ)`.
    Dxi2F { t: f64, alpha: f64 },
    /// `∂_x^m`, symbol `(iξ)^m`.
    Derivative(u32),
    /// `(1+D^α)^{-1}`, symbol `1/(1+|ξ|^α)`.
    Resolvent(f64),
}

impl MultiplierKind {
    /// Symbol evaluated at a single wavenumber, ignoring lattice conventions.
    pub fn symbol_at(&self, xi: f64) -> Complex64 {
        let re = |v: f64| Complex64::new(v, 0.0);
        match *self {
            MultiplierKind::FracDeriv(alpha) => re(xi.abs().powf(alpha)),
            MultiplierKind::Bessel(s) => re((1.0 + xi * xi).powf(0.5 * s)),
            MultiplierKind::Hilbert => Complex64::new(0.0, -sgn(xi)),
            MultiplierKind::OpA(alpha) => Complex64::new(0.0, -symbol_a(xi, alpha)),
            MultiplierKind::Group { t, alpha } => symbol_f(xi, t, alpha),
            MultiplierKind::DxiF { t, alpha } => symbol_df(xi, t, alpha),
            MultiplierKind::Dxi2F { t, alpha } => symbol_d2f(xi, t, alpha),
            MultiplierKind::Derivative(m) => Complex64::new(0.0, xi).powu(m),
            MultiplierKind::Resolvent(alpha) => re(1.0 / (1.0 + xi.abs().powf(alpha))),
        }
    }

    /// Odd symbols (purely imaginary or with odd phase) lose the unpaired mode.
    fn nyquist_value(&self, xi: f64) -> Complex64 {
        match *self {
            MultiplierKind::Hilbert | MultiplierKind::OpA(_) => Complex64::new(0.0, 0.0),
            MultiplierKind::Derivative(m) if m % 2 == 1 => Complex64::new(0.0, 0.0),
            MultiplierKind::Derivative(m) => Complex64::new(0.0, xi).powu(m),
            MultiplierKind::Group { .. } => Complex64::new(1.0, 0.0),
            _ => self.symbol_at(xi),
        }
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A multiplier kind tabulated on a particular grid.
#[derive(Clone, Debug)]
pub struct Multiplier {
    kind: MultiplierKind,
    grid: Arc<SpectralGrid>,
    symbol: Vec<Complex64>,
}

impl Multiplier {
    pub fn new(kind: MultiplierKind, grid: &Arc<SpectralGrid>) -> Result<Self> {
        let nyq = grid.nyquist_index();
        let symbol: Vec<Complex64> = grid
            .xis()
            .iter()
            .enumerate()
            .map(|(idx, &xi)| {
                if idx == nyq {
                    kind.nyquist_value(xi)
                } else {
                    kind.symbol_at(xi)
                }
            })
            .collect();
        if symbol.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("multiplier symbol"));
        }
        Ok(Self {
            kind,
            grid: grid.clone(),
            symbol,
        })
    }

    pub fn kind(&self) -> MultiplierKind {
        self.kind
    }

    pub fn symbol(&self) -> &[Complex64] {
        &self.symbol
    }

    pub fn apply(&self, spec: &Spectrum) -> Result<Spectrum> {
        apply_multiplier(spec, self)
    }

    /// Transform, multiply, and transform back.
    pub fn apply_field(&self, field: &Field) -> Result<Field> {
        Ok(self.apply(&field.forward())?.inverse())
    }
}

pub fn apply_multiplier(spec: &Spectrum, m: &Multiplier) -> Result<Spectrum> {
    m.grid.ensure_same(spec.grid())?;
    let coeffs = spec
        .coeffs()
        .iter()
        .zip(&m.symbol)
        .map(|(c, s)| c * s)
        .collect();
    Ok(Spectrum::from_raw(spec.grid().clone(), coeffs))
}

/// Applies `kind` to a real field through the transform.
pub fn apply_to_field(field: &Field, kind: MultiplierKind) -> Result<Field> {
    Multiplier::new(kind, field.grid())?.apply_field(field)
}

/// `e^{tA}` applied in spectrum space.
pub fn group_propagate(spec: &Spectrum, t: f64, alpha: f64) -> Result<Spectrum> {
    if !t.is_finite() {
        return Err(Error::NonFinite("propagation time"));
    }
    let m = Multiplier::new(MultiplierKind::Group { t, alpha }, spec.grid())?;
    apply_multiplier(spec, &m)
}
