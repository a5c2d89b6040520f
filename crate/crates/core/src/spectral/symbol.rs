//! Closed-form symbols of the linear fBBM flow.
//!
//! `a(ξ) = ξ/(1+|ξ|^α)` is the dispersion relation and
//! `F(t,ξ) = e^{-i a(ξ) t}` the symbol of the group `e^{tA}`.

use num_complex::Complex64;

/// Dispersion relation `ξ/(1+|ξ|^α)`.
pub fn symbol_a(xi: f64, alpha: f64) -> f64 {
    xi / (1.0 + xi.abs().powf(alpha))
}

/// `a'(ξ) = (1+(1-α)|ξ|^α)/(1+|ξ|^α)²`, the linear group velocity.
pub fn group_velocity(xi: f64, alpha: f64) -> f64 {
    let p = xi.abs().powf(alpha);
    (1.0 + (1.0 - alpha) * p) / ((1.0 + p) * (1.0 + p))
}

/// Group symbol `F(t,ξ)`.
pub fn symbol_f(xi: f64, t: f64, alpha: f64) -> Complex64 {
    Complex64::from_polar(1.0, -symbol_a(xi, alpha) * t)
}

/// `∂_ξ F(t,ξ) = -it a'(ξ) F(t,ξ)`.
pub fn symbol_df(xi: f64, t: f64, alpha: f64) -> Complex64 {
    Complex64::new(0.0, -t) * group_velocity(xi, alpha) * symbol_f(xi, t, alpha)
}

/// `∂²_ξ F(t,ξ)`.
///
/// The two terms carrying `|ξ|^{α-1} sgn ξ` and `|ξ|^{2α-1} sgn ξ` are set to
/// zero at `ξ = 0`, where only `(-it)² F` remains.
pub fn symbol_d2f(xi: f64, t: f64, alpha: f64) -> Complex64 {
    let f = symbol_f(xi, t, alpha);
    let p = xi.abs().powf(alpha);
    let denom = 1.0 + p;
    let first = group_velocity(xi, alpha);
    let mut out = -t * t * first * first * f;
    if xi != 0.0 {
        let sgn = xi.signum();
        let d3 = denom * denom * denom;
        let cusp = alpha * (alpha + 1.0) * xi.abs().powf(alpha - 1.0) * sgn / d3
            + alpha * (1.0 - alpha) * xi.abs().powf(2.0 * alpha - 1.0) * sgn / d3;
        out += Complex64::new(0.0, t) * cusp * f;
    }
    out
}
