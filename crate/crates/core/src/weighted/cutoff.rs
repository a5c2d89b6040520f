use serde::{Deserialize, Serialize};

/// `e^{-1/t}` for `t > 0`, else 0.
fn bump_edge(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff `ψ`: 1 on `[-inner, inner]`, 0 outside `[-outer, outer]`.
///
/// The companion `ψ̃(ξ) = ψ(ξ·inner/outer)` equals 1 on the support of `ψ`,
/// so `ψψ̃ = ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub inner: f64,
    pub outer: f64,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        Self {
            inner: 1.0,
            outer: 2.0,
        }
    }
}

impl CutoffSpec {
    pub fn psi(&self, xi: f64) -> f64 {
        let a = xi.abs();
        if a <= self.inner {
            return 1.0;
        }
        if a >= self.outer {
            return 0.0;
        }
        let width = self.outer - self.inner;
        let up = bump_edge((self.outer - a) / width);
        let down = bump_edge((a - self.inner) / width);
        up / (up + down)
    }

    pub fn psi_tilde(&self, xi: f64) -> f64 {
        self.psi(xi * self.inner / self.outer)
    }

    pub fn support(&self) -> (f64, f64) {
        (-self.outer, self.outer)
    }

    /// Points where pieces of `ψ` join, plus the origin.
    pub fn breakpoints(&self) -> [f64; 3] {
        [-self.inner, 0.0, self.inner]
    }
}
