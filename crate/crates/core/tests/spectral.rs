use std::sync::Arc;

use fbbm_core::spectral::{apply_to_field, group_propagate, MultiplierKind};
use fbbm_core::{Field, SpectralGrid};
use proptest::prelude::*;

fn grid(n: usize, l: f64) -> Arc<SpectralGrid> {
    SpectralGrid::new(n, l).unwrap()
}

/// Band-limited field from a handful of cosine/sine modes, no mean, no Nyquist.
fn trig_field(g: &Arc<SpectralGrid>, modes: &[(u32, f64, f64)]) -> Field {
    let base = std::f64::consts::PI / g.half_length();
    Field::from_fn(g.clone(), |x| {
        modes
            .iter()
            .map(|&(k, a, p)| a * (base * k as f64 * x + p).cos())
            .sum()
    })
    .unwrap()
}

fn max_diff(a: &Field, b: &Field) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn modes() -> impl Strategy<Value = Vec<(u32, f64, f64)>> {
    prop::collection::vec((1u32..60, -2.0f64..2.0, 0.0f64..6.3), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip_and_parseval(m in modes(), l in 1.0f64..200.0) {
        let g = grid(256, l);
        let f = trig_field(&g, &m);
        let s = f.forward();
        let back = s.inverse();
        let scale = f.sup_norm().max(1e-300);
        prop_assert!(max_diff(&f, &back) <= 1e-13 * scale.max(1.0));
        let phys = f.l2_norm();
        prop_assert!((s.l2_norm() - phys).abs() <= 1e-12 * phys.max(1e-300));
    }

    #[test]
    fn group_is_unitary_and_a_group(m in modes(), s in -50.0f64..50.0, t in -50.0f64..50.0, alpha in 0.05f64..2.0) {
        let g = grid(256, 30.0);
        let f = trig_field(&g, &m).forward();
        let ft = group_propagate(&f, t, alpha).unwrap();
        prop_assert!((ft.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
        let two = group_propagate(&group_propagate(&f, s, alpha).unwrap(), t, alpha).unwrap();
        let one = group_propagate(&f, s + t, alpha).unwrap();
        let err = max_diff(&two.inverse(), &one.inverse());
        prop_assert!(err <= 1e-11 * f.inverse().sup_norm().max(1.0));
    }

    #[test]
    fn fractional_derivatives_compose(m in modes(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let g = grid(256, 20.0);
        let f = trig_field(&g, &m);
        let ab = apply_to_field(&apply_to_field(&f, MultiplierKind::FracDeriv(a)).unwrap(), MultiplierKind::FracDeriv(b)).unwrap();
        let direct = apply_to_field(&f, MultiplierKind::FracDeriv(a + b)).unwrap();
        prop_assert!(max_diff(&ab, &direct) <= 1e-11 * direct.sup_norm().max(1.0));
    }

    #[test]
    fn hilbert_squares_to_minus_identity_on_mean_free_fields(m in modes()) {
        let g = grid(256, 20.0);
        let f = trig_field(&g, &m);
        let hh = apply_to_field(&apply_to_field(&f, MultiplierKind::Hilbert).unwrap(), MultiplierKind::Hilbert).unwrap();
        prop_assert!(max_diff(&hh, &f.map(|v| -v)) <= 1e-12 * f.sup_norm().max(1.0));
    }

    #[test]
    fn a_equals_minus_derivative_after_resolvent(m in modes(), alpha in 0.05f64..2.0) {
        let g = grid(256, 20.0);
        let f = trig_field(&g, &m);
        let a = apply_to_field(&f, MultiplierKind::OpA(alpha)).unwrap();
        let r = apply_to_field(&f, MultiplierKind::Resolvent(alpha)).unwrap();
        let dr = apply_to_field(&r, MultiplierKind::Derivative(1)).unwrap().map(|v| -v);
        prop_assert!(max_diff(&a, &dr) <= 1e-12 * f.sup_norm().max(1.0));
    }
}

#[test]
fn bessel_potential_of_a_mode_is_its_eigenvalue() {
    let g = grid(512, 10.0);
    let xi = 7.0 * std::f64::consts::PI / 10.0;
    let f = Field::from_fn(g, |x| (xi * x).sin()).unwrap();
    for s in [-1.0, 0.5, 2.0] {
        let out = apply_to_field(&f, MultiplierKind::Bessel(s)).unwrap();
        let lam = (1.0 + xi * xi).powf(0.5 * s);
        assert!(max_diff(&out, &f.map(|v| lam * v)) <= 1e-12 * lam.max(1.0));
    }
}

#[test]
fn group_moves_long_waves_at_unit_speed() {
    // a(ξ) ≈ ξ for small ξ: a very long wave is transported to the right
    let g = grid(1024, 2000.0);
    let f = Field::from_fn(g.clone(), |x| (-(x / 200.0).powi(2)).exp()).unwrap();
    let t = 50.0;
    let moved = group_propagate(&f.forward(), t, 0.5).unwrap().inverse();
    let shifted = Field::from_fn(g, |x| (-((x - t) / 200.0).powi(2)).exp()).unwrap();
    assert!(max_diff(&moved, &shifted) < 2e-2);
}
