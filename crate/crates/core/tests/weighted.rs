use fbbm_core::weighted::{
    interpolation_ratio, stein_derivative, stein_pointwise, weighted_norm, CompactFunction,
    SteinQuadrature, TruncatedWeight,
};
use fbbm_core::{Field, SpectralGrid};
use proptest::prelude::*;

fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 - x * x).powi(4)
    } else {
        0.0
    }
}

/// Largest relative gap between the grid and pointwise Stein derivatives
/// over a few probes, on a box of half-length 64 with `n` points.
fn grid_vs_pointwise(n: usize, b: f64) -> f64 {
    // the grid sum covers y ∈ [-L, L); beyond it f = 0 and the integrand is
    // f(x)²|x-y|^{-1-2b}, which is added back in closed form
    let l = 64.0;
    let g = SpectralGrid::new(n, l).unwrap();
    let f = Field::from_fn(g.clone(), bump).unwrap();
    let c = CompactFunction::new(bump, (-1.0, 1.0), &[]);
    let d = stein_derivative(&f, b).unwrap();
    let xs = g.xs();
    [-0.5, 0.0, 0.3, 0.9, 1.5, 3.0]
        .iter()
        .map(|&probe| {
            let j = xs.iter().position(|&x| (x - probe).abs() < 0.5 * g.dx()).unwrap();
            let x = xs[j];
            let exact = stein_pointwise(&c, b, x, SteinQuadrature::default());
            let far = bump(x).powi(2) * ((l - x).powf(-2.0 * b) + (l + x).powf(-2.0 * b)) / (2.0 * b);
            ((d.values()[j].powi(2) + far).sqrt() - exact).abs() / exact
        })
        .fold(0.0, f64::max)
}

#[test]
fn grid_stein_derivative_converges_to_the_pointwise_one() {
    // near the diagonal the midpoint rule errs like dx^{2-2b}
    for b in [0.25, 0.5, 0.75] {
        let coarse = grid_vs_pointwise(4096, b);
        let fine = grid_vs_pointwise(8192, b);
        assert!(fine < 1e-2, "b={b}: gap {fine:e}");
        assert!(fine < 0.9 * coarse, "b={b}: {coarse:e} -> {fine:e} does not shrink");
    }
}

#[test]
fn stein_derivative_scales_with_dilation() {
    // 𝒟^b(f(λ·))(η) = λ^b (𝒟^b f)(λη)
    let q = SteinQuadrature::default();
    let f = CompactFunction::new(bump, (-1.0, 1.0), &[]);
    let lambda = 2.5;
    let g = CompactFunction::new(move |x| bump(lambda * x), (-1.0 / lambda, 1.0 / lambda), &[]);
    for b in [0.3, 0.7] {
        for eta in [0.0, 0.1, 0.35, 2.0] {
            let lhs = stein_pointwise(&g, b, eta, q);
            let rhs = lambda.powf(b) * stein_pointwise(&f, b, lambda * eta, q);
            assert!((lhs - rhs).abs() < 1e-8 * rhs, "b={b}, η={eta}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn weighted_norm_of_a_gaussian_matches_the_integral() {
    // r = 1: ∫ (1+x²) e^{-2x²} dx = √(π/2) (1 + 1/4)
    let g = SpectralGrid::new(2048, 30.0).unwrap();
    let f = Field::from_fn(g, |x| (-(x * x)).exp()).unwrap();
    let exact = ((std::f64::consts::PI / 2.0).sqrt() * 1.25).sqrt();
    assert!((weighted_norm(&f, 1.0) - exact).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn truncated_weight_is_lipschitz_with_constant_theta(
        theta in 0.05f64..1.0,
        radius in prop::sample::select(vec![10.0, 20.0, 40.0]),
        x in -200.0f64..200.0,
    ) {
        let w = TruncatedWeight::new(theta, radius).unwrap();
        prop_assert!(w.derivative(x).abs() <= theta * (1.0 + 1e-12));
        prop_assert!(w.value(x) <= w.plateau() * (1.0 + 1e-12));
        prop_assert!(w.value(x) >= 1.0 - 1e-12);
    }

    #[test]
    fn interpolation_ratio_is_dilation_stable(lambda in 0.5f64..2.0) {
        let g = SpectralGrid::new(2048, 40.0).unwrap();
        let f = Field::from_fn(g.clone(), |x| (-(x * x)).exp()).unwrap();
        let h = Field::from_fn(g, |x| (-(lambda * x).powi(2)).exp()).unwrap();
        let a = interpolation_ratio(&f, 1.0, 0.5, 0.5).unwrap();
        let b = interpolation_ratio(&h, 1.0, 0.5, 0.5).unwrap();
        prop_assert!(a.is_finite() && b.is_finite());
        prop_assert!(b / a <= 2.0 && a / b <= 2.0);
    }
}
