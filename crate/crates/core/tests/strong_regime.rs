//! The large-λ split of the density and the asymptotic momentum transform.

use darboux::model::{effective_frequency, StateSpectrum};
use darboux::quadrature::{entropic_moment_numeric, HalfLineRule, Space};
use darboux::strong::{approx_wavefunction, approximation_error, harmonic_weight};
use darboux::ModelParams;

/// ∫₀^L on panels scaled to the Gaussian width.
fn half_line_rule(params: &ModelParams, n: u32) -> HalfLineRule {
    let root = effective_frequency(params, n).sqrt();
    let end = ((2.0 * f64::from(n) + 1.0).sqrt() + 10.0) / root;
    let width = 0.25 / root;
    let mut rule = HalfLineRule::new();
    let mut a = 0.0;
    while a < end {
        rule.push_panel(a, a + width, 20);
        a += width;
    }
    rule
}

#[test]
fn density_splits_into_harmonic_and_nonlinear_parts() {
    for lambda in [0.1, 1.0, 10.0] {
        let params = ModelParams::new(1.0, lambda).unwrap();
        for n in 0..=10 {
            let spec = StateSpectrum::new(&params, n);
            let rule = half_line_rule(&params, n);
            let harmonic_part = 2.0 * rule.integrate(|x| spec.density(x) / (1.0 + lambda * x * x));
            let nonlinear_part = 2.0 * rule.integrate(|x| {
                let t = lambda * x * x;
                spec.density(x) * t / (1.0 + t)
            });
            let split = harmonic_weight(&params, n);
            assert!((harmonic_part - split.f).abs() < 1e-9, "lambda={lambda} n={n}");
            assert!((nonlinear_part - split.complement).abs() < 1e-9, "lambda={lambda} n={n}");
        }
    }
}

#[test]
fn approximant_norm_is_the_complement() {
    for lambda in [0.1, 1.0, 10.0, 100.0] {
        let params = ModelParams::new(1.0, lambda).unwrap();
        for n in 0..=10 {
            let rule = half_line_rule(&params, n);
            let norm = 2.0 * rule.integrate(|x| approx_wavefunction(&params, n, x).powi(2));
            let expected = harmonic_weight(&params, n).complement;
            assert!((norm - expected).abs() < 1e-10, "lambda={lambda} n={n}: {norm} vs {expected}");
        }
    }
}

#[test]
fn approximation_improves_with_lambda() {
    for n in 0..=3 {
        let errors: Vec<f64> = [5.0, 10.0, 50.0, 100.0]
            .iter()
            .map(|&lambda| approximation_error(&ModelParams::new(1.0, lambda).unwrap(), n).unwrap())
            .collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "n={n}: {errors:?}");
    }
}

#[test]
fn parseval_at_large_lambda() {
    let params = ModelParams::new(1.0, 100.0).unwrap();
    for n in 0..=6 {
        let norm = entropic_moment_numeric(&params, n, 1.0, Space::Momentum).unwrap();
        assert!((norm - 1.0).abs() < 1e-6, "n={n}: {norm}");
    }
}
