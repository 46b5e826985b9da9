//! Dawson's integral F(x) = e^{-x²} ∫₀ˣ e^{t²} dt.

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

// Sampling step of the odd-index Gaussian sum. The truncation error scales
// like exp(-(π / 2h)²) ≈ 1e-27 at h = 0.2.
const STEP: f64 = 0.2;
// Gaussians further than this many units from x contribute below 1e-27.
const REACH: f64 = 8.0;
const ASYMPTOTIC_FROM: f64 = 50.0;

/// Dawson's integral, odd in `x`, absolute error ≲ 1e-15.
pub fn dawson(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x < 0.0 {
        return -dawson(-x);
    }
    if x >= ASYMPTOTIC_FROM {
        return asymptotic(x);
    }
    // F(x) = π^{-1/2} Σ_{n odd} e^{-(x - nh)²} / n
    let center = (x / STEP).round() as i64;
    let span = (REACH / STEP).ceil() as i64 + 1;
    let mut sum = 0.0;
    for n in (center - span)..=(center + span) {
        if n % 2 == 0 {
            continue;
        }
        let d = x - n as f64 * STEP;
        sum += (-d * d).exp() / n as f64;
    }
    sum * FRAC_1_SQRT_PI
}

// 1/(2x) Σ (2k-1)!! / (2x²)^k
fn asymptotic(x: f64) -> f64 {
    let r = 1.0 / (x * x);
    let series = 1.0 + r * (0.5 + r * (0.75 + r * (1.875 + r * (6.5625 + r * 29.531_25))));
    series / (2.0 * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::rules::gauss_legendre;
    use proptest::prelude::*;

    // Oracle: e^{-x²}∫₀ˣ e^{t²} dt = ∫₀ˣ e^{(t-x)(t+x)} dt by composite Gauss–Legendre.
    fn dawson_by_quadrature(x: f64) -> f64 {
        let (nodes, weights) = gauss_legendre(24);
        let panels = 64;
        let h = x / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let a = p as f64 * h;
            for (t, w) in nodes.iter().zip(&weights) {
                let u = a + 0.5 * h * (t + 1.0);
                total += 0.5 * h * w * ((u - x) * (u + x)).exp();
            }
        }
        total
    }

    #[test]
    fn zero_and_symmetry() {
        assert_eq!(dawson(0.0), 0.0);
        for &x in &[0.1, 0.9, 2.0, 7.5, 60.0] {
            assert_eq!(dawson(-x), -dawson(x));
        }
    }

    #[test]
    fn matches_quadrature_oracle() {
        for &x in &[1e-3, 0.2, 0.5, 0.9241, 1.7, 3.0, 6.0, 12.0, 25.0] {
            let o = dawson_by_quadrature(x);
            assert!((dawson(x) - o).abs() < 1e-12, "x = {x}: {} vs {o}", dawson(x));
        }
    }

    #[test]
    fn asymptotic_branch_joins_smoothly() {
        let x = ASYMPTOTIC_FROM - 1e-9;
        assert!((dawson(x) - asymptotic(x)).abs() < 1e-15);
    }

    #[test]
    fn maximum_matches_grid_oracle() {
        // maximize the quadrature oracle over a fine grid, then refine by
        // golden-section on the oracle itself
        let mut best = (0.0, 0.0);
        for i in 800..1100 {
            let x = f64::from(i) * 1e-3;
            let v = dawson_by_quadrature(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        let (mut a, mut b) = (best.0 - 1e-3, best.0 + 1e-3);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..60 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if dawson_by_quadrature(c) > dawson_by_quadrature(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let argmax = 0.5 * (a + b);
        let peak = dawson_by_quadrature(argmax);
        assert!((argmax - 0.924_138_873).abs() < 1e-6);
        assert!((peak - 0.541_044_224_6).abs() < 1e-10);
        assert!((dawson(argmax) - peak).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn ode_residual(x in -30.0f64..30.0) {
            let h = 1e-5;
            let deriv = (dawson(x + h) - dawson(x - h)) / (2.0 * h);
            prop_assert!((deriv - (1.0 - 2.0 * x * dawson(x))).abs() < 1e-8);
        }
    }
}
