//! Position-space node layouts aligned with the zeros of the density.

use crate::model::StateSpectrum;
use crate::quadrature::grid::HalfLineRule;
use crate::quadrature::rules::gauss_hermite;
use crate::quadrature::GridOptions;

/// Positive zeros of `H_n(√Ω x)`, ascending (0 is included for odd `n`).
pub fn density_zeros(spec: &StateSpectrum) -> Vec<f64> {
    if spec.n == 0 {
        return Vec::new();
    }
    let scale = 1.0 / spec.sqrt_effective_frequency();
    let (nodes, _) = gauss_hermite(spec.n as usize);
    let mut zeros: Vec<f64> = nodes.into_iter().filter(|x| *x >= 0.0).map(|x| x * scale).collect();
    if spec.n % 2 == 1 {
        zeros[0] = 0.0;
    }
    zeros
}

/// Truncation point beyond which `ρ^α` is below `epsilon` of its scale.
pub fn position_half_width(spec: &StateSpectrum, alpha_floor: f64, epsilon: f64) -> f64 {
    let turning = (2.0 * f64::from(spec.n) + 1.0).sqrt();
    let decay = ((1.0 / epsilon).ln() / alpha_floor).sqrt();
    (turning + decay + 1.0) / spec.sqrt_effective_frequency()
}

/// Half-line rule for integrals of functions of `ρ_n` that are even in x.
pub fn position_rule(spec: &StateSpectrum, alpha_floor: f64, opts: &GridOptions) -> HalfLineRule {
    let zeros = density_zeros(spec);
    let l = opts
        .half_width
        .unwrap_or_else(|| position_half_width(spec, alpha_floor, opts.tail_epsilon));
    let mut rule = HalfLineRule::new();
    let mut left = 0.0;
    let mut left_is_zero = false;
    for &z in &zeros {
        if z <= left {
            left_is_zero = true;
            continue;
        }
        if z >= l {
            break;
        }
        rule.push_clustered_panel(left, z, opts.panel_points);
        left = z;
        left_is_zero = true;
    }
    let h = 1.0 / (alpha_floor * spec.effective_frequency).sqrt();
    while left < l {
        let right = (left + h).min(l);
        if left_is_zero {
            rule.push_clustered_panel(left, right, opts.panel_points);
            left_is_zero = false;
        } else {
            rule.push_panel(left, right, opts.tail_points);
        }
        left = right;
    }
    rule
}

/// A density sampled on a position layout.
#[derive(Debug, Clone)]
pub struct PositionProfile {
    pub rule: HalfLineRule,
    pub density: Vec<f64>,
}

impl PositionProfile {
    pub fn new(spec: &StateSpectrum, alpha_floor: f64, opts: &GridOptions) -> Self {
        let rule = position_rule(spec, alpha_floor, opts);
        let density = rule.nodes.iter().map(|&x| spec.density(x)).collect();
        Self { rule, density }
    }

    /// ∫ρ^α over the real line.
    pub fn moment(&self, alpha: f64) -> f64 {
        2.0 * self
            .rule
            .weights
            .iter()
            .zip(&self.density)
            .map(|(w, r)| if *r > 0.0 { w * r.powf(alpha) } else { 0.0 })
            .sum::<f64>()
    }

    /// −∫ρ ln ρ with 0 ln 0 = 0.
    pub fn shannon(&self) -> f64 {
        -2.0 * self
            .rule
            .weights
            .iter()
            .zip(&self.density)
            .map(|(w, r)| if *r > 0.0 { w * r * r.ln() } else { 0.0 })
            .sum::<f64>()
    }
}
