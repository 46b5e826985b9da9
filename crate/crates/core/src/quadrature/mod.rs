//! Numerical integration: position-space integrals of `ρ^α` for real α, the
//! Fourier transform to momentum space and momentum-space entropies.
//!
//! Position integrals are split at the zeros of `H_n(√Ω x)` and each piece
//! is integrated with an endpoint-clustered Gauss–Legendre rule, so the
//! `|x − x₀|^{2α}` behaviour of non-integer powers costs no accuracy. Momentum
//! densities are tabulated directly on their own integration nodes, split
//! the same way at the sign changes of Ψ̃.

mod grid;
mod momentum;
mod position;
pub mod rules;

pub use grid::{integrate, GridSpec, HalfLineRule, Rule, MIN_POINTS};
pub use momentum::{
    fourier_transform, momentum_density, momentum_half_width_seed, momentum_profile,
    momentum_profile_uncached, set_profile_cache_enabled, wavefunction_kernel, FourierKernel,
    MomentumProfile,
};
pub use position::{density_zeros, position_half_width, position_rule, PositionProfile};

use crate::error::{Error, Result};
use crate::model::{ModelParams, StateSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    Position,
    Momentum,
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "position" => Ok(Space::Position),
            "momentum" => Ok(Space::Momentum),
            other => Err(Error::domain("quadrature", format!("unknown space '{other}'"))),
        }
    }
}

/// Knobs of the automatic grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Nodes per panel adjacent to a density zero.
    pub panel_points: usize,
    /// Nodes per ordinary panel.
    pub tail_points: usize,
    /// Nodes per panel of the position grid behind the Fourier transform.
    pub fourier_points: usize,
    /// Relative size of the position-space envelope at the truncation point.
    pub tail_epsilon: f64,
    /// Relative size of `|Ψ̃|^{2α}` at the momentum truncation point.
    pub momentum_tail: f64,
    /// Fixed position half-width instead of the automatic one.
    pub half_width: Option<f64>,
    /// Fixed momentum half-width instead of the automatic one.
    pub momentum_half_width: Option<f64>,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            panel_points: 64,
            tail_points: 32,
            fourier_points: 20,
            tail_epsilon: 1e-18,
            momentum_tail: 1e-16,
            half_width: None,
            momentum_half_width: None,
        }
    }
}

impl GridOptions {
    /// Every node count doubled.
    pub fn refined(&self) -> Self {
        Self {
            panel_points: 2 * self.panel_points,
            tail_points: 2 * self.tail_points,
            fourier_points: 2 * self.fourier_points,
            ..*self
        }
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.panel_points.hash(&mut h);
        self.tail_points.hash(&mut h);
        self.fourier_points.hash(&mut h);
        self.tail_epsilon.to_bits().hash(&mut h);
        self.momentum_tail.to_bits().hash(&mut h);
        self.half_width.map(f64::to_bits).hash(&mut h);
        self.momentum_half_width.map(f64::to_bits).hash(&mut h);
        h.finish()
    }
}

/// Grids are sized for the smallest order they must serve; orders are
/// grouped so one grid covers many requests.
pub fn alpha_floor(alpha: f64) -> f64 {
    if alpha >= 1.0 {
        1.0
    } else if alpha >= 0.5 {
        0.5
    } else {
        alpha
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain("quadrature", format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

fn check_not_one(alpha: f64) -> Result<()> {
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Err(Error::domain("quadrature", "alpha = 1 is the Shannon limit; use shannon_numeric"));
    }
    Ok(())
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::non_finite("quadrature", format!("{what} evaluated to {v}")))
    }
}

/// ∫ density^α over the given space with explicit grid options.
pub fn entropic_moment_numeric_with(
    params: &ModelParams,
    n: u32,
    alpha: f64,
    space: Space,
    opts: &GridOptions,
) -> Result<f64> {
    check_alpha(alpha)?;
    let floor = alpha_floor(alpha);
    let w = match space {
        Space::Position => PositionProfile::new(&StateSpectrum::new(params, n), floor, opts).moment(alpha),
        Space::Momentum => momentum_profile(params, n, floor, opts)?.moment(alpha),
    };
    finite(w, "entropic moment")
}

/// ∫ density^α with default grids.
pub fn entropic_moment_numeric(params: &ModelParams, n: u32, alpha: f64, space: Space) -> Result<f64> {
    entropic_moment_numeric_with(params, n, alpha, space, &GridOptions::default())
}

pub fn renyi_numeric_with(params: &ModelParams, n: u32, alpha: f64, space: Space, opts: &GridOptions) -> Result<f64> {
    check_not_one(alpha)?;
    let w = entropic_moment_numeric_with(params, n, alpha, space, opts)?;
    Ok(w.ln() / (1.0 - alpha))
}

/// R^(α) = ln W^(α) / (1 − α) from the numeric moment.
pub fn renyi_numeric(params: &ModelParams, n: u32, alpha: f64, space: Space) -> Result<f64> {
    renyi_numeric_with(params, n, alpha, space, &GridOptions::default())
}

pub fn tsallis_numeric_with(params: &ModelParams, n: u32, alpha: f64, space: Space, opts: &GridOptions) -> Result<f64> {
    check_not_one(alpha)?;
    let w = entropic_moment_numeric_with(params, n, alpha, space, opts)?;
    Ok((1.0 - w) / (alpha - 1.0))
}

/// T^(α) = (1 − W^(α)) / (α − 1) from the numeric moment.
pub fn tsallis_numeric(params: &ModelParams, n: u32, alpha: f64, space: Space) -> Result<f64> {
    tsallis_numeric_with(params, n, alpha, space, &GridOptions::default())
}

pub fn shannon_numeric_with(params: &ModelParams, n: u32, space: Space, opts: &GridOptions) -> Result<f64> {
    let s = match space {
        Space::Position => PositionProfile::new(&StateSpectrum::new(params, n), 1.0, opts).shannon(),
        Space::Momentum => momentum_profile(params, n, 1.0, opts)?.shannon(),
    };
    finite(s, "Shannon entropy")
}

/// −∫ρ ln ρ with the convention 0 ln 0 = 0.
pub fn shannon_numeric(params: &ModelParams, n: u32, space: Space) -> Result<f64> {
    shannon_numeric_with(params, n, space, &GridOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(lambda: f64) -> ModelParams {
        ModelParams::new(1.0, lambda).unwrap()
    }

    #[test]
    fn harmonic_ground_disequilibrium() {
        let w = entropic_moment_numeric(&p(0.0), 0, 2.0, Space::Position).unwrap();
        assert!((w - (0.5 / PI).sqrt()).abs() < 1e-13);
        let wm = entropic_moment_numeric(&p(0.0), 0, 2.0, Space::Momentum).unwrap();
        assert!((wm - (0.5 / PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normalization_in_both_spaces() {
        for n in [0u32, 1, 5] {
            for space in [Space::Position, Space::Momentum] {
                let w = entropic_moment_numeric(&p(0.4), n, 1.0, space).unwrap();
                assert!((w - 1.0).abs() < 1e-8, "n={n} {space:?}: {w}");
            }
        }
    }

    #[test]
    fn printed_numeric_entropies() {
        let r = renyi_numeric(&p(0.0), 0, 0.5, Space::Position).unwrap();
        assert!((r - 1.266).abs() < 1.5e-3);
        let r = renyi_numeric(&p(0.4), 0, 2.0, Space::Momentum).unwrap();
        assert!((r - 0.670).abs() < 1.5e-3);
        let r = renyi_numeric(&p(0.5), 0, 2.0, Space::Momentum).unwrap();
        assert!((r - 0.6207).abs() < 1.5e-4);
    }

    #[test]
    fn gaussian_self_transform() {
        let g = GridSpec::new(12.0, 2048, Rule::GaussLegendrePanels).unwrap();
        for &k in &[0.0, 0.7, 2.5] {
            let v = fourier_transform(&p(0.0), 0, &g, k).unwrap();
            assert!((v.re - PI.powf(-0.25) * (-0.5 * k * k).exp()).abs() < 1e-13);
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn hermite_functions_are_eigenfunctions() {
        let g = GridSpec::new(14.0, 4096, Rule::GaussLegendrePanels).unwrap();
        for n in 0..6u32 {
            for &k in &[0.3, 1.1, 2.9] {
                let v = fourier_transform(&p(0.0), n, &g, k).unwrap();
                let phase = match n % 4 {
                    0 => num_complex::Complex64::new(1.0, 0.0),
                    1 => num_complex::Complex64::new(0.0, -1.0),
                    2 => num_complex::Complex64::new(-1.0, 0.0),
                    _ => num_complex::Complex64::new(0.0, 1.0),
                };
                let expected = phase * crate::model::wavefunction(&p(0.0), n, k);
                assert!((v - expected).norm() < 1e-12, "n={n} p={k}");
            }
        }
    }

    #[test]
    fn oscillation_guard() {
        let g = GridSpec::new(10.0, 64, Rule::GaussLegendrePanels).unwrap();
        let err = fourier_transform(&p(0.0), 0, &g, 50.0).unwrap_err();
        assert!(matches!(err, Error::UnresolvedOscillation { .. }));
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(renyi_numeric(&p(0.0), 0, 1.0, Space::Position).is_err());
        assert!(entropic_moment_numeric(&p(0.0), 0, -1.0, Space::Position).is_err());
        assert!("sideways".parse::<Space>().is_err());
    }
}
