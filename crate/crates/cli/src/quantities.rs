//! Entropic quantities with engine selection: closed forms for integer
//! orders in position space, quadrature everywhere else.

use darboux::entropy::{entropic_moment, renyi_position, tsallis_position, EntropyOrder};
use darboux::quadrature::{
    entropic_moment_numeric_with, renyi_numeric_with, shannon_numeric_with, tsallis_numeric_with, GridOptions,
    Space,
};
use darboux::{ModelParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Quadrature,
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Quadrature => "quadrature",
        }
    }
}

fn analytic_order(alpha: f64, space: Space, minimum: u32) -> Result<Option<u32>> {
    let order = EntropyOrder::new(alpha)?;
    Ok(match (space, order.integer()) {
        (Space::Position, Some(k)) if k >= minimum => Some(k),
        _ => None,
    })
}

/// W^(α) = ∫ density^α.
pub fn moment(params: &ModelParams, n: u32, alpha: f64, space: Space, opts: &GridOptions) -> Result<(f64, Engine)> {
    match analytic_order(alpha, space, 1)? {
        Some(k) => Ok((entropic_moment(params, n, k)?, Engine::Analytic)),
        None => Ok((entropic_moment_numeric_with(params, n, alpha, space, opts)?, Engine::Quadrature)),
    }
}

/// Rényi entropy; α = 1 gives its Shannon limit.
pub fn renyi(params: &ModelParams, n: u32, alpha: f64, space: Space, opts: &GridOptions) -> Result<(f64, Engine)> {
    if alpha == 1.0 {
        return shannon(params, n, space, opts).map(|s| (s, Engine::Quadrature));
    }
    match analytic_order(alpha, space, 2)? {
        Some(k) => Ok((renyi_position(params, n, k)?, Engine::Analytic)),
        None => Ok((renyi_numeric_with(params, n, alpha, space, opts)?, Engine::Quadrature)),
    }
}

/// Tsallis entropy; α = 1 gives its Shannon limit.
pub fn tsallis(params: &ModelParams, n: u32, alpha: f64, space: Space, opts: &GridOptions) -> Result<(f64, Engine)> {
    if alpha == 1.0 {
        return shannon(params, n, space, opts).map(|s| (s, Engine::Quadrature));
    }
    match analytic_order(alpha, space, 2)? {
        Some(k) => Ok((tsallis_position(params, n, k)?, Engine::Analytic)),
        None => Ok((tsallis_numeric_with(params, n, alpha, space, opts)?, Engine::Quadrature)),
    }
}

pub fn shannon(params: &ModelParams, n: u32, space: Space, opts: &GridOptions) -> Result<f64> {
    shannon_numeric_with(params, n, space, opts)
}
