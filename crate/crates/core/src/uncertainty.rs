//! Conjugate entropic orders and the uncertainty functions ξ, the slack
//! between the two sides of the Rényi and Tsallis entropic uncertainty
//! relations. ξ ≥ 0 always; ξ = 0 means the relation is saturated.

use crate::entropy::{log_entropic_moment, EntropyOrder};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quadrature::{entropic_moment_numeric, Space};
use std::f64::consts::PI;

const MODULE: &str = "uncertainty";

/// Slack below zero tolerated before a ξ value is reported as a violation.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-9;

/// Orders α and β tied by `1/α + 1/β = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugatePair {
    pub alpha: f64,
    pub beta: f64,
}

/// The partner β = α / (2α − 1) of an order α > ½.
pub fn conjugate_order(alpha: f64) -> Result<ConjugatePair> {
    if !(alpha > 0.5) || !alpha.is_finite() {
        return Err(Error::domain(MODULE, format!("conjugate order needs alpha > 1/2, got {alpha}")));
    }
    Ok(ConjugatePair {
        alpha,
        beta: alpha / (2.0 * alpha - 1.0),
    })
}

/// Which engine produced the position-space term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnginePath {
    Analytic,
    Quadrature,
}

/// A ξ value with the path used for its position-space term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiValue {
    pub xi: f64,
    pub pair: ConjugatePair,
    pub position_path: EnginePath,
}

/// ln W^(α)[ρ_n], analytic for integer α ≥ 2 and numeric otherwise.
fn log_position_moment(params: &ModelParams, n: u32, alpha: f64) -> Result<(f64, EnginePath)> {
    match EntropyOrder::new(alpha)?.integer() {
        Some(k) if k >= 2 => Ok((log_entropic_moment(params, n, k)?, EnginePath::Analytic)),
        _ => Ok((
            entropic_moment_numeric(params, n, alpha, Space::Position)?.ln(),
            EnginePath::Quadrature,
        )),
    }
}

fn check_sign(xi: f64, what: &str) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::non_finite(MODULE, format!("{what} evaluated to {xi}")));
    }
    if xi < -NEGATIVITY_TOLERANCE {
        return Err(Error::instability(MODULE, format!("{what} = {xi} violates the uncertainty bound")));
    }
    Ok(xi)
}

/// ln(π α^{1/(2α−2)} β^{1/(2β−2)}), the Rényi lower bound.
pub fn renyi_bound(pair: &ConjugatePair) -> f64 {
    let ConjugatePair { alpha, beta } = *pair;
    PI.ln() + alpha.ln() / (2.0 * alpha - 2.0) + beta.ln() / (2.0 * beta - 2.0)
}

/// ξ[R^(α)] = R^(α)[ρ] + R^(β)[γ] − ln(π α^{1/(2α−2)} β^{1/(2β−2)}).
pub fn xi_renyi_detailed(params: &ModelParams, n: u32, alpha: f64) -> Result<XiValue> {
    let pair = conjugate_order(alpha)?;
    if alpha == 1.0 {
        return Err(Error::domain(MODULE, "alpha = 1 is the Shannon limit of the Rényi relation"));
    }
    let (log_w, position_path) = log_position_moment(params, n, alpha)?;
    let r_pos = log_w / (1.0 - alpha);
    let w_mom = entropic_moment_numeric(params, n, pair.beta, Space::Momentum)?;
    let r_mom = w_mom.ln() / (1.0 - pair.beta);
    let xi = check_sign(r_pos + r_mom - renyi_bound(&pair), "Rényi uncertainty function")?;
    Ok(XiValue { xi, pair, position_path })
}

/// ξ[R^(α)] as a plain number.
pub fn xi_renyi(params: &ModelParams, n: u32, alpha: f64) -> Result<f64> {
    xi_renyi_detailed(params, n, alpha).map(|v| v.xi)
}

/// ξ[T^(α)] = (α/π)^{1/4α} W_ρ(α)^{1/2α} − (β/π)^{1/4β} W_γ(β)^{1/2β}, using
/// `(1−α)T^(α) + 1 = W^(α)`. Only defined for ½ < α ≤ 1.
pub fn xi_tsallis_detailed(params: &ModelParams, n: u32, alpha: f64) -> Result<XiValue> {
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(Error::domain(MODULE, format!("Tsallis relation needs 1/2 < alpha <= 1, got {alpha}")));
    }
    let pair = conjugate_order(alpha)?;
    if alpha == 1.0 {
        return Ok(XiValue { xi: 0.0, pair, position_path: EnginePath::Analytic });
    }
    let (log_w, position_path) = log_position_moment(params, n, alpha)?;
    let w_mom = entropic_moment_numeric(params, n, pair.beta, Space::Momentum)?;
    let side = |a: f64, log_w: f64| ((a / PI).ln() / (4.0 * a) + log_w / (2.0 * a)).exp();
    let xi = side(alpha, log_w) - side(pair.beta, w_mom.ln());
    Ok(XiValue {
        xi: check_sign(xi, "Tsallis uncertainty function")?,
        pair,
        position_path,
    })
}

/// ξ[T^(α)] as a plain number.
pub fn xi_tsallis(params: &ModelParams, n: u32, alpha: f64) -> Result<f64> {
    xi_tsallis_detailed(params, n, alpha).map(|v| v.xi)
}
