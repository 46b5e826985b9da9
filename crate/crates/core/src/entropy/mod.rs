//! Closed-form position-space entropic moments `W^(α) = ∫ρ^α dx` for integer
//! `α ≥ 1`, and the Rényi, Tsallis and disequilibrium measures built on them.
//!
//! Expanding `(1+λx²)^α` binomially and `H_n^{2α}` in even Hermite
//! polynomials (see [`coefficients`]) gives
//!
//! ```text
//! W = N^{2α} A α^{−αν} / √(αΩ) · Σ_{k=0}^{α} C(α,k) (λ/(αΩ))^k Γ(k+½) d_k
//! ```
//!
//! Every `d_k` is a positive exact rational, so the outer sum is carried out
//! in log space without cancellation.

pub mod coefficients;

pub use coefficients::{
    coefficient_table, expansion_coefficients, expansion_coefficients_with, parity_nu,
    set_cache_enabled, set_term_budget, CoefficientTable, Engine, ExpansionCoefficients,
};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{ModelParams, StateSpectrum};
use crate::specfun::{binomial, log_factorial, log_gamma_unchecked, ScaledValue};
use coefficients::{ln_bigint, rational_to_scaled};

/// An entropic order α together with whether the closed-form path applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyOrder {
    pub alpha: f64,
    pub analytic_eligible: bool,
}

impl EntropyOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain("entropy-position", format!("alpha must be positive, got {alpha}")));
        }
        let analytic_eligible = alpha >= 1.0 && alpha.fract() == 0.0 && alpha <= f64::from(u32::MAX);
        Ok(Self { alpha, analytic_eligible })
    }

    /// The order as an integer when the analytic path applies.
    pub fn integer(&self) -> Option<u32> {
        self.analytic_eligible.then_some(self.alpha as u32)
    }
}

/// Reduced closed forms used as independent checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// λ = 0, any n.
    Harmonic,
    /// n = 0, any λ.
    Ground,
    /// λ = 0 and n = 0.
    Both,
}

fn require_positive(alpha: u32) -> Result<()> {
    if alpha == 0 {
        return Err(Error::domain("entropy-position", "alpha must be a positive integer"));
    }
    Ok(())
}

/// ln W^(α)[ρ_n] from the closed form.
pub fn log_entropic_moment(params: &ModelParams, n: u32, alpha: u32) -> Result<f64> {
    require_positive(alpha)?;
    let table = coefficient_table(n, alpha)?;
    let spec = StateSpectrum::new(params, n);
    let omega = spec.effective_frequency;
    let a = f64::from(alpha);
    let prefactor = 2.0 * a * spec.log_norm_constant() + table.log_a()
        - a * f64::from(table.nu) * a.ln()
        - 0.5 * (a * omega).ln();
    let lambda = params.lambda();
    let ratio_ln = if lambda > 0.0 { (lambda / (a * omega)).ln() } else { f64::NEG_INFINITY };
    let mut logs = Vec::with_capacity(alpha as usize + 1);
    for (k, d) in table.d().iter().enumerate() {
        if k > 0 && lambda == 0.0 {
            break;
        }
        if d.is_zero() {
            continue;
        }
        let kf = k as f64;
        let ln_d = ln_bigint(d.numer()) - ln_bigint(d.denom());
        let ratio_term = if k == 0 { 0.0 } else { kf * ratio_ln };
        logs.push(binomial(u64::from(alpha), k as u64).ln() + ratio_term + log_gamma_unchecked(kf + 0.5) + ln_d);
    }
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    let value = prefactor + top + sum.ln();
    if !value.is_finite() {
        return Err(Error::non_finite("entropy-position", format!("ln W for n={n}, alpha={alpha}")));
    }
    Ok(value)
}

/// W^(α)[ρ_n] = ∫ρ_n^α dx for integer α ≥ 1.
pub fn entropic_moment(params: &ModelParams, n: u32, alpha: u32) -> Result<f64> {
    Ok(log_entropic_moment(params, n, alpha)?.exp())
}

/// The λ = 0 and/or n = 0 reductions of the closed form.
pub fn entropic_moment_special(params: &ModelParams, n: u32, alpha: u32, case: SpecialCase) -> Result<f64> {
    require_positive(alpha)?;
    let lambda = params.lambda();
    let needs_harmonic = matches!(case, SpecialCase::Harmonic | SpecialCase::Both);
    let needs_ground = matches!(case, SpecialCase::Ground | SpecialCase::Both);
    if needs_harmonic && lambda != 0.0 {
        return Err(Error::precondition("entropy-position", format!("{case:?} case needs lambda = 0, got {lambda}")));
    }
    if needs_ground && n != 0 {
        return Err(Error::precondition("entropy-position", format!("{case:?} case needs n = 0, got {n}")));
    }
    let a = f64::from(alpha);
    let pi = std::f64::consts::PI;
    match case {
        SpecialCase::Both => Ok((params.omega() / pi).powf(0.5 * (a - 1.0)) / a.sqrt()),
        SpecialCase::Ground => {
            let omega = StateSpectrum::new(params, 0).effective_frequency;
            let r = lambda / (a * omega);
            let sum: f64 = (0..=alpha)
                .map(|k| binomial(u64::from(alpha), u64::from(k)) * r.powi(k as i32) * log_gamma_unchecked(f64::from(k) + 0.5).exp())
                .sum();
            Ok((omega / pi).powf(0.5 * (a - 1.0)) * (1.0 + 0.5 * lambda / omega).powf(-a) / (a * pi).sqrt() * sum)
        }
        SpecialCase::Harmonic => {
            let spec = StateSpectrum::new(params, n);
            let table = coefficient_table(n, alpha)?;
            let c0 = rational_to_scaled(&table.c()[0]);
            let omega = params.omega();
            let log = 2.0 * a * spec.log_norm_constant() + 0.5 * pi.ln() + table.log_a()
                - a * f64::from(table.nu) * a.ln()
                - 0.5 * (a * omega).ln()
                + c0.log_mag();
            Ok(log.exp())
        }
    }
}

fn require_order_two(alpha: u32) -> Result<()> {
    if alpha < 2 {
        return Err(Error::domain(
            "entropy-position",
            format!("closed-form entropies need integer alpha >= 2, got {alpha}"),
        ));
    }
    Ok(())
}

/// R^(α)[ρ_n] = ln W^(α) / (1 − α).
pub fn renyi_position(params: &ModelParams, n: u32, alpha: u32) -> Result<f64> {
    require_order_two(alpha)?;
    Ok(log_entropic_moment(params, n, alpha)? / (1.0 - f64::from(alpha)))
}

/// T^(α)[ρ_n] = (1 − W^(α)) / (α − 1).
pub fn tsallis_position(params: &ModelParams, n: u32, alpha: u32) -> Result<f64> {
    require_order_two(alpha)?;
    let log_w = log_entropic_moment(params, n, alpha)?;
    Ok(-log_w.exp_m1() / (f64::from(alpha) - 1.0))
}

/// D[ρ_n] = W^(2)[ρ_n].
pub fn disequilibrium(params: &ModelParams, n: u32) -> Result<f64> {
    entropic_moment(params, n, 2)
}

/// The dedicated α = 2 form in terms of `c_{0,2}, c_{1,2}, c_{2,2}`:
/// `√(Ω/π) A / ((2^n n!)² (1+(n+½)λ/Ω)² 2^{2ν+½}) · (c₀ + r(c₀−c₁)/2 + 3r²(c₀−2c₁+c₂)/16)`
/// with `r = λ/Ω`.
pub fn disequilibrium_closed_form(params: &ModelParams, n: u32) -> Result<f64> {
    let table = coefficient_table(n, 2)?;
    let spec = StateSpectrum::new(params, n);
    let omega = spec.effective_frequency;
    let c = table.c();
    let zero = BigRational::zero();
    let c0 = c.first().unwrap_or(&zero).clone();
    let c1 = c.get(1).unwrap_or(&zero).clone();
    let c2 = c.get(2).unwrap_or(&zero).clone();
    let two = BigRational::from_integer(2.into());
    let lin = rational_to_scaled(&((&c0 - &c1) / &two));
    let quad = rational_to_scaled(&((&c0 - &two * &c1 + &c2) * BigRational::new(3.into(), 16.into())));
    let r = params.lambda() / omega;
    let bracket = rational_to_scaled(&c0)
        .add(ScaledValue::from_real(r) * lin)
        .add(ScaledValue::from_real(r * r) * quad);
    let nf = f64::from(n);
    let log_pref = 0.5 * (omega / std::f64::consts::PI).ln()
        - 2.0 * (nf * std::f64::consts::LN_2 + log_factorial(u64::from(n)))
        - 2.0 * ((nf + 0.5) * r).ln_1p()
        + table.log_a()
        - (2.0 * f64::from(table.nu) + 0.5) * std::f64::consts::LN_2;
    Ok((ScaledValue::from_log(1, log_pref) * bracket).to_real())
}
