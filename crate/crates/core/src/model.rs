//! Model parameters, exact spectrum, normalization and position-space
//! eigenfunctions of the Darboux III oscillator.
//!
//! With `a = λ(n+½)` and `s = √(a² + ω²)` the effective frequency is
//! `Ω = s − a = ω²/(s + a)` and the energy is `E = (n+½)Ω`; the second forms
//! are free of cancellation for large λ.

use crate::error::{Error, Result};
use crate::specfun::{hermite, hermite_scaled, log_factorial};

/// Physical parameters (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega: f64,
    lambda: f64,
}

impl ModelParams {
    /// Validates `ω > 0` and `λ ≥ 0`, both finite.
    pub fn new(omega: f64, lambda: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::domain("model", format!("omega must be positive and finite, got {omega}")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::domain("model", format!("lambda must be nonnegative and finite, got {lambda}")));
        }
        Ok(Self { omega, lambda })
    }

    /// The harmonic oscillator of frequency `omega`.
    pub fn harmonic(omega: f64) -> Result<Self> {
        Self::new(omega, 0.0)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Per-level derived quantities, plus what is needed to evaluate the
/// eigenfunction quickly inside integration loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpectrum {
    pub n: u32,
    pub energy: f64,
    pub effective_frequency: f64,
    pub norm_constant: f64,
    log_norm: f64,
    lambda: f64,
}

impl StateSpectrum {
    pub fn new(params: &ModelParams, n: u32) -> Self {
        let omega = effective_frequency(params, n);
        let half = f64::from(n) + 0.5;
        let log_norm = log_norm(params.lambda, omega, n);
        Self {
            n,
            energy: half * omega,
            effective_frequency: omega,
            norm_constant: log_norm.exp(),
            log_norm,
            lambda: params.lambda,
        }
    }

    /// Natural log of the normalization constant.
    pub fn log_norm_constant(&self) -> f64 {
        self.log_norm
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `√Ω`, the scale of the Hermite argument.
    pub fn sqrt_effective_frequency(&self) -> f64 {
        self.effective_frequency.sqrt()
    }

    /// Ψ_n(x); exactly zero once the Gaussian factor underflows.
    pub fn wavefunction(&self, x: f64) -> f64 {
        let omega = self.effective_frequency;
        let y = omega.sqrt() * x;
        let gauss_exp = -0.5 * omega * x * x;
        let h = hermite(self.n, y);
        let stretch = (1.0 + self.lambda * x * x).sqrt();
        if h.is_finite() && gauss_exp > -700.0 {
            return self.norm_constant * stretch * gauss_exp.exp() * h;
        }
        let hs = hermite_scaled(self.n, y);
        if hs.is_zero() {
            return 0.0;
        }
        let log_mag = self.log_norm + stretch.ln() + gauss_exp + hs.log_mag();
        if log_mag < -745.0 {
            return 0.0;
        }
        f64::from(hs.sign()) * log_mag.exp()
    }

    /// ρ_n(x) = Ψ_n(x)².
    pub fn density(&self, x: f64) -> f64 {
        let psi = self.wavefunction(x);
        psi * psi
    }
}

/// E_n = −λ(n+½)² + (n+½)√(λ²(n+½)² + ω²).
pub fn energy(params: &ModelParams, n: u32) -> f64 {
    (f64::from(n) + 0.5) * effective_frequency(params, n)
}

/// Ω_n = √(ω² − 2λE_n).
pub fn effective_frequency(params: &ModelParams, n: u32) -> f64 {
    let a = params.lambda * (f64::from(n) + 0.5);
    let w2 = params.omega * params.omega;
    let s = (a * a + w2).sqrt();
    w2 / (s + a)
}

fn log_norm(lambda: f64, omega: f64, n: u32) -> f64 {
    let nf = f64::from(n);
    0.25 * (omega / std::f64::consts::PI).ln()
        - 0.5 * (nf * std::f64::consts::LN_2 + log_factorial(u64::from(n)))
        - 0.5 * ((nf + 0.5) * lambda / omega).ln_1p()
}

/// N = (Ω/π)^{1/4} (2^n n!)^{−1/2} (1 + (n+½)λ/Ω)^{−1/2}.
pub fn norm_constant(params: &ModelParams, n: u32) -> f64 {
    log_norm(params.lambda, effective_frequency(params, n), n).exp()
}

/// Ψ_n(x) = N √(1+λx²) e^{−Ωx²/2} H_n(√Ω x).
pub fn wavefunction(params: &ModelParams, n: u32, x: f64) -> f64 {
    StateSpectrum::new(params, n).wavefunction(x)
}

/// ρ_n(x) = |Ψ_n(x)|².
pub fn density_position(params: &ModelParams, n: u32, x: f64) -> f64 {
    StateSpectrum::new(params, n).density(x)
}
