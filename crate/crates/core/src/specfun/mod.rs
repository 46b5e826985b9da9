//! Special-function kernel: Hermite polynomials, gamma-family functions,
//! Pochhammer symbols and Dawson's integral.
//!
//! Everything here is pure and allocation-free apart from the scaled Hermite
//! recurrence bookkeeping.

mod dawson;
mod gamma;
mod scaled;

pub use dawson::dawson;
pub use gamma::{
    binomial, gamma, gamma_half_integer, log_factorial, log_gamma, upper_incomplete_gamma,
};
pub(crate) use gamma::log_gamma_unchecked;
pub use scaled::ScaledValue;

use num_complex::Complex64;

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// H_{n-1}(x) and H_n(x) together (H_{-1} is taken as 0).
pub fn hermite_pair(n: u32, x: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Hermite polynomial at a complex argument.
pub fn hermite_complex(n: u32, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

// Renormalize the recurrence once values pass 2^RESCALE_BITS.
const RESCALE_BITS: i64 = 500;

/// H_n(x) as a [`ScaledValue`]; the recurrence is rescaled whenever the
/// running values grow past 2^500, so no intermediate overflows.
pub fn hermite_scaled(n: u32, x: f64) -> ScaledValue {
    if n == 0 {
        return ScaledValue::ONE;
    }
    let limit = 2f64.powi(RESCALE_BITS as i32);
    let shrink = 2f64.powi(-RESCALE_BITS as i32);
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    let mut exponent = 0i64;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
        if cur.abs() > limit || prev.abs() > limit {
            cur *= shrink;
            prev *= shrink;
            exponent += RESCALE_BITS;
        }
    }
    ScaledValue::from_real(cur) * ScaledValue::from_real(2.0).powi(exponent)
}

/// Rising factorial (z)_a = z(z+1)…(z+a-1) as a [`ScaledValue`].
///
/// Exactly zero when z is a nonpositive integer with -z < a.
pub fn pochhammer(z: f64, a: u32) -> ScaledValue {
    let mut acc = ScaledValue::ONE;
    for i in 0..a {
        let factor = z + f64::from(i);
        if factor == 0.0 {
            return ScaledValue::ZERO;
        }
        acc = acc * ScaledValue::from_real(factor);
    }
    acc
}
