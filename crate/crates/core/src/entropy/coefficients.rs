//! Expansion of `H_n(y)^{2α}` in even Hermite polynomials of `√α y`.
//!
//! With `ν = n mod 2`, `m = (n − ν)/2` and `z = αy²`,
//!
//! ```text
//! H_n(y)^{2α} = A α^{−αν} Σ_j c_j / ((−1)^j 4^j j!) · H_{2j}(√α y)
//! A           = 2^{2αn} (m!)^{2α}
//! c_j         = B (½)_{αν} Σ_{i=0}^{j} (−j)_i / ((½)_i i!)
//!                 Σ_{j_1..j_{2α} ≤ m} (αν + ½)_{J+i} Π_r (−m)_{j_r} α^{−j_r} / ((ν+½)_{j_r} j_r!)
//! B           = ((ν+½)_m / m!)^{2α},   J = j_1 + … + j_{2α}.
//! ```
//!
//! The alternating `(−j)_i` and `(−m)_{j_r}` factors make every double
//! precision evaluation of these sums lose most of its digits for moderate
//! `n`, so all coefficients are produced as exact rationals. Two engines
//! compute them:
//!
//! - [`Engine::Convolution`] raises the inner one-index polynomial to the
//!   power `2α` and closes the `i`-sum with the Chu–Vandermonde identity,
//!   `Σ_i (s+½)_i (−j)_i / ((½)_i i!) = (−s)_j / (½)_j`.
//! - [`Engine::NestedSum`] walks the `(2α+1)`-fold multi-index directly with
//!   an odometer loop; it is exponentially slower and serves as a check.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::specfun::{log_factorial, ScaledValue};

/// Default cap on the number of terms an engine may visit.
pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

static TERM_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_TERM_BUDGET);
static CACHE_ENABLED: AtomicBool = AtomicBool::new(true);

type CacheMap = HashMap<(u32, u32), Arc<CoefficientTable>>;

fn cache() -> &'static Mutex<CacheMap> {
    static CACHE: OnceLock<Mutex<CacheMap>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Sets the term budget shared by both engines.
pub fn set_term_budget(terms: u64) {
    TERM_BUDGET.store(terms, Ordering::Relaxed);
}

pub fn term_budget() -> u64 {
    TERM_BUDGET.load(Ordering::Relaxed)
}

/// Turns the `(n, α)` memo on or off. Disabling also drops stored tables.
pub fn set_cache_enabled(enabled: bool) {
    CACHE_ENABLED.store(enabled, Ordering::Relaxed);
    if !enabled {
        cache().lock().unwrap_or_else(|e| e.into_inner()).clear();
    }
}

/// ν = (1 − (−1)^n)/2.
pub fn parity_nu(n: u32) -> u32 {
    n % 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Convolution,
    NestedSum,
}

/// Exact coefficients for one `(n, α)`: `c_j` for `j = 0..=αn` (all later
/// ones vanish) and the reduced sums `d_k = Σ_{j≤k} c_j (−k)_j / j!` for
/// `k = 0..=α` that enter the entropic moment.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub n: u32,
    pub alpha: u32,
    pub nu: u32,
    c: Vec<BigRational>,
    d: Vec<BigRational>,
}

impl CoefficientTable {
    pub fn c(&self) -> &[BigRational] {
        &self.c
    }

    pub fn d(&self) -> &[BigRational] {
        &self.d
    }

    /// ln A = 2αn ln 2 + 2α ln m!.
    pub fn log_a(&self) -> f64 {
        let m = (self.n - self.nu) / 2;
        let two_alpha = 2.0 * f64::from(self.alpha);
        two_alpha * f64::from(self.n) * std::f64::consts::LN_2 + two_alpha * log_factorial(u64::from(m))
    }
}

/// Public view of the expansion truncated at `j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients {
    pub n: u32,
    pub alpha: u32,
    pub nu: u32,
    pub a: ScaledValue,
    pub c: Vec<ScaledValue>,
    exact: Vec<BigRational>,
}

impl ExpansionCoefficients {
    /// The coefficients as exact rationals, same length as `c`.
    pub fn c_exact(&self) -> &[BigRational] {
        &self.exact
    }

    /// `c_j` rounded to `f64` (may overflow to infinity for very large `n`).
    pub fn c_f64(&self) -> Vec<f64> {
        self.c.iter().map(ScaledValue::to_real).collect()
    }
}

/// `c_j` for `j = 0..=j_max` using the default engine and the memo.
pub fn expansion_coefficients(n: u32, alpha: u32, j_max: u32) -> Result<ExpansionCoefficients> {
    let table = coefficient_table(n, alpha)?;
    Ok(truncate(&table, j_max))
}

/// As [`expansion_coefficients`] with an explicit engine, bypassing the memo.
pub fn expansion_coefficients_with(
    n: u32,
    alpha: u32,
    j_max: u32,
    engine: Engine,
) -> Result<ExpansionCoefficients> {
    let table = build_table(n, alpha, engine, term_budget())?;
    Ok(truncate(&table, j_max))
}

fn truncate(table: &CoefficientTable, j_max: u32) -> ExpansionCoefficients {
    let exact: Vec<BigRational> = (0..=j_max as usize)
        .map(|j| table.c.get(j).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    ExpansionCoefficients {
        n: table.n,
        alpha: table.alpha,
        nu: table.nu,
        a: ScaledValue::from_log(1, table.log_a()),
        c: exact.iter().map(rational_to_scaled).collect(),
        exact,
    }
}

/// Memoized coefficient table from the convolution engine.
pub fn coefficient_table(n: u32, alpha: u32) -> Result<Arc<CoefficientTable>> {
    let enabled = CACHE_ENABLED.load(Ordering::Relaxed);
    if enabled {
        if let Some(hit) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(&(n, alpha)) {
            return Ok(Arc::clone(hit));
        }
    }
    let table = Arc::new(build_table(n, alpha, Engine::Convolution, term_budget())?);
    if enabled {
        cache()
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert((n, alpha), Arc::clone(&table));
    }
    Ok(table)
}

/// Builds the table with the chosen engine under a term budget.
pub fn build_table(n: u32, alpha: u32, engine: Engine, budget: u64) -> Result<CoefficientTable> {
    if alpha == 0 {
        return Err(Error::domain("entropy-position", "alpha must be a positive integer"));
    }
    let nu = parity_nu(n);
    let m = (n - nu) / 2;
    let j_top = alpha * n;
    let count = term_count(m, alpha, j_top, engine);
    if count > budget as f64 {
        return Err(Error::resource(
            "entropy-position",
            format!("n={n}, alpha={alpha} needs {count:.3e} terms, budget is {budget}"),
        ));
    }
    let weights = inner_weights(m, nu, alpha);
    let prefactor = binom_factor(m, nu, alpha);
    let c = match engine {
        Engine::Convolution => convolution_engine(&weights, &prefactor, nu, alpha, j_top),
        Engine::NestedSum => nested_engine(&weights, &prefactor, nu, alpha, j_top),
    };
    let d = reduce(&c, alpha);
    Ok(CoefficientTable { n, alpha, nu, c, d })
}

fn term_count(m: u32, alpha: u32, j_top: u32, engine: Engine) -> f64 {
    let two_alpha = 2 * alpha as i32;
    let outer: f64 = (0..=j_top).map(|j| f64::from(j) + 1.0).sum();
    match engine {
        Engine::NestedSum => (f64::from(m) + 1.0).powi(two_alpha) * outer,
        Engine::Convolution => {
            let deg = f64::from(2 * alpha * m) + 1.0;
            deg * (f64::from(m) + 1.0) * f64::from(2 * alpha) + deg * (f64::from(j_top) + 1.0)
        }
    }
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

// Rising factorial of a rational with numerator p/q, exact.
fn rising(num: i64, den: i64, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..i64::from(k) {
        acc *= rat(num + i * den, den);
    }
    acc
}

// w_i = (−m)_i α^{−i} / ((ν+½)_i i!)
fn inner_weights(m: u32, nu: u32, alpha: u32) -> Vec<BigRational> {
    let mut w = Vec::with_capacity(m as usize + 1);
    let mut cur = BigRational::one();
    w.push(cur.clone());
    for i in 0..i64::from(m) {
        // ratio w_{i+1}/w_i = (−m + i) / ((ν + ½ + i)(i + 1) α)
        cur *= rat(2 * (i - i64::from(m)), (2 * i64::from(nu) + 1 + 2 * i) * (i + 1) * i64::from(alpha));
        w.push(cur.clone());
    }
    w
}

// ((ν+½)_m / m!)^{2α}
fn binom_factor(m: u32, nu: u32, alpha: u32) -> BigRational {
    let mut base = rising(2 * i64::from(nu) + 1, 2, m);
    for i in 1..=i64::from(m) {
        base /= BigRational::from_integer(BigInt::from(i));
    }
    num_traits::pow(base, 2 * alpha as usize)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// (½)_s (−s)_j / (½)_j for s = αν + J, closed Chu–Vandermonde form
fn convolution_engine(
    weights: &[BigRational],
    prefactor: &BigRational,
    nu: u32,
    alpha: u32,
    j_top: u32,
) -> Vec<BigRational> {
    let mut power = vec![BigRational::one()];
    for _ in 0..2 * alpha {
        power = poly_mul(&power, weights);
    }
    let mut c = vec![BigRational::zero(); j_top as usize + 1];
    for (big_j, p) in power.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let s = i64::from(alpha * nu) + big_j as i64;
        let base = prefactor * p * rising(1, 2, s as u32);
        // (−s)_j / (½)_j, nonzero only for j ≤ s
        let mut ratio = BigRational::one();
        for (j, slot) in c.iter_mut().enumerate().take(s as usize + 1) {
            if j > 0 {
                let jj = j as i64 - 1;
                ratio *= rat(2 * (jj - s), 2 * jj + 1);
            }
            *slot += &base * &ratio;
        }
    }
    c
}

fn nested_engine(
    weights: &[BigRational],
    prefactor: &BigRational,
    nu: u32,
    alpha: u32,
    j_top: u32,
) -> Vec<BigRational> {
    let slots = 2 * alpha as usize;
    let m = weights.len() - 1;
    let mut by_total = vec![BigRational::zero(); slots * m + 1];
    // odometer over (j_1, …, j_{2α}) ∈ [0, m]^{2α}
    let mut digits = vec![0usize; slots];
    loop {
        let mut term = BigRational::one();
        let mut total = 0;
        for &d in &digits {
            term *= &weights[d];
            total += d;
        }
        by_total[total] += term;
        let mut pos = 0;
        while pos < slots {
            digits[pos] += 1;
            if digits[pos] <= m {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == slots {
            break;
        }
    }
    let av = i64::from(alpha * nu);
    let head = prefactor * rising(1, 2, (alpha * nu) as u32);
    let mut c = Vec::with_capacity(j_top as usize + 1);
    for j in 0..=i64::from(j_top) {
        let mut acc = BigRational::zero();
        for i in 0..=j {
            // (−j)_i / ((½)_i i!)
            let outer = rising(-j, 1, i as u32) / (rising(1, 2, i as u32) * rising(1, 1, i as u32));
            if outer.is_zero() {
                continue;
            }
            for (big_j, sum) in by_total.iter().enumerate() {
                if sum.is_zero() {
                    continue;
                }
                // (αν + ½)_{J + i}
                let poch = rising(2 * av + 1, 2, (big_j as i64 + i) as u32);
                acc += &outer * sum * poch;
            }
        }
        c.push(&head * acc);
    }
    c
}

// d_k = Σ_{j≤k} c_j (−k)_j / j!
fn reduce(c: &[BigRational], alpha: u32) -> Vec<BigRational> {
    (0..=i64::from(alpha))
        .map(|k| {
            let mut acc = BigRational::zero();
            let mut factor = BigRational::one();
            for j in 0..=k {
                if j > 0 {
                    factor *= rat(j - 1 - k, j);
                }
                if let Some(cj) = c.get(j as usize) {
                    acc += cj * &factor;
                }
            }
            acc
        })
        .collect()
}

/// Natural log of |x| for a big integer, without overflowing `f64`.
pub(crate) fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Converts an exact rational to sign plus log-magnitude.
pub fn rational_to_scaled(x: &BigRational) -> ScaledValue {
    if x.is_zero() {
        return ScaledValue::ZERO;
    }
    let sign = if x.is_negative() { -1 } else { 1 };
    let (num, den) = (x.numer(), x.denom());
    if num.bits() < 1000 && den.bits() < 1000 {
        if let (Some(a), Some(b)) = (num.to_f64(), den.to_f64()) {
            let v = a / b;
            if v.is_finite() && v != 0.0 {
                return ScaledValue::from_real(v);
            }
        }
    }
    ScaledValue::from_log(sign, ln_bigint(num) - ln_bigint(den))
}
