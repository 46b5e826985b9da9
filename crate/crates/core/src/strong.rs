//! The strongly nonlinear regime. The density splits into a harmonic-like
//! part of weight `f` and a λ-induced part `λ x² e^{−Ωx²} N² H_n²` of weight
//! `1 − f`; when `f` is small the wavefunction is close to
//! `φ = √λ N |x| e^{−Ωx²/2} H_n(√Ω x)`, whose Fourier transform is known in
//! closed form. Also here: the critical points of the exact density and the
//! λ at which the central maximum splits.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::ToPrimitive;
use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::model::{ModelParams, StateSpectrum};
use crate::quadrature::{momentum_profile, FourierKernel, GridOptions, HalfLineRule};
use crate::specfun::{dawson, hermite, hermite_pair};

const MODULE: &str = "strong-nonlinear";

/// Highest `n` accepted by the general series unless a cap is given.
pub const DEFAULT_SERIES_CAP: u32 = 8;
// Residual against contour quadrature, relative to the peak, that counts as
// a loss of more than 6 of 16 digits.
const SERIES_RESIDUAL: f64 = 1e-10;
const PROBES: usize = 8;

/// Probability carried by the harmonic-like part of the density (`f`) and
/// by the λ-induced part (`complement = 1 − f`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySplit {
    pub f: f64,
    pub complement: f64,
}

/// `f = 1 / (1 + (n+½)λ/Ω)`.
pub fn harmonic_weight(params: &ModelParams, n: u32) -> DensitySplit {
    let spec = StateSpectrum::new(params, n);
    let r = (f64::from(n) + 0.5) * params.lambda() / spec.effective_frequency;
    DensitySplit {
        f: 1.0 / (1.0 + r),
        complement: r / (1.0 + r),
    }
}

/// φ_n(x) = √λ N |x| e^{−Ωx²/2} H_n(√Ω x).
pub fn approx_wavefunction(params: &ModelParams, n: u32, x: f64) -> f64 {
    let lambda = params.lambda();
    if x == 0.0 || lambda == 0.0 {
        return 0.0;
    }
    let spec = StateSpectrum::new(params, n);
    let t = lambda * x * x;
    spec.wavefunction(x) * (t / (1.0 + t)).sqrt()
}

/// Closed-form transform of φ_n for `n ≤ 3`: real for even `n`, purely
/// imaginary for odd `n`.
pub fn approx_momentum_closed(params: &ModelParams, n: u32, p: f64) -> Result<Complex64> {
    let lambda = params.lambda();
    let om = StateSpectrum::new(params, n).effective_frequency;
    let so = om.sqrt();
    let f = dawson(p / (2.0 * om).sqrt());
    let pi34 = PI.powf(0.75);
    let root = |den: f64| (lambda * om.powf(1.5) / den).sqrt();
    let s2 = std::f64::consts::SQRT_2;
    let value = match n {
        0 => Complex64::new(2.0 * root(lambda + 2.0 * om) * (so - s2 * p * f) / (pi34 * om.powf(1.5)), 0.0),
        1 => {
            let body = 2.0 * (om - p * p) * f + s2 * p * so;
            Complex64::new(0.0, -2.0 * root(3.0 * lambda + 2.0 * om) * body / (pi34 * om * om))
        }
        2 => {
            let body = 2.0 * s2 * (2.0 * p.powi(3) - 5.0 * p * om) * f / om.powf(2.5) + (6.0 * om - 4.0 * p * p) / (om * om);
            Complex64::new(root(10.0 * lambda + 4.0 * om) * body / pi34, 0.0)
        }
        3 => {
            let body = s2 * (2.0 * p.powi(4) - 9.0 * p * p * om + 3.0 * om * om) * f + p * so * (7.0 * om - 2.0 * p * p);
            Complex64::new(0.0, -2.0 * root(21.0 * lambda + 6.0 * om) * body / (pi34 * om.powi(3)))
        }
        _ => return Err(Error::unsupported(MODULE, format!("closed forms exist for n <= 3, got {n}"))),
    };
    Ok(value)
}

type Poly = Vec<Complex<BigInt>>;

fn cz(re: i64, im: i64) -> Complex<BigInt> {
    Complex::new(BigInt::from(re), BigInt::from(im))
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![cz(0, 0); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c.clone();
    }
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![cz(0, 0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x.clone() * y.clone();
        }
    }
    out
}

fn poly_scale(a: &Poly, s: &BigInt) -> Poly {
    a.iter().map(|c| Complex::new(&c.re * s, &c.im * s)).collect()
}

/// `(iP)^m` as a polynomial in P.
fn i_power(m: usize) -> Poly {
    let unit = [cz(1, 0), cz(0, 1), cz(-1, 0), cz(0, -1)];
    let mut out = vec![cz(0, 0); m + 1];
    out[m] = unit[m % 4].clone();
    out
}

/// `H_k(−iP)` as a polynomial in P.
fn hermite_minus_i(k: usize) -> Poly {
    // integer coefficients of H_k by H_{j+1} = 2z H_j − 2j H_{j−1}
    let mut prev: Vec<BigInt> = vec![];
    let mut cur: Vec<BigInt> = vec![BigInt::from(1)];
    for j in 0..k {
        let mut next = vec![BigInt::from(0); j + 2];
        for (d, c) in cur.iter().enumerate() {
            next[d + 1] += c * 2;
        }
        for (d, c) in prev.iter().enumerate() {
            next[d] -= c * (2 * j as i64);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    let unit = [cz(1, 0), cz(0, -1), cz(-1, 0), cz(0, 1)];
    cur.iter()
        .enumerate()
        .map(|(d, c)| Complex::new(&unit[d % 4].re * c, &unit[d % 4].im * c))
        .collect()
}

/// Exact `A, B` with `Σ_k C(n,k) 2^{n−k} H_k(−iP) I_{n−k}(P) = A(P) + B(P) K₀(P)`.
///
/// `K_m = e^{−P²/2} ∫_{iP}^∞ u^m e^{−u²/2} du` obeys
/// `K_m = (iP)^{m−1} + (m−1) K_{m−2}` with `K₁ = 1`, and
/// `I_m = K_{m+1} − iP K_m`. Collapsing the sum in exact arithmetic removes
/// the cancellation between its terms.
fn series_polynomials(n: u32) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = n as usize;
    // K_m = a[m] + b[m] K₀
    let mut a: Vec<Poly> = vec![Vec::new(), vec![cz(1, 0)]];
    let mut b: Vec<BigInt> = vec![BigInt::from(1), BigInt::from(0)];
    for m in 2..=n + 1 {
        let f = BigInt::from(m as i64 - 1);
        a.push(poly_add(&i_power(m - 1), &poly_scale(&a[m - 2], &f)));
        b.push(&b[m - 2] * &f);
    }
    let ip = i_power(1);
    let mut big_a: Poly = Vec::new();
    let mut big_b: Poly = Vec::new();
    for k in 0..=n {
        let m = n - k;
        let ia = poly_add(&a[m + 1], &poly_scale(&poly_mul(&ip, &a[m]), &BigInt::from(-1)));
        let ib = vec![Complex::new(b[m + 1].clone(), BigInt::from(0)), Complex::new(BigInt::from(0), -b[m].clone())];
        let weight = binomial_big(n, k) * (BigInt::from(1) << m);
        let h = poly_scale(&hermite_minus_i(k), &weight);
        big_a = poly_add(&big_a, &poly_mul(&h, &ia));
        big_b = poly_add(&big_b, &poly_mul(&h, &ib));
    }
    let to_f64 = |p: &Poly| -> Vec<Complex64> {
        p.iter()
            .map(|c| Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)))
            .collect()
    };
    (to_f64(&big_a), to_f64(&big_b))
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::from(1);
    for j in 0..k {
        c = c * BigInt::from((n - j) as i64) / BigInt::from((j + 1) as i64);
    }
    c
}

fn cached_polynomials(n: u32) -> Arc<(Vec<Complex64>, Vec<Complex64>)> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<(Vec<Complex64>, Vec<Complex64>)>>>> = OnceLock::new();
    let map = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().unwrap_or_else(|e| e.into_inner());
    Arc::clone(guard.entry(n).or_insert_with(|| Arc::new(series_polynomials(n))))
}

fn horner(coeffs: &[Complex64], x: f64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// `∫₀^∞ t H_n(t) e^{−t²/2} e^{−itP} dt` from the collapsed series.
fn series_integral(n: u32, big_p: f64) -> Complex64 {
    let polys = cached_polynomials(n);
    let k0 = Complex64::new(
        (0.5 * PI).sqrt() * (-0.5 * big_p * big_p).exp(),
        -std::f64::consts::SQRT_2 * dawson(big_p / std::f64::consts::SQRT_2),
    );
    horner(&polys.0, big_p) + horner(&polys.1, big_p) * k0
}

/// The same integral by direct quadrature along the real half-line.
fn contour_integral(n: u32, big_p: f64) -> Complex64 {
    let end = 12.0 + 2.0 * f64::from(n).sqrt();
    let width = (2.0 / big_p.abs().max(1e-300)).min(0.5);
    let panels = (end / width).ceil() as usize;
    let mut rule = HalfLineRule::new();
    for j in 0..panels {
        rule.push_panel(end * j as f64 / panels as f64, end * (j + 1) as f64 / panels as f64, 24);
    }
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(t, w)| *w * t * hermite(n, *t) * Complex64::from_polar((-0.5 * t * t).exp(), -t * big_p))
        .sum()
}

/// Compares the series with contour quadrature at 8 probes on `[0, P_max]`.
/// Each `(n, P_max)` pair is checked once.
fn check_series(n: u32, big_p_max: f64) -> Result<()> {
    static CHECKED: OnceLock<Mutex<HashSet<(u32, u64)>>> = OnceLock::new();
    let key = (n, big_p_max.to_bits());
    let set = CHECKED.get_or_init(|| Mutex::new(HashSet::new()));
    if set.lock().unwrap_or_else(|e| e.into_inner()).contains(&key) {
        return Ok(());
    }
    let probes: Vec<f64> = (0..PROBES).map(|j| big_p_max * j as f64 / (PROBES - 1) as f64).collect();
    let direct: Vec<Complex64> = probes.iter().map(|&q| contour_integral(n, q)).collect();
    let peak = direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (q, d) in probes.iter().zip(&direct) {
        let residual = (series_integral(n, *q) - d).norm() / peak;
        if !(residual <= SERIES_RESIDUAL) {
            return Err(Error::instability(
                MODULE,
                format!("series for n = {n} disagrees with contour quadrature by {residual:.2e} at P = {q}"),
            ));
        }
    }
    set.lock().unwrap_or_else(|e| e.into_inner()).insert(key);
    Ok(())
}

/// Transform of φ_n for any `n ≤ cap` from the Hermite translation series.
///
/// The series cancels against the Dawson term for large `P = p/√Ω`; the
/// usable range shrinks from `|P| ≈ 50` for `n ≤ 3` to `|P| ≈ 8` at `n = 8`.
/// Beyond it an instability error is returned.
pub fn g_series_transform_capped(params: &ModelParams, n: u32, p: f64, cap: u32) -> Result<Complex64> {
    if n > cap {
        return Err(Error::unsupported(MODULE, format!("series transform is capped at n = {cap}, got {n}")));
    }
    let spec = StateSpectrum::new(params, n);
    let om = spec.effective_frequency;
    let big_p = p / om.sqrt();
    check_series(n, (big_p.abs() * 4.0).ceil().max(16.0) / 4.0)?;
    let sum = series_integral(n, big_p);
    let pre = (params.lambda() / (2.0 * PI)).sqrt() * spec.norm_constant / om;
    // even n keep 2 Re, odd n keep 2i Im of the half-line integral
    Ok(if n % 2 == 0 {
        Complex64::new(pre * 2.0 * sum.re, 0.0)
    } else {
        Complex64::new(0.0, pre * 2.0 * sum.im)
    })
}

/// [`g_series_transform_capped`] with the default cap.
pub fn g_series_transform(params: &ModelParams, n: u32, p: f64) -> Result<Complex64> {
    g_series_transform_capped(params, n, p, DEFAULT_SERIES_CAP)
}

/// Transform of φ_n: closed form for `n ≤ 3`, series otherwise.
pub fn approx_momentum(params: &ModelParams, n: u32, p: f64) -> Result<Complex64> {
    if n <= 3 {
        approx_momentum_closed(params, n, p)
    } else {
        g_series_transform(params, n, p)
    }
}

/// Numerical transform kernel of φ_n, resolving momenta up to `p_max`.
pub fn approx_momentum_kernel(params: &ModelParams, n: u32, p_max: f64) -> FourierKernel {
    let spec = StateSpectrum::new(params, n);
    let l = ((2.0 * f64::from(n) + 1.0).sqrt() + 9.5) / spec.sqrt_effective_frequency();
    let feature = PI / (spec.sqrt_effective_frequency() * ((2.0 * f64::from(n) + 1.0).sqrt() + 1.0));
    let params = *params;
    FourierKernel::new(move |x| approx_wavefunction(&params, n, x), n % 2 == 1, l, p_max, feature, 24)
}

/// `∫|γ − |φ̃|²| dp / ∫γ dp`, the L¹ error of the large-λ approximation in
/// momentum space.
pub fn approximation_error(params: &ModelParams, n: u32) -> Result<f64> {
    let profile = momentum_profile(params, n, 1.0, &GridOptions::default())?;
    let mut diff = 0.0;
    let mut total = 0.0;
    for ((p, w), g) in profile.rule.nodes.iter().zip(&profile.rule.weights).zip(&profile.density) {
        let a = approx_momentum(params, n, *p)?.norm_sqr();
        diff += w * (g - a).abs();
        total += w * g;
    }
    Ok(diff / total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    Maximum,
    Minimum,
    Undulation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub x: f64,
    pub kind: CriticalKind,
}

/// `ρ''(x)/N²` and the sum of the magnitudes of its three terms.
fn second_derivative(spec: &StateSpectrum, x: f64) -> (f64, f64) {
    let om = spec.effective_frequency;
    let lambda = spec.lambda();
    let n = f64::from(spec.n);
    let so = om.sqrt();
    let y = so * x;
    let (hm1, h) = hermite_pair(spec.n, y);
    let hm1 = if spec.n == 0 { 0.0 } else { hm1 };
    let dh = so * 2.0 * n * hm1;
    let ddh = om * (2.0 * y * 2.0 * n * hm1 - 2.0 * n * h);
    let e = (-om * x * x).exp();
    let q = 1.0 + lambda * x * x;
    let u = q * e;
    let du = e * (2.0 * lambda * x - 2.0 * om * x * q);
    let ddu = e * (2.0 * lambda - 2.0 * om * q - 8.0 * om * lambda * x * x + 4.0 * om * om * x * x * q);
    let v = h * h;
    let dv = 2.0 * h * dh;
    let ddv = 2.0 * dh * dh + 2.0 * h * ddh;
    let terms = [ddu * v, 2.0 * du * dv, u * ddv];
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}

/// Classification of a stationary point by the sign of ρ''.
pub fn classify(params: &ModelParams, n: u32, x: f64) -> CriticalKind {
    let spec = StateSpectrum::new(params, n);
    let (d2, scale) = second_derivative(&spec, x);
    if d2.abs() <= 1e-10 * scale {
        CriticalKind::Undulation
    } else if d2 < 0.0 {
        CriticalKind::Maximum
    } else {
        CriticalKind::Minimum
    }
}

fn symmetric_points(params: &ModelParams, n: u32, positive: &[f64], with_origin: bool) -> Vec<CriticalPoint> {
    let mut xs: Vec<f64> = positive.iter().flat_map(|&x| [-x, x]).collect();
    if with_origin {
        xs.push(0.0);
    }
    xs.sort_by(f64::total_cmp);
    xs.into_iter()
        .map(|x| CriticalPoint { x, kind: classify(params, n, x) })
        .collect()
}

/// Stationary points of ρ_n away from the zeros of H_n, from the exact
/// solutions of the extremum polynomial for `n = 0` and `n = 2`.
pub fn density_critical_points(params: &ModelParams, n: u32) -> Result<Vec<CriticalPoint>> {
    let lambda = params.lambda();
    let om = StateSpectrum::new(params, n).effective_frequency;
    // Positive x² solutions, merged into the origin when they coincide with it.
    let squares: Vec<f64> = match n {
        0 if lambda > 0.0 => vec![(lambda - om) / (lambda * om)],
        0 => vec![],
        2 => {
            // 4λΩ² s² − (14λΩ − 4Ω²) s − (10Ω − 2λ) = 0
            let b = 14.0 * lambda * om - 4.0 * om * om;
            let c = 10.0 * om - 2.0 * lambda;
            if lambda == 0.0 {
                vec![c / (-b)]
            } else {
                let a = 4.0 * lambda * om * om;
                let disc = 2.0 * om * (41.0 * lambda * lambda + 12.0 * lambda * om + 4.0 * om * om).sqrt();
                // stable pairing of the two roots
                let big = (b + disc) / (2.0 * a);
                vec![-c / (a * big), big]
            }
        }
        _ => {
            return Err(Error::unsupported(
                MODULE,
                format!("exact critical points are available for n = 0 and n = 2, got {n}; use the numeric search"),
            ))
        }
    };
    let tiny = 1e-14 / om;
    let positive: Vec<f64> = squares.into_iter().filter(|s| *s > tiny).map(f64::sqrt).collect();
    Ok(symmetric_points(params, n, &positive, true))
}

/// The extremum polynomial
/// `4n√Ω(λx²+1)H_{n−1}(√Ω x) − 2x(λ(Ωx²−1)+Ω)H_n(√Ω x)`, divided by `x` for even `n`.
fn extremum_polynomial(spec: &StateSpectrum, x: f64) -> f64 {
    let om = spec.effective_frequency;
    let lambda = spec.lambda();
    let so = om.sqrt();
    let (hm1, h) = hermite_pair(spec.n, so * x);
    let hm1 = if spec.n == 0 { 0.0 } else { hm1 };
    let lead = 4.0 * f64::from(spec.n) * so * (lambda * x * x + 1.0) * hm1;
    let tail = 2.0 * (lambda * (om * x * x - 1.0) + om) * h;
    if spec.n % 2 == 0 {
        lead / x - tail
    } else {
        lead - x * tail
    }
}

/// Stationary points of ρ_n for any `n ≤ 100` by bracketing and bisection
/// on the extremum polynomial.
pub fn density_critical_points_numeric(params: &ModelParams, n: u32) -> Result<Vec<CriticalPoint>> {
    if n > 100 {
        return Err(Error::unsupported(MODULE, format!("numeric critical points are limited to n <= 100, got {n}")));
    }
    let spec = StateSpectrum::new(params, n);
    let end = ((2.0 * f64::from(n) + 1.0).sqrt() + 4.0) / spec.sqrt_effective_frequency();
    let steps = 400 * (n as usize + 1);
    let f = |x: f64| extremum_polynomial(&spec, x);
    let mut roots = Vec::new();
    let mut a = end * 1e-9;
    let mut fa = f(a);
    for i in 1..=steps {
        let b = end * i as f64 / steps as f64;
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if (fa > 0.0) != (fb > 0.0) && fb != 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if (fm > 0.0) == (flo > 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    Ok(symmetric_points(params, n, &roots, n % 2 == 0))
}

/// λ at which the central maximum of ρ_n turns into a minimum, from the
/// closed forms `ω/√2` (n = 0) and `5ω/√26` (n = 2).
pub fn bifurcation_threshold_closed(omega: f64, n: u32) -> Result<f64> {
    ModelParams::harmonic(omega)?;
    match n {
        0 => Ok(omega / 2f64.sqrt()),
        2 => Ok(5.0 * omega / 26f64.sqrt()),
        _ => Err(Error::unsupported(MODULE, format!("thresholds are known for n = 0 and n = 2, got {n}"))),
    }
}

/// The same threshold by bisection on the sign of ρ''(0).
pub fn bifurcation_threshold_bisection(omega: f64, n: u32) -> Result<f64> {
    if n % 2 == 1 {
        return Err(Error::unsupported(MODULE, "odd states vanish at the origin and have no central maximum"));
    }
    ModelParams::harmonic(omega)?;
    let curvature = |lambda: f64| -> Result<f64> {
        let spec = StateSpectrum::new(&ModelParams::new(omega, lambda)?, n);
        Ok(second_derivative(&spec, 0.0).0)
    };
    let (mut lo, mut hi) = (0.0, omega);
    while curvature(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e6 * omega {
            return Err(Error::domain(MODULE, format!("no threshold found for n = {n}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if curvature(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The threshold from the closed form, cross-checked against bisection.
pub fn bifurcation_threshold(omega: f64, n: u32) -> Result<f64> {
    let closed = bifurcation_threshold_closed(omega, n)?;
    let bisected = bifurcation_threshold_bisection(omega, n)?;
    if (closed - bisected).abs() > 1e-10 * omega.max(1.0) {
        return Err(Error::instability(
            MODULE,
            format!("closed-form threshold {closed} and bisection {bisected} disagree"),
        ));
    }
    Ok(closed)
}
