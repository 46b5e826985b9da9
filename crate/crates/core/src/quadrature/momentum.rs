//! Fourier transform to momentum space and tabulated momentum densities.
//!
//! For a function of definite parity the transform reduces to a half-line
//! cosine or sine integral,
//!
//! ```text
//! even: Ψ̃(p) =  √(2/π) ∫₀^∞ Ψ(x) cos(px) dx
//! odd:  Ψ̃(p) = −i √(2/π) ∫₀^∞ Ψ(x) sin(px) dx
//! ```
//!
//! so only the real amplitude `g(p)` (with `Ψ̃ = g` or `Ψ̃ = −i g`) is ever
//! computed. Momentum integrals reuse the transform evaluation nodes directly.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ModelParams, StateSpectrum};
use crate::quadrature::grid::{GridSpec, HalfLineRule, Rule};
use crate::quadrature::position::position_half_width;
use crate::quadrature::GridOptions;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
// Largest phase p·h a transform panel may accumulate at the top momentum.
const PANEL_PHASE: f64 = 4.0;
// Sign changes below this fraction of the peak amplitude are not split at.
const ZERO_NOISE: f64 = 1e-9;
const MAX_GROWTH_STEPS: usize = 60;

/// Half-line cosine/sine transform of a fixed even or odd function.
#[derive(Debug, Clone)]
pub struct FourierKernel {
    nodes: Vec<f64>,
    weighted: Vec<f64>,
    odd: bool,
    p_max: f64,
    half_width: f64,
    l1: f64,
}

impl FourierKernel {
    /// Samples `f` on `[0, half_width]` with Gauss–Legendre panels no wider
    /// than `max_panel` and fine enough to resolve `e^{ipx}` up to `p_max`.
    pub fn new<F: Fn(f64) -> f64>(
        f: F,
        odd: bool,
        half_width: f64,
        p_max: f64,
        max_panel: f64,
        panel_points: usize,
    ) -> Self {
        let width = if p_max > 0.0 { max_panel.min(PANEL_PHASE / p_max) } else { max_panel };
        let panels = (half_width / width).ceil().max(1.0) as usize;
        Self::with_panels(f, odd, half_width, panels, panel_points, p_max)
    }

    fn with_panels<F: Fn(f64) -> f64>(
        f: F,
        odd: bool,
        half_width: f64,
        panels: usize,
        panel_points: usize,
        p_max: f64,
    ) -> Self {
        let mut rule = HalfLineRule::new();
        let h = half_width / panels as f64;
        for k in 0..panels {
            rule.push_panel(k as f64 * h, (k + 1) as f64 * h, panel_points);
        }
        let weighted: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| SQRT_2_OVER_PI * w * f(*x))
            .collect();
        let l1 = weighted.iter().map(|v| v.abs()).sum();
        Self {
            nodes: rule.nodes,
            weighted,
            odd,
            p_max,
            half_width,
            l1,
        }
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Real amplitude `g(p)`.
    pub fn amplitude(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        if self.odd {
            for (x, w) in self.nodes.iter().zip(&self.weighted) {
                acc += w * (p * x).sin();
            }
        } else {
            for (x, w) in self.nodes.iter().zip(&self.weighted) {
                acc += w * (p * x).cos();
            }
        }
        acc
    }

    /// The transform itself: `g` for even functions, `−i g` for odd ones.
    pub fn transform(&self, p: f64) -> Complex64 {
        let g = self.amplitude(p);
        if self.odd {
            Complex64::new(0.0, -g)
        } else {
            Complex64::new(g, 0.0)
        }
    }

    /// Size of rounding noise in `amplitude(p)`.
    pub fn noise_floor(&self, p: f64) -> f64 {
        self.l1 * 1e-16 * (10.0 + p.abs() * self.half_width)
    }

    fn amplitudes(&self, ps: &[f64]) -> Vec<f64> {
        ps.par_iter().map(|&p| self.amplitude(p)).collect()
    }
}

/// Largest panel that resolves the eigenfunction's own structure.
fn feature_width(spec: &StateSpectrum) -> f64 {
    let osc = std::f64::consts::PI / (spec.sqrt_effective_frequency() * ((2.0 * f64::from(spec.n) + 1.0).sqrt() + 1.0));
    let lambda = spec.lambda();
    if lambda > 0.0 {
        osc.min(2.0 / lambda.sqrt())
    } else {
        osc
    }
}

/// Transform kernel of Ψ_n with an automatic position grid.
pub fn wavefunction_kernel(spec: &StateSpectrum, p_max: f64, opts: &GridOptions) -> FourierKernel {
    let l = position_half_width(spec, 0.5, opts.tail_epsilon);
    let s = *spec;
    FourierKernel::new(
        move |x| s.wavefunction(x),
        spec.n % 2 == 1,
        l,
        p_max,
        feature_width(spec),
        opts.fourier_points,
    )
}

/// Ψ̃_n(p) on an explicit position grid (`points` nodes across `[−L, L]`).
pub fn fourier_transform(params: &ModelParams, n: u32, grid_x: &GridSpec, p: f64) -> Result<Complex64> {
    let l = grid_x.half_width;
    if p.abs() * l / grid_x.points as f64 > 0.5 {
        return Err(Error::oscillation(
            "quadrature",
            format!(
                "p = {p} with L = {l} needs more than {} points to resolve the phase",
                grid_x.points
            ),
        ));
    }
    if grid_x.rule != Rule::GaussLegendrePanels {
        return Err(Error::unsupported("quadrature", "the Fourier transform uses Gauss-Legendre panels"));
    }
    let spec = StateSpectrum::new(params, n);
    let panel_points = 16;
    let panels = (grid_x.points / 2).div_ceil(panel_points).max(1);
    let kernel = FourierKernel::with_panels(
        move |x| spec.wavefunction(x),
        n % 2 == 1,
        l,
        panels,
        panel_points,
        p.abs(),
    );
    Ok(kernel.transform(p))
}

/// Momentum density γ_n = |Ψ̃_n|² tabulated on integration nodes.
#[derive(Debug, Clone)]
pub struct MomentumProfile {
    pub params: ModelParams,
    pub n: u32,
    pub grid: GridSpec,
    pub rule: HalfLineRule,
    pub amplitude: Vec<f64>,
    pub density: Vec<f64>,
    pub zeros: Vec<f64>,
}

impl MomentumProfile {
    /// `(p, γ(p))` pairs over `[−L, L]`, ascending in `p`.
    pub fn values(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self
            .rule
            .nodes
            .iter()
            .zip(&self.density)
            .rev()
            .map(|(p, g)| (-p, *g))
            .collect();
        out.extend(self.rule.nodes.iter().cloned().zip(self.density.iter().cloned()));
        out
    }

    /// ∫γ^α dp.
    pub fn moment(&self, alpha: f64) -> f64 {
        2.0 * self
            .rule
            .weights
            .iter()
            .zip(&self.density)
            .map(|(w, g)| if *g > 0.0 { w * g.powf(alpha) } else { 0.0 })
            .sum::<f64>()
    }

    /// −∫γ ln γ dp.
    pub fn shannon(&self) -> f64 {
        -2.0 * self
            .rule
            .weights
            .iter()
            .zip(&self.density)
            .map(|(w, g)| if *g > 0.0 { w * g * g.ln() } else { 0.0 })
            .sum::<f64>()
    }

    /// ∫p²γ dp.
    pub fn second_moment(&self) -> f64 {
        2.0 * self
            .rule
            .nodes
            .iter()
            .zip(&self.rule.weights)
            .zip(&self.density)
            .map(|((p, w), g)| w * p * p * g)
            .sum::<f64>()
    }
}

fn bisect_zero(kernel: &FourierKernel, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || (b - a) <= 1e-14 * b.abs().max(1e-300) {
            return m;
        }
        let gm = kernel.amplitude(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Builds the momentum rule from provisional panel boundaries, splitting at
/// every sign change of the amplitude above the noise level.
fn profile_from_boundaries(
    kernel: &FourierKernel,
    boundaries: &[f64],
    odd: bool,
    opts: &GridOptions,
) -> (HalfLineRule, Vec<f64>, Vec<f64>) {
    let mut provisional = HalfLineRule::new();
    for (k, pair) in boundaries.windows(2).enumerate() {
        if k == 0 && odd {
            provisional.push_clustered_panel(pair[0], pair[1], opts.panel_points);
        } else {
            provisional.push_panel(pair[0], pair[1], opts.tail_points);
        }
    }
    let amps = kernel.amplitudes(&provisional.nodes);
    let peak = amps.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut zeros = Vec::new();
    for i in 0..amps.len().saturating_sub(1) {
        let (ga, gb) = (amps[i], amps[i + 1]);
        if (ga > 0.0) != (gb > 0.0) && ga.abs().max(gb.abs()) > ZERO_NOISE * peak {
            let (a, b) = (provisional.nodes[i], provisional.nodes[i + 1]);
            zeros.push(bisect_zero(kernel, a, b, ga));
        }
    }
    if zeros.is_empty() {
        return (provisional, amps, zeros);
    }
    // rebuild with zeros as extra breakpoints
    let mut cuts: Vec<(f64, bool)> = boundaries.iter().map(|b| (*b, false)).collect();
    if odd {
        cuts[0].1 = true;
    }
    cuts.extend(zeros.iter().map(|z| (*z, true)));
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
    cuts.dedup_by(|a, b| {
        if (a.0 - b.0).abs() <= 1e-12 * a.0.abs().max(1.0) {
            b.1 |= a.1;
            true
        } else {
            false
        }
    });
    let mut rule = HalfLineRule::new();
    for pair in cuts.windows(2) {
        let ((a, za), (b, zb)) = (pair[0], pair[1]);
        if za || zb {
            rule.push_clustered_panel(a, b, opts.panel_points);
        } else {
            rule.push_panel(a, b, opts.tail_points);
        }
    }
    let amps = kernel.amplitudes(&rule.nodes);
    (rule, amps, zeros)
}

fn finish_profile(
    params: &ModelParams,
    n: u32,
    rule: HalfLineRule,
    amplitude: Vec<f64>,
    zeros: Vec<f64>,
    half_width: f64,
) -> MomentumProfile {
    let density = amplitude.iter().map(|g| g * g).collect();
    let grid = GridSpec {
        half_width,
        points: 2 * rule.len(),
        rule: Rule::GaussLegendrePanels,
    };
    MomentumProfile {
        params: *params,
        n,
        grid,
        rule,
        amplitude,
        density,
        zeros,
    }
}

/// γ_n on explicit grids: the transform uses `grid_x`, the momentum nodes are
/// Gauss–Legendre panels over `[0, grid_p.half_width]` carrying
/// `grid_p.points / 2` nodes, split at sign changes of Ψ̃.
pub fn momentum_density(
    params: &ModelParams,
    n: u32,
    grid_x: &GridSpec,
    grid_p: &GridSpec,
) -> Result<MomentumProfile> {
    let l_p = grid_p.half_width;
    if l_p * grid_x.half_width / grid_x.points as f64 > 0.5 {
        return Err(Error::oscillation(
            "quadrature",
            format!(
                "momentum half-width {l_p} is not resolved by {} position points over L = {}",
                grid_x.points, grid_x.half_width
            ),
        ));
    }
    let spec = StateSpectrum::new(params, n);
    let panel_points = 16;
    let panels = (grid_x.points / 2).div_ceil(panel_points).max(1);
    let kernel = FourierKernel::with_panels(
        move |x| spec.wavefunction(x),
        n % 2 == 1,
        grid_x.half_width,
        panels,
        panel_points,
        l_p,
    );
    let opts = GridOptions::default();
    let count = (grid_p.points / 2).div_ceil(opts.tail_points).max(1);
    let boundaries: Vec<f64> = (0..=count).map(|k| l_p * k as f64 / count as f64).collect();
    let (rule, amps, zeros) = profile_from_boundaries(&kernel, &boundaries, n % 2 == 1, &opts);
    Ok(finish_profile(params, n, rule, amps, zeros, l_p))
}

/// Initial momentum truncation, the position formula with Ω replaced by 1/Ω
/// and doubled.
pub fn momentum_half_width_seed(spec: &StateSpectrum, alpha_floor: f64, epsilon: f64) -> f64 {
    let turning = (2.0 * f64::from(spec.n) + 1.0).sqrt();
    let decay = ((1.0 / epsilon).ln() / alpha_floor).sqrt();
    2.0 * (turning + decay + 1.0) * spec.sqrt_effective_frequency()
}

/// γ_n on an automatically chosen momentum grid, accurate for `∫γ^α` with
/// `α ≥ alpha_floor`. The truncation starts from
/// [`momentum_half_width_seed`] and is pushed outward until two successive
/// probes of `|Ψ̃|^{2α}` fall below the tail tolerance.
pub fn momentum_profile_uncached(
    params: &ModelParams,
    n: u32,
    alpha_floor: f64,
    opts: &GridOptions,
) -> Result<MomentumProfile> {
    let spec = StateSpectrum::new(params, n);
    let odd = n % 2 == 1;
    let seed = momentum_half_width_seed(&spec, alpha_floor, opts.tail_epsilon);
    let mut l_p = opts.momentum_half_width.unwrap_or(seed);
    let mut kernel = wavefunction_kernel(&spec, 1.5 * l_p, opts);
    if opts.momentum_half_width.is_none() {
        let probes: Vec<f64> = (0..=64).map(|k| l_p * f64::from(k) / 64.0).collect();
        let peak = kernel.amplitudes(&probes).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let target = opts.momentum_tail.powf(0.5 / alpha_floor) * peak;
        let small = |k: &FourierKernel, p: f64| k.amplitude(p).abs() <= target.max(10.0 * k.noise_floor(p));
        let mut steps = 0;
        loop {
            if 1.25 * l_p > kernel.p_max() {
                kernel = wavefunction_kernel(&spec, 1.5 * l_p, opts);
            }
            if small(&kernel, l_p) && small(&kernel, 1.25 * l_p) {
                break;
            }
            l_p *= 1.25;
            steps += 1;
            if steps > MAX_GROWTH_STEPS {
                return Err(Error::resource(
                    "quadrature",
                    format!("momentum tail of n={n}, lambda={} did not decay", params.lambda()),
                ));
            }
        }
        if kernel.p_max() > 2.0 * l_p {
            kernel = wavefunction_kernel(&spec, l_p, opts);
        }
    }
    // provisional panels: fine near the origin, growing geometrically outward
    let x_extent = ((2.0 * f64::from(n) + 1.0).sqrt() + 4.0) / spec.sqrt_effective_frequency();
    let h0 = std::f64::consts::PI / x_extent;
    let cap = (4.0 * h0).max(0.5 * params.lambda().sqrt());
    let mut boundaries = vec![0.0];
    let mut h = h0;
    let mut edge = 0.0;
    while edge < l_p {
        edge = (edge + h).min(l_p);
        boundaries.push(edge);
        h = (h * 1.05).min(cap);
    }
    let (rule, amps, zeros) = profile_from_boundaries(&kernel, &boundaries, odd, opts);
    Ok(finish_profile(params, n, rule, amps, zeros, l_p))
}

type ProfileKey = (u64, u64, u32, u64, u64);
static PROFILE_CACHE_ENABLED: AtomicBool = AtomicBool::new(true);

fn profile_cache() -> &'static Mutex<HashMap<ProfileKey, Arc<MomentumProfile>>> {
    static CACHE: OnceLock<Mutex<HashMap<ProfileKey, Arc<MomentumProfile>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Turns the momentum-profile memo on or off; disabling drops stored profiles.
pub fn set_profile_cache_enabled(enabled: bool) {
    PROFILE_CACHE_ENABLED.store(enabled, Ordering::Relaxed);
    if !enabled {
        profile_cache().lock().unwrap_or_else(|e| e.into_inner()).clear();
    }
}

/// Memoized [`momentum_profile_uncached`].
pub fn momentum_profile(
    params: &ModelParams,
    n: u32,
    alpha_floor: f64,
    opts: &GridOptions,
) -> Result<Arc<MomentumProfile>> {
    if !PROFILE_CACHE_ENABLED.load(Ordering::Relaxed) {
        return Ok(Arc::new(momentum_profile_uncached(params, n, alpha_floor, opts)?));
    }
    let key = (
        params.omega().to_bits(),
        params.lambda().to_bits(),
        n,
        alpha_floor.to_bits(),
        opts.fingerprint(),
    );
    if let Some(hit) = profile_cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(Arc::clone(hit));
    }
    let profile = Arc::new(momentum_profile_uncached(params, n, alpha_floor, opts)?);
    profile_cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, Arc::clone(&profile));
    Ok(profile)
}
