//! Grid descriptions, the generic integrator and half-line node layouts.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::quadrature::rules::{gauss_hermite, gauss_legendre};

/// Shared Gauss–Legendre rules, built once per size.
pub(crate) fn legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static RULES: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let map = RULES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().unwrap_or_else(|e| e.into_inner());
    Arc::clone(guard.entry(n).or_insert_with(|| Arc::new(gauss_legendre(n))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Composite Gauss–Legendre on equal panels of 16 nodes.
    GaussLegendrePanels,
    /// Gauss–Hermite with the weight divided back out; `half_width` unused.
    GaussHermite,
    /// Composite Simpson on `points` equally spaced nodes (rounded up to odd).
    UniformSimpson,
}

/// Truncation and node count of a quadrature grid on `[−L, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
    pub rule: Rule,
}

pub const MIN_POINTS: usize = 32;
const PANEL_NODES: usize = 16;

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            points: 512,
            rule: Rule::GaussLegendrePanels,
        }
    }
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize, rule: Rule) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::domain("quadrature", format!("half_width must be positive, got {half_width}")));
        }
        if points < MIN_POINTS {
            return Err(Error::domain("quadrature", format!("need at least {MIN_POINTS} points, got {points}")));
        }
        Ok(Self { half_width, points, rule })
    }

    /// The same grid with twice the nodes.
    pub fn doubled(&self) -> Self {
        Self { points: self.points * 2, ..*self }
    }
}

/// Integrates `f` over `[−L, L]` (over ℝ for the Gauss–Hermite rule).
pub fn integrate<F: Fn(f64) -> f64>(f: F, grid: &GridSpec) -> Result<f64> {
    let check = |x: f64, v: f64| -> Result<f64> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::non_finite("quadrature", format!("integrand is {v} at x = {x}")))
        }
    };
    let l = grid.half_width;
    match grid.rule {
        Rule::GaussLegendrePanels => {
            let panels = grid.points.div_ceil(PANEL_NODES);
            let rule = legendre(PANEL_NODES);
            let h = 2.0 * l / panels as f64;
            let mut total = 0.0;
            for k in 0..panels {
                let mid = -l + (k as f64 + 0.5) * h;
                let mut part = 0.0;
                for (t, w) in rule.0.iter().zip(&rule.1) {
                    let x = mid + 0.5 * h * t;
                    part += w * check(x, f(x))?;
                }
                total += 0.5 * h * part;
            }
            Ok(total)
        }
        Rule::GaussHermite => {
            let (x, w) = gauss_hermite(grid.points);
            let mut total = 0.0;
            for (xi, wi) in x.iter().zip(&w) {
                total += wi * (xi * xi).exp() * check(*xi, f(*xi))?;
            }
            Ok(total)
        }
        Rule::UniformSimpson => {
            let intervals = (grid.points - 1).next_multiple_of(2);
            let h = 2.0 * l / intervals as f64;
            let mut total = 0.0;
            for i in 0..=intervals {
                let x = -l + i as f64 * h;
                let c = if i == 0 || i == intervals {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                total += c * check(x, f(x))?;
            }
            Ok(total * h / 3.0)
        }
    }
}

/// Nodes and weights for an integral over `[0, L]` assembled panel by panel.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HalfLineRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HalfLineRule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Plain Gauss–Legendre panel on `[a, b]`.
    pub fn push_panel(&mut self, a: f64, b: f64, points: usize) {
        let rule = legendre(points);
        let half = 0.5 * (b - a);
        for (t, w) in rule.0.iter().zip(&rule.1) {
            self.nodes.push(a + half * (t + 1.0));
            self.weights.push(half * w);
        }
    }

    /// Panel mapped through `x = a + (b−a)(3u² − 2u³)`, which clusters nodes
    /// quadratically at both ends and tames `|x − a|^s` endpoint behaviour.
    pub fn push_clustered_panel(&mut self, a: f64, b: f64, points: usize) {
        let rule = legendre(points);
        let len = b - a;
        for (t, w) in rule.0.iter().zip(&rule.1) {
            let u = 0.5 * (t + 1.0);
            let x = a + len * u * u * (3.0 - 2.0 * u);
            let jac = len * 6.0 * u * (1.0 - u);
            self.nodes.push(x);
            self.weights.push(0.5 * w * jac);
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}
