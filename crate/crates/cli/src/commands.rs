//! Subcommand implementations. Each returns the text to emit.

use std::path::Path;

use darboux::entropy::disequilibrium;
use darboux::model::{effective_frequency, energy, StateSpectrum};
use darboux::quadrature::{
    momentum_half_width_seed, position_half_width, wavefunction_kernel, GridOptions, Space,
};
use darboux::strong::{
    approx_momentum, bifurcation_threshold_bisection, bifurcation_threshold_closed, density_critical_points,
    density_critical_points_numeric, harmonic_weight, CriticalKind,
};
use darboux::uncertainty::{xi_renyi_detailed, xi_tsallis_detailed, EnginePath};
use darboux::ModelParams;
use rayon::prelude::*;

use crate::args::{Command, Common, ProfileKind, SpaceArg};
use crate::error::{CliError, CliResult};
use crate::format::{sig12, Csv};
use crate::quantities::{self, Engine};
use crate::tables::{run_table, TableId};
use crate::values::{parse_levels, parse_reals};

/// Text for standard output plus whether a golden comparison failed.
pub struct Outcome {
    pub stdout: String,
    pub mismatch: Option<CliError>,
}

struct Grid {
    omega: f64,
    lambdas: Vec<f64>,
    levels: Vec<u32>,
    alphas: Vec<f64>,
    space: Space,
    opts: GridOptions,
}

impl Grid {
    fn new(c: &Common, needs_alpha: bool) -> CliResult<Self> {
        if !(c.omega > 0.0) || !c.omega.is_finite() {
            return Err(CliError::usage(format!("--omega must be positive, got {}", c.omega)));
        }
        let lambdas = parse_reals(&c.lambda, "lambda")?;
        if let Some(l) = lambdas.iter().find(|l| **l < 0.0) {
            return Err(CliError::usage(format!("--lambda must be nonnegative, got {l}")));
        }
        let levels = parse_levels(&c.n)?;
        let alphas = match (&c.alpha, needs_alpha) {
            (Some(a), true) => parse_reals(a, "alpha")?,
            (None, true) => return Err(CliError::usage("--alpha is required for this subcommand")),
            (_, false) => vec![],
        };
        if let Some(a) = alphas.iter().find(|a| **a <= 0.0) {
            return Err(CliError::usage(format!("--alpha must be positive, got {a}")));
        }
        let space = match c.space {
            SpaceArg::Position => Space::Position,
            SpaceArg::Momentum => Space::Momentum,
        };
        let mut opts = GridOptions::default();
        if let Some(points) = c.grid_points {
            if points < 8 {
                return Err(CliError::usage(format!("--grid-points must be at least 8, got {points}")));
            }
            opts.panel_points = points;
            opts.tail_points = (points / 2).max(8);
            opts.fourier_points = (points * 5 / 16).max(8);
        }
        if let Some(h) = c.half_width {
            if !(h > 0.0) || !h.is_finite() {
                return Err(CliError::usage(format!("--half-width must be positive, got {h}")));
            }
            match space {
                Space::Position => opts.half_width = Some(h),
                Space::Momentum => opts.momentum_half_width = Some(h),
            }
        }
        Ok(Self {
            omega: c.omega,
            lambdas,
            levels,
            alphas,
            space,
            opts,
        })
    }

    fn params(&self, lambda: f64) -> CliResult<ModelParams> {
        ModelParams::new(self.omega, lambda).map_err(|e| CliError::usage(e.to_string()))
    }

    /// (n, λ) pairs, n outer.
    fn states(&self) -> Vec<(u32, f64)> {
        self.levels
            .iter()
            .flat_map(|&n| self.lambdas.iter().map(move |&l| (n, l)))
            .collect()
    }

    /// (n, λ, α) triples, n outer, λ middle, α inner.
    fn cells(&self) -> Vec<(u32, f64, f64)> {
        self.states()
            .into_iter()
            .flat_map(|(n, l)| self.alphas.iter().map(move |&a| (n, l, a)))
            .collect()
    }
}

/// Evaluates `f` over `items` in parallel and keeps input order.
fn sweep<T: Sync, F>(items: &[T], f: F) -> CliResult<Vec<Vec<String>>>
where
    F: Fn(&T) -> CliResult<Vec<Vec<String>>> + Sync + Send,
{
    let parts: Vec<CliResult<Vec<Vec<String>>>> = items.par_iter().map(f).collect();
    let mut rows = Vec::new();
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

fn table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut csv = Csv::new(header.iter().copied());
    for r in rows {
        csv.push(r);
    }
    csv.render()
}

fn path_label(path: EnginePath) -> &'static str {
    match path {
        EnginePath::Analytic => Engine::Analytic.label(),
        EnginePath::Quadrature => Engine::Quadrature.label(),
    }
}

fn kind_label(kind: CriticalKind) -> &'static str {
    match kind {
        CriticalKind::Maximum => "maximum",
        CriticalKind::Minimum => "minimum",
        CriticalKind::Undulation => "undulation",
    }
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs one subcommand, honouring `--out`.
pub fn execute(command: &Command) -> CliResult<Outcome> {
    let (text, out) = match command {
        Command::Table { id, tolerance, out } => return table_command(id, *tolerance, out.as_deref()),
        Command::Profile { kind, common } => (profile(*kind, common)?, &common.out),
        Command::Energy(c) => (spectrum(c, "energy", energy)?, &c.out),
        Command::Omega(c) => (spectrum(c, "effective_frequency", effective_frequency)?, &c.out),
        Command::Moment(c) => (entropic(c, "moment", quantities::moment)?, &c.out),
        Command::Renyi(c) => (entropic(c, "renyi", quantities::renyi)?, &c.out),
        Command::Tsallis(c) => (entropic(c, "tsallis", quantities::tsallis)?, &c.out),
        Command::Disequilibrium(c) => (disequilibrium_command(c)?, &c.out),
        Command::Shannon(c) => (shannon_command(c)?, &c.out),
        Command::XiRenyi(c) => (xi_command(c, xi_renyi_detailed, |a| a > 0.5 && a != 1.0, "alpha > 1/2, alpha != 1")?, &c.out),
        Command::XiTsallis(c) => (xi_command(c, xi_tsallis_detailed, |a| a > 0.5 && a <= 1.0, "1/2 < alpha <= 1")?, &c.out),
        Command::WeightF(c) => (weight_command(c)?, &c.out),
        Command::Threshold(c) => (threshold_command(c)?, &c.out),
        Command::CriticalPoints(c) => (critical_command(c)?, &c.out),
    };
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Outcome { stdout: String::new(), mismatch: None })
        }
        None => Ok(Outcome { stdout: text, mismatch: None }),
    }
}

fn spectrum(c: &Common, name: &str, f: fn(&ModelParams, u32) -> f64) -> CliResult<String> {
    let g = Grid::new(c, false)?;
    let rows = sweep(&g.states(), |&(n, l)| {
        Ok(vec![vec![n.to_string(), sig12(l), sig12(f(&g.params(l)?, n))]])
    })?;
    Ok(table(&["n", "lambda", name], rows))
}

type EntropicFn = fn(&ModelParams, u32, f64, Space, &GridOptions) -> darboux::Result<(f64, Engine)>;

fn entropic(c: &Common, name: &str, f: EntropicFn) -> CliResult<String> {
    let g = Grid::new(c, true)?;
    let rows = sweep(&g.cells(), |&(n, l, a)| {
        let (v, engine) = f(&g.params(l)?, n, a, g.space, &g.opts)?;
        Ok(vec![vec![n.to_string(), sig12(l), sig12(a), sig12(v), engine.label().into()]])
    })?;
    Ok(table(&["n", "lambda", "alpha", name, "engine"], rows))
}

fn disequilibrium_command(c: &Common) -> CliResult<String> {
    let g = Grid::new(c, false)?;
    let rows = sweep(&g.states(), |&(n, l)| {
        let p = g.params(l)?;
        let (v, engine) = match g.space {
            Space::Position => (disequilibrium(&p, n)?, Engine::Analytic),
            Space::Momentum => quantities::moment(&p, n, 2.0, g.space, &g.opts)?,
        };
        Ok(vec![vec![n.to_string(), sig12(l), sig12(v), engine.label().into()]])
    })?;
    Ok(table(&["n", "lambda", "disequilibrium", "engine"], rows))
}

fn shannon_command(c: &Common) -> CliResult<String> {
    let g = Grid::new(c, false)?;
    let rows = sweep(&g.states(), |&(n, l)| {
        let v = quantities::shannon(&g.params(l)?, n, g.space, &g.opts)?;
        Ok(vec![vec![n.to_string(), sig12(l), sig12(v)]])
    })?;
    Ok(table(&["n", "lambda", "shannon"], rows))
}

type XiFn = fn(&ModelParams, u32, f64) -> darboux::Result<darboux::uncertainty::XiValue>;

fn xi_command(c: &Common, f: XiFn, admissible: fn(f64) -> bool, range: &str) -> CliResult<String> {
    let g = Grid::new(c, true)?;
    if let Some(a) = g.alphas.iter().find(|a| !admissible(**a)) {
        return Err(CliError::usage(format!("--alpha must satisfy {range}, got {a}")));
    }
    let rows = sweep(&g.cells(), |&(n, l, a)| {
        let v = f(&g.params(l)?, n, a)?;
        Ok(vec![vec![
            n.to_string(),
            sig12(l),
            sig12(a),
            sig12(v.pair.beta),
            sig12(v.xi),
            path_label(v.position_path).into(),
        ]])
    })?;
    Ok(table(&["n", "lambda", "alpha", "beta", "xi", "position_engine"], rows))
}

fn weight_command(c: &Common) -> CliResult<String> {
    let g = Grid::new(c, false)?;
    let rows = sweep(&g.states(), |&(n, l)| {
        let s = harmonic_weight(&g.params(l)?, n);
        Ok(vec![vec![n.to_string(), sig12(l), sig12(s.f), sig12(s.complement)]])
    })?;
    Ok(table(&["n", "lambda", "f", "complement"], rows))
}

fn threshold_command(c: &Common) -> CliResult<String> {
    let g = Grid::new(c, false)?;
    if let Some(n) = g.levels.iter().find(|n| **n != 0 && **n != 2) {
        return Err(CliError::usage(format!("thresholds are available for n = 0 and n = 2, got {n}")));
    }
    let rows = sweep(&g.levels, |&n| {
        let closed = bifurcation_threshold_closed(g.omega, n)?;
        let bisected = bifurcation_threshold_bisection(g.omega, n)?;
        Ok(vec![vec![n.to_string(), sig12(g.omega), sig12(closed), sig12(bisected)]])
    })?;
    Ok(table(&["n", "omega", "closed_form", "bisection"], rows))
}

fn critical_command(c: &Common) -> CliResult<String> {
    let g = Grid::new(c, false)?;
    let rows = sweep(&g.states(), |&(n, l)| {
        let p = g.params(l)?;
        let points = if n == 0 || n == 2 {
            density_critical_points(&p, n)?
        } else {
            density_critical_points_numeric(&p, n)?
        };
        Ok(points
            .into_iter()
            .map(|cp| vec![n.to_string(), sig12(l), sig12(cp.x), kind_label(cp.kind).into()])
            .collect())
    })?;
    Ok(table(&["n", "lambda", "x", "kind"], rows))
}

fn single<T: Copy>(values: &[T], flag: &str) -> CliResult<T> {
    match values {
        [v] => Ok(*v),
        _ => Err(CliError::usage(format!("profile needs a single value for --{flag}"))),
    }
}

fn profile(kind: ProfileKind, c: &Common) -> CliResult<String> {
    let mut flags = c.clone();
    flags.half_width = None;
    flags.grid_points = None;
    let g = Grid::new(&flags, false)?;
    let n = single(&g.levels, "n")?;
    let params = g.params(single(&g.lambdas, "lambda")?)?;
    let samples = c.grid_points.unwrap_or(801);
    if samples < 3 {
        return Err(CliError::usage("--grid-points must be at least 3 for profile"));
    }
    let spec = StateSpectrum::new(&params, n);
    let (coordinate, default_width) = match kind {
        ProfileKind::DensityPosition => ("x", position_half_width(&spec, 1.0, 1e-18)),
        _ => ("p", momentum_half_width_seed(&spec, 1.0, 1e-16)),
    };
    let half_width = match c.half_width {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(CliError::usage(format!("--half-width must be positive, got {h}"))),
        None => default_width,
    };
    let coords: Vec<f64> = (0..samples)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (samples - 1) as f64)
        .collect();
    let values: Vec<f64> = match kind {
        ProfileKind::DensityPosition => coords.par_iter().map(|&x| spec.density(x)).collect(),
        ProfileKind::DensityMomentum => {
            let kernel = wavefunction_kernel(&spec, half_width, &GridOptions::default());
            coords.par_iter().map(|&p| kernel.amplitude(p).powi(2)).collect()
        }
        ProfileKind::ApproxMomentum => {
            let parts: Vec<darboux::Result<f64>> = coords
                .par_iter()
                .map(|&p| approx_momentum(&params, n, p).map(|z| z.norm_sqr()))
                .collect();
            parts.into_iter().collect::<darboux::Result<_>>()?
        }
    };
    let peak = values.iter().cloned().fold(0.0, f64::max);
    for (i, v) in values.iter().enumerate() {
        let mirror = values[samples - 1 - i];
        if (v - mirror).abs() > 1e-10 * peak {
            return Err(CliError::Numeric(darboux::Error::instability(
                "cli",
                format!("profile is not even: {} at {} but {} at {}", v, coords[i], mirror, -coords[i]),
            )));
        }
    }
    let rows = coords
        .iter()
        .zip(&values)
        .map(|(x, v)| vec![sig12(*x), sig12(*v)])
        .collect();
    Ok(table(&[coordinate, "density"], rows))
}

fn table_command(id: &str, tolerance: Option<f64>, out: Option<&Path>) -> CliResult<Outcome> {
    if let Some(t) = tolerance {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(CliError::usage(format!("--tolerance must be nonnegative, got {t}")));
        }
    }
    let ids: Vec<TableId> = if id == "all" { TableId::ALL.to_vec() } else { vec![id.parse()?] };
    let mut stdout = String::new();
    let mut recomputed = String::new();
    let (mut failed, mut gating) = (0, 0);
    for id in ids {
        let report = run_table(id, tolerance)?;
        failed += report.gating_failures();
        gating += report.gating_cells();
        stdout.push_str(&report.render());
        let block = format!("# recomputed {}\n{}", id.name(), report.recomputed_csv().render());
        if out.is_none() {
            stdout.push_str(&block);
        }
        recomputed.push_str(&block);
        stdout.push('\n');
    }
    if let Some(path) = out {
        write_file(path, &recomputed)?;
    }
    let mismatch = (failed > 0).then_some(CliError::Mismatch { failed, gating });
    Ok(Outcome { stdout, mismatch })
}
