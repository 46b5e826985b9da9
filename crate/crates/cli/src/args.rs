//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "darboux", version, about = "Entropic measures of the Darboux III oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileKind {
    DensityPosition,
    DensityMomentum,
    ApproxMomentum,
}

/// Flags shared by every computing subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Oscillator frequency ω > 0.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    /// λ ≥ 0: a value, a comma list, or start:stop:step.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
    /// State numbers: a value, a comma list, or start:stop[:step].
    #[arg(long, default_value = "0")]
    pub n: String,
    /// Entropic orders α > 0: a value or a comma list; fractions like 4/3 allowed.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, value_enum, default_value_t = SpaceArg::Position)]
    pub space: SpaceArg,
    /// Nodes per quadrature panel, or sample count for `profile`.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Fixed truncation of the integration domain, or the sampled range for `profile`.
    #[arg(long, allow_negative_numbers = true)]
    pub half_width: Option<f64>,
    /// Write the output to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels E_n.
    Energy(Common),
    /// Effective frequencies Ω_n.
    Omega(Common),
    /// Entropic moments W = ∫ρ^α.
    Moment(Common),
    /// Rényi entropies (α = 1 gives the Shannon entropy).
    Renyi(Common),
    /// Tsallis entropies (α = 1 gives the Shannon entropy).
    Tsallis(Common),
    /// Disequilibrium D = ∫ρ².
    Disequilibrium(Common),
    /// Shannon entropies.
    Shannon(Common),
    /// Rényi uncertainty function ξ for each α and its conjugate.
    XiRenyi(Common),
    /// Tsallis uncertainty function ξ for 1/2 < α ≤ 1.
    XiTsallis(Common),
    /// Harmonic weight f and its complement 1 − f.
    WeightF(Common),
    /// λ at which the central density maximum splits (n = 0 or 2).
    Threshold(Common),
    /// Critical points of the position density.
    CriticalPoints(Common),
    /// Sampled density curve as two-column CSV.
    Profile {
        #[arg(long, value_enum)]
        kind: ProfileKind,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute a reference table (or `all`) and compare.
    Table {
        /// Table id, or `all`.
        id: String,
        /// One absolute tolerance for every cell instead of the printed precision.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Write the recomputed table(s) as CSV to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
