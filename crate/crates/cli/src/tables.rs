//! Embedded reference tables and their recomputation.
//!
//! Each table is a small CSV with `key=value` metadata lines (`decimals`,
//! optional `tolerance` and `gating`) ahead of the header row. Column labels
//! are exact orders written as fractions, state numbers, or `measure:n`.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use darboux::model::{effective_frequency, energy};
use darboux::quadrature::{GridOptions, Space};
use darboux::uncertainty::{xi_renyi, xi_tsallis};
use darboux::ModelParams;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::format::{sig12, Csv};
use crate::quantities;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    Energy,
    Omega,
    RenyiPosH,
    RenyiPosD,
    TsallisPosH,
    TsallisPosD,
    RenyiMomH,
    RenyiMomD,
    TsallisMomH,
    TsallisMomD,
    XiRenyiH,
    XiRenyiD,
    XiTsallisH,
    XiTsallisD,
    MomVsLambda,
    XiVsLambdaA,
    XiVsLambdaB,
}

impl TableId {
    pub const ALL: [TableId; 17] = [
        TableId::Energy,
        TableId::Omega,
        TableId::RenyiPosH,
        TableId::RenyiPosD,
        TableId::TsallisPosH,
        TableId::TsallisPosD,
        TableId::RenyiMomH,
        TableId::RenyiMomD,
        TableId::TsallisMomH,
        TableId::TsallisMomD,
        TableId::XiRenyiH,
        TableId::XiRenyiD,
        TableId::XiTsallisH,
        TableId::XiTsallisD,
        TableId::MomVsLambda,
        TableId::XiVsLambdaA,
        TableId::XiVsLambdaB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Energy => "energy",
            TableId::Omega => "omega",
            TableId::RenyiPosH => "renyi_pos_h",
            TableId::RenyiPosD => "renyi_pos_d",
            TableId::TsallisPosH => "tsallis_pos_h",
            TableId::TsallisPosD => "tsallis_pos_d",
            TableId::RenyiMomH => "renyi_mom_h",
            TableId::RenyiMomD => "renyi_mom_d",
            TableId::TsallisMomH => "tsallis_mom_h",
            TableId::TsallisMomD => "tsallis_mom_d",
            TableId::XiRenyiH => "xi_renyi_h",
            TableId::XiRenyiD => "xi_renyi_d",
            TableId::XiTsallisH => "xi_tsallis_h",
            TableId::XiTsallisD => "xi_tsallis_d",
            TableId::MomVsLambda => "mom_vs_lambda",
            TableId::XiVsLambdaA => "xi_vs_lambda_a",
            TableId::XiVsLambdaB => "xi_vs_lambda_b",
        }
    }

    fn source(self) -> &'static str {
        match self {
            TableId::Energy => include_str!("../data/energy.csv"),
            TableId::Omega => include_str!("../data/omega.csv"),
            TableId::RenyiPosH => include_str!("../data/renyi_pos_h.csv"),
            TableId::RenyiPosD => include_str!("../data/renyi_pos_d.csv"),
            TableId::TsallisPosH => include_str!("../data/tsallis_pos_h.csv"),
            TableId::TsallisPosD => include_str!("../data/tsallis_pos_d.csv"),
            TableId::RenyiMomH => include_str!("../data/renyi_mom_h.csv"),
            TableId::RenyiMomD => include_str!("../data/renyi_mom_d.csv"),
            TableId::TsallisMomH => include_str!("../data/tsallis_mom_h.csv"),
            TableId::TsallisMomD => include_str!("../data/tsallis_mom_d.csv"),
            TableId::XiRenyiH => include_str!("../data/xi_renyi_h.csv"),
            TableId::XiRenyiD => include_str!("../data/xi_renyi_d.csv"),
            TableId::XiTsallisH => include_str!("../data/xi_tsallis_h.csv"),
            TableId::XiTsallisD => include_str!("../data/xi_tsallis_d.csv"),
            TableId::MomVsLambda => include_str!("../data/mom_vs_lambda.csv"),
            TableId::XiVsLambdaA => include_str!("../data/xi_vs_lambda_a.csv"),
            TableId::XiVsLambdaB => include_str!("../data/xi_vs_lambda_b.csv"),
        }
    }

    /// The parsed reference data.
    pub fn reference(self) -> ReferenceTable {
        ReferenceTable::parse(self, self.source()).unwrap_or_else(|e| panic!("embedded table {}: {e}", self.name()))
    }
}

impl FromStr for TableId {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        TableId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let names: Vec<&str> = TableId::ALL.iter().map(|id| id.name()).collect();
            CliError::usage(format!("unknown table '{s}'; expected one of: all, {}", names.join(", ")))
        })
    }
}

/// One embedded table as printed.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub id: TableId,
    pub title: String,
    pub decimals: u32,
    pub tolerance: Option<f64>,
    pub gating: Option<Vec<String>>,
    pub row_key: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<String>)>,
}

impl ReferenceTable {
    fn parse(id: TableId, text: &str) -> Result<Self, String> {
        let mut title = String::new();
        let mut decimals = None;
        let mut tolerance = None;
        let mut gating = None;
        let mut header: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(comment) = line.strip_prefix('#') {
                if title.is_empty() {
                    title = comment.trim().to_string();
                }
                continue;
            }
            if header.is_none() {
                if let Some((key, value)) = line.split_once('=') {
                    match key {
                        "decimals" => decimals = Some(value.parse::<u32>().map_err(|e| e.to_string())?),
                        "tolerance" => tolerance = Some(value.parse::<f64>().map_err(|e| e.to_string())?),
                        "gating" => gating = Some(value.split(',').map(str::to_string).collect()),
                        other => return Err(format!("unknown metadata key '{other}'")),
                    }
                    continue;
                }
                header = Some(line.split(',').map(str::to_string).collect());
                continue;
            }
            let mut cells = line.split(',').map(str::to_string);
            let label = cells.next().ok_or("empty row")?;
            let values: Vec<String> = cells.collect();
            for v in &values {
                v.parse::<f64>().map_err(|_| format!("bad cell '{v}'"))?;
            }
            rows.push((label, values));
        }
        let mut header = header.ok_or("missing header")?;
        let row_key = header.remove(0);
        if rows.iter().any(|(_, v)| v.len() != header.len()) {
            return Err("ragged row".into());
        }
        Ok(Self {
            id,
            title,
            decimals: decimals.ok_or("missing decimals")?,
            tolerance,
            gating,
            row_key,
            columns: header,
            rows,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.rows.len() * self.columns.len()
    }

    fn is_gating(&self, column: &str) -> bool {
        self.gating.as_ref().is_none_or(|g| g.iter().any(|c| c == column))
    }

    /// 1.5 units in the last printed digit, where zeros that merely pad a
    /// cell do not count as printed digits beyond the table's precision.
    fn cell_tolerance(&self, text: &str) -> f64 {
        if let Some(t) = self.tolerance {
            return t;
        }
        let digits = text
            .split_once('.')
            .map(|(_, frac)| frac.trim_end_matches('0').len() as u32)
            .unwrap_or(0);
        1.5 * 10f64.powi(-(self.decimals.max(digits) as i32))
    }
}

/// Every embedded reference cell across all tables.
pub fn total_reference_cells() -> usize {
    TableId::ALL.iter().map(|id| id.reference().cell_count()).sum()
}

static CELLS_EVALUATED: AtomicUsize = AtomicUsize::new(0);

/// Number of reference cells recomputed so far in this process.
pub fn cells_evaluated() -> usize {
    CELLS_EVALUATED.load(Ordering::Relaxed)
}

fn fraction(label: &str) -> CliResult<f64> {
    crate::values::parse_reals(label, "alpha").map(|v| v[0])
}

fn level(label: &str) -> CliResult<u32> {
    label
        .parse::<u32>()
        .map_err(|_| CliError::usage(format!("bad state label '{label}'")))
}

fn params(lambda: f64) -> CliResult<ModelParams> {
    Ok(ModelParams::new(1.0, lambda)?)
}

/// Recomputes one cell from its row and column labels.
fn compute(id: TableId, row: &str, column: &str) -> CliResult<f64> {
    use TableId::*;
    let opts = GridOptions::default();
    let lambda_of = |id: TableId| match id {
        RenyiPosD | TsallisPosD | RenyiMomD | TsallisMomD | XiRenyiD | XiTsallisD => 0.4,
        _ => 0.0,
    };
    let value = match id {
        Energy => energy(&params(fraction(row)?)?, level(column)?),
        Omega => effective_frequency(&params(fraction(row)?)?, level(column)?),
        RenyiPosH | RenyiPosD | RenyiMomH | RenyiMomD | TsallisPosH | TsallisPosD | TsallisMomH | TsallisMomD => {
            let space = match id {
                RenyiPosH | RenyiPosD | TsallisPosH | TsallisPosD => Space::Position,
                _ => Space::Momentum,
            };
            let p = params(lambda_of(id))?;
            let (n, alpha) = (level(row)?, fraction(column)?);
            match id {
                RenyiPosH | RenyiPosD | RenyiMomH | RenyiMomD => quantities::renyi(&p, n, alpha, space, &opts)?.0,
                _ => quantities::tsallis(&p, n, alpha, space, &opts)?.0,
            }
        }
        XiRenyiH | XiRenyiD => xi_renyi(&params(lambda_of(id))?, level(row)?, fraction(column)?)?,
        XiTsallisH | XiTsallisD => xi_tsallis(&params(lambda_of(id))?, level(row)?, fraction(column)?)?,
        MomVsLambda => {
            let p = params(fraction(row)?)?;
            let (measure, n) = column
                .split_once(':')
                .ok_or_else(|| CliError::usage(format!("bad column '{column}'")))?;
            let n = level(n)?;
            match measure {
                "renyi" => quantities::renyi(&p, n, 2.0, Space::Momentum, &opts)?.0,
                "tsallis" => quantities::tsallis(&p, n, 2.0, Space::Momentum, &opts)?.0,
                other => return Err(CliError::usage(format!("bad measure '{other}'"))),
            }
        }
        XiVsLambdaA => xi_renyi(&params(fraction(row)?)?, level(column)?, 2.0)?,
        XiVsLambdaB => xi_tsallis(&params(fraction(row)?)?, level(column)?, 2.0 / 3.0)?,
    };
    CELLS_EVALUATED.fetch_add(1, Ordering::Relaxed);
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub row: String,
    pub column: String,
    pub reference: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub gating: bool,
}

impl CellResult {
    pub fn passes(&self) -> bool {
        (self.computed - self.reference).abs() <= self.tolerance
    }
}

/// Outcome of recomputing one table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub reference: ReferenceTable,
    pub cells: Vec<CellResult>,
}

impl TableReport {
    pub fn gating_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.gating).count()
    }

    pub fn gating_failures(&self) -> usize {
        self.cells.iter().filter(|c| c.gating && !c.passes()).count()
    }

    pub fn passed(&self) -> bool {
        self.gating_failures() == 0
    }

    /// Summary line, pass/fail matrix and the list of deviating cells.
    pub fn render(&self) -> String {
        let r = &self.reference;
        let mut out = String::new();
        let informational = self.cells.len() - self.gating_cells();
        let _ = writeln!(
            out,
            "table {}: {}/{} gating cells pass{} ({})",
            r.id.name(),
            self.gating_cells() - self.gating_failures(),
            self.gating_cells(),
            if informational > 0 { format!(", {informational} informational") } else { String::new() },
            r.title
        );
        let width = r.columns.iter().map(String::len).max().unwrap_or(0).max(4) + 1;
        let key_width = r.rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(r.row_key.len()) + 1;
        let _ = write!(out, "{:<key_width$}", r.row_key);
        for c in &r.columns {
            let _ = write!(out, "{c:>width$}");
        }
        out.push('\n');
        for (i, (label, _)) in r.rows.iter().enumerate() {
            let _ = write!(out, "{label:<key_width$}");
            for cell in &self.cells[i * r.columns.len()..(i + 1) * r.columns.len()] {
                let mark = match (cell.passes(), cell.gating) {
                    (true, true) => "ok",
                    (false, true) => "FAIL",
                    (true, false) => "(ok)",
                    (false, false) => "(x)",
                };
                let _ = write!(out, "{mark:>width$}");
            }
            out.push('\n');
        }
        for cell in self.cells.iter().filter(|c| !c.passes()) {
            let _ = writeln!(
                out,
                "{} {}={} column {}: reference {} computed {} diff {:.3e} tolerance {:.1e}{}",
                if cell.gating { "mismatch" } else { "informational" },
                r.row_key,
                cell.row,
                cell.column,
                sig12(cell.reference),
                sig12(cell.computed),
                (cell.computed - cell.reference).abs(),
                cell.tolerance,
                if cell.gating { "" } else { " (not gating)" }
            );
        }
        out
    }

    /// The recomputed table in the reference layout.
    pub fn recomputed_csv(&self) -> Csv {
        let r = &self.reference;
        let mut csv = Csv::new(std::iter::once(r.row_key.clone()).chain(r.columns.iter().cloned()));
        for (i, (label, _)) in r.rows.iter().enumerate() {
            let mut row = vec![label.clone()];
            row.extend(
                self.cells[i * r.columns.len()..(i + 1) * r.columns.len()]
                    .iter()
                    .map(|c| sig12(c.computed)),
            );
            csv.push(row);
        }
        csv
    }
}

/// Recomputes every cell of `id`, in parallel, optionally with one tolerance
/// for all cells.
pub fn run_table(id: TableId, tolerance_override: Option<f64>) -> CliResult<TableReport> {
    let reference = id.reference();
    let mut jobs = Vec::with_capacity(reference.cell_count());
    for (label, values) in &reference.rows {
        for (column, text) in reference.columns.iter().zip(values) {
            jobs.push((label.clone(), column.clone(), text.clone()));
        }
    }
    let computed: Vec<CliResult<f64>> = jobs.par_iter().map(|(row, column, _)| compute(id, row, column)).collect();
    let mut cells = Vec::with_capacity(jobs.len());
    for ((row, column, text), value) in jobs.into_iter().zip(computed) {
        cells.push(CellResult {
            reference: text.parse().expect("validated at parse time"),
            computed: value?,
            tolerance: tolerance_override.unwrap_or_else(|| reference.cell_tolerance(&text)),
            gating: reference.is_gating(&column),
            row,
            column,
        });
    }
    Ok(TableReport { reference, cells })
}
