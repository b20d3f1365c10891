//! Benchmark campaigns shaped like the iteration/time tables: rows are
//! (dimension, 1/h), columns are preconditioners, cells hold `its`/`time` or
//! a status code.
//!
//! Grid sizes are given as the interior point count `n`; tables print
//! `1/h = n + 1`, so the `1/h = 40` row is `n = 39`.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::{gmres, SolveReport, SolverConfig};
use crate::precond::{bssor_memory_values, PrecondKind, PrecondSpec};
use crate::problems::{build_operator, build_rhs, Boundary, Coefficients, GridSpec};
use crate::sparse::StencilMatrix;

/// Default per-cell memory guard, 4 GiB.
pub const DEFAULT_MEMORY_LIMIT: u64 = 4 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Isotropic,
    Dc1,
}

impl Table {
    pub fn default_cf(self) -> f64 {
        match self {
            Table::Isotropic => 4.5,
            Table::Dc1 => 3.0,
        }
    }

    pub fn problem(self, dim: usize) -> Result<ProblemKind> {
        match (self, dim) {
            (Table::Isotropic, 2) => Ok(ProblemKind::Iso2d),
            (Table::Isotropic, 3) => Ok(ProblemKind::Iso3d),
            (Table::Dc1, 2) => Ok(ProblemKind::Dc1_2d),
            (Table::Dc1, 3) => Ok(ProblemKind::Dc1_3d),
            _ => Err(Error::Invalid(format!("no {self} problem in {dim}D"))),
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Table::Isotropic => "isotropic",
            Table::Dc1 => "dc1",
        })
    }
}

impl FromStr for Table {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "isotropic" | "iso" => Ok(Table::Isotropic),
            "dc1" => Ok(Table::Dc1),
            _ => Err(Error::Invalid(format!(
                "unknown table `{s}` (isotropic|dc1)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "iso2d")]
    Iso2d,
    #[serde(rename = "iso3d")]
    Iso3d,
    #[serde(rename = "dc1-2d")]
    Dc1_2d,
    #[serde(rename = "dc1-3d")]
    Dc1_3d,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::Iso2d,
        ProblemKind::Iso3d,
        ProblemKind::Dc1_2d,
        ProblemKind::Dc1_3d,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ProblemKind::Iso2d => "iso2d",
            ProblemKind::Iso3d => "iso3d",
            ProblemKind::Dc1_2d => "dc1-2d",
            ProblemKind::Dc1_3d => "dc1-3d",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            ProblemKind::Iso2d | ProblemKind::Dc1_2d => 2,
            ProblemKind::Iso3d | ProblemKind::Dc1_3d => 3,
        }
    }

    pub fn grid_spec(self, n: usize) -> Result<GridSpec> {
        let coeff = match self {
            ProblemKind::Iso2d | ProblemKind::Iso3d => Coefficients::ISOTROPIC,
            ProblemKind::Dc1_2d | ProblemKind::Dc1_3d => Coefficients::Dc1,
        };
        GridSpec::new(self.dim(), n, Boundary::Dirichlet, coeff)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| {
                Error::Invalid(format!("unknown problem `{s}` (iso2d|iso3d|dc1-2d|dc1-3d)"))
            })
    }
}

/// One table cell. Only `Converged` carries numbers into the rendered table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Cell {
    #[serde(rename = "its")]
    Converged {
        iterations: usize,
        seconds: f64,
        final_relres: f64,
    },
    #[serde(rename = "NC")]
    NotConverged {
        iterations: usize,
        final_relres: f64,
        seconds: f64,
    },
    #[serde(rename = "ME")]
    MemoryExceeded {
        estimate_bytes: u64,
        limit_bytes: u64,
    },
    #[serde(rename = "NA")]
    NotApplicable { reason: String },
}

impl Cell {
    pub fn code(&self) -> &'static str {
        match self {
            Cell::Converged { .. } => "its",
            Cell::NotConverged { .. } => "NC",
            Cell::MemoryExceeded { .. } => "ME",
            Cell::NotApplicable { .. } => "NA",
        }
    }

    pub fn iterations(&self) -> Option<usize> {
        match self {
            Cell::Converged { iterations, .. } => Some(*iterations),
            _ => None,
        }
    }

    /// The `its` and `time` fields as printed in a table.
    pub fn fields(&self) -> (String, String) {
        match self {
            Cell::Converged {
                iterations,
                seconds,
                ..
            } => (iterations.to_string(), format!("{seconds:.2}")),
            Cell::NotConverged { .. } => ("NC".into(), "NA".into()),
            Cell::MemoryExceeded { .. } => ("ME".into(), "NA".into()),
            Cell::NotApplicable { .. } => ("NA".into(), "NA".into()),
        }
    }
}

/// Rough peak bytes for one solve: operator, GMRES workspace and
/// preconditioner storage.
pub fn estimate_bytes(a: &StencilMatrix, spec: &PrecondSpec, cfg: &SolverConfig) -> u64 {
    let n = a.len() as u64;
    let nnz = (1 + 2 * a.dim() as u64) * n;
    let csr = nnz * 16 + (n + 1) * 8;
    let base = 7 * n * 8 + (2 * cfg.restart as u64 + 6) * n * 8;
    let extra = match spec.kind {
        PrecondKind::Identity | PrecondKind::Hssor => 0,
        PrecondKind::Ssor => csr + n * 8,
        PrecondKind::Ilu0 => 3 * csr,
        PrecondKind::Bssor => bssor_memory_values(a, spec.block_shape(a)) * 8 + n * 8,
        PrecondKind::TwoGrid(_) => {
            let d = a.dim() as f64;
            let nc = (n as f64 / spec.cf.powf(d)).max(1.0);
            let band = 2.0 * nc.powf((d - 1.0) / d);
            3 * csr + (nc * band * 8.0) as u64
        }
    };
    base + extra
}

/// Result of one guarded solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellRun {
    pub problem: ProblemKind,
    pub n: usize,
    pub precond: String,
    pub cell: Cell,
    pub report: Option<SolveReport>,
}

/// Builds the problem, checks the memory guard, sets up the preconditioner
/// and runs GMRES from x₀ = 0 with b = A·1. Timing covers setup and solve.
/// Setup failures become `NA` cells rather than errors.
pub fn run_cell(
    problem: ProblemKind,
    n: usize,
    spec: &PrecondSpec,
    cfg: &SolverConfig,
    memory_limit: u64,
) -> Result<CellRun> {
    let grid = problem.grid_spec(n)?;
    let a = build_operator(&grid)?;
    let precond = spec.kind.label().to_string();
    let estimate = estimate_bytes(&a, spec, cfg);
    let done = |cell, report| {
        Ok(CellRun {
            problem,
            n,
            precond: precond.clone(),
            cell,
            report,
        })
    };
    if estimate > memory_limit {
        return done(
            Cell::MemoryExceeded {
                estimate_bytes: estimate,
                limit_bytes: memory_limit,
            },
            None,
        );
    }
    let b = build_rhs(&a);
    let start = Instant::now();
    let m = match spec.build(&a) {
        Ok(m) => m,
        Err(e @ (Error::Invalid(_) | Error::Io(_) | Error::Parse { .. })) => return Err(e),
        Err(e) => {
            return done(
                Cell::NotApplicable {
                    reason: e.to_string(),
                },
                None,
            )
        }
    };
    let x0 = vec![0.0; a.len()];
    let out = match gmres(&a, &b, &x0, &m, cfg) {
        Ok(out) => out,
        Err(Error::Divergence { iteration }) => {
            let seconds = start.elapsed().as_secs_f64();
            return done(
                Cell::NotConverged {
                    iterations: iteration,
                    final_relres: f64::NAN,
                    seconds,
                },
                None,
            );
        }
        Err(e) => return Err(e),
    };
    let seconds = start.elapsed().as_secs_f64();
    let mut report = out.report;
    report.labels.preconditioner = precond.clone();
    report.labels.problem = format!("{problem} n={n}");
    report.labels.rhs = "A*ones".into();
    report.labels.x0 = "zero".into();
    let cell = if report.converged {
        Cell::Converged {
            iterations: report.iterations,
            seconds,
            final_relres: report.final_relres,
        }
    } else {
        Cell::NotConverged {
            iterations: report.iterations,
            final_relres: report.final_relres,
            seconds,
        }
    };
    done(cell, Some(report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub table: Table,
    /// (dim, n) rows.
    pub dims: Vec<(usize, usize)>,
    pub methods: Vec<PrecondKind>,
    pub cf: f64,
    pub solver: SolverConfig,
    pub memory_limit: u64,
    pub partition: Option<Vec<usize>>,
}

impl BenchPlan {
    /// Table defaults: all six preconditioners in table order, GMRES(30),
    /// 500 iterations, tolerance 1e-10.
    pub fn new(table: Table, dims: Vec<(usize, usize)>) -> Self {
        Self {
            table,
            dims,
            methods: PrecondKind::ALL
                .into_iter()
                .filter(|k| *k != PrecondKind::Identity)
                .collect(),
            cf: table.default_cf(),
            solver: SolverConfig::default(),
            memory_limit: DEFAULT_MEMORY_LIMIT,
            partition: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Invalid("bench plan has no methods".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::Invalid("bench plan has no rows".into()));
        }
        for &(dim, n) in &self.dims {
            self.table.problem(dim)?.grid_spec(n)?;
        }
        if !(self.cf > 1.0) {
            return Err(Error::Invalid(format!(
                "coarsening factor must exceed 1, got {}",
                self.cf
            )));
        }
        self.solver.validate()
    }

    /// Runs every cell in order; a failing cell is recorded, never fatal.
    pub fn run(&self) -> Result<BenchReport> {
        self.run_with(|_, _| {})
    }

    /// As [`run`](Self::run), calling `progress` after each cell.
    pub fn run_with(
        &self,
        mut progress: impl FnMut(&BenchRowKey, &CellRun),
    ) -> Result<BenchReport> {
        self.validate()?;
        let mut rows = Vec::new();
        for &(dim, n) in &self.dims {
            let problem = self.table.problem(dim)?;
            let key = BenchRowKey { dim, n };
            let mut cells = Vec::new();
            for &kind in &self.methods {
                let spec = PrecondSpec {
                    partition: self.partition.clone(),
                    ..PrecondSpec::new(kind).with_cf(self.cf)
                };
                let run = match run_cell(problem, n, &spec, &self.solver, self.memory_limit) {
                    Ok(run) => run,
                    Err(e) => CellRun {
                        problem,
                        n,
                        precond: kind.label().into(),
                        cell: Cell::NotApplicable {
                            reason: e.to_string(),
                        },
                        report: None,
                    },
                };
                progress(&key, &run);
                cells.push(run.cell);
            }
            rows.push(BenchRow { dim, n, cells });
        }
        Ok(BenchReport {
            table: self.table,
            cf: self.cf,
            methods: self.methods.iter().map(|k| k.label().to_string()).collect(),
            rows,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRowKey {
    pub dim: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub dim: usize,
    pub n: usize,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub table: Table,
    pub cf: f64,
    /// Preconditioner labels, one per column.
    pub methods: Vec<String>,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    fn headings(&self) -> Vec<String> {
        let mut h = vec!["matrix".to_string(), "1/h".to_string()];
        for m in &self.methods {
            let name = m
                .parse::<PrecondKind>()
                .map(|k| k.heading().to_string())
                .unwrap_or_else(|_| m.clone());
            h.push(format!("{name} its"));
            h.push(format!("{name} time"));
        }
        h
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let mut rec = vec![format!("{}D", r.dim), (r.n + 1).to_string()];
                for c in &r.cells {
                    let (its, time) = c.fields();
                    rec.push(its);
                    rec.push(time);
                }
                rec
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for rec in std::iter::once(self.headings()).chain(self.records()) {
            let line: Vec<String> = rec.iter().map(|f| csv_field(f)).collect();
            out.push_str(&line.join(","));
            out.push_str("\r\n");
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} problem, cf = {}, GMRES(30), at most 500 iterations\n",
            self.table, self.cf
        );
        let h = self.headings();
        let _ = writeln!(out, "| {} |", h.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(h.len()));
        for rec in self.records() {
            let _ = writeln!(out, "| {} |", rec.join(" | "));
        }
        out
    }

    pub fn cell(&self, dim: usize, n: usize, method: &str) -> Option<&Cell> {
        let col = self.methods.iter().position(|m| m == method)?;
        self.rows
            .iter()
            .find(|r| r.dim == dim && r.n == n)
            .map(|r| &r.cells[col])
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
