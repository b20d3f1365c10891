//! `hssor` command-line front end.
//!
//! Exit codes: 0 converged (or command succeeded), 1 usage or runtime error,
//! 2 not converged, 3 memory guard tripped.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hssor::bench::{run_cell, BenchPlan, Cell, CellRun, ProblemKind, Table, DEFAULT_MEMORY_LIMIT};
use hssor::fourier::{verify_symbols, AnalysisMode, AnalysisReport, Convention};
use hssor::krylov::SolverConfig;
use hssor::multigrid::parse_partition;
use hssor::precond::{PrecondKind, PrecondSpec};
use hssor::problems::{GridSpec, Problem};

/// Largest periodic grid for which `analyze` runs the dense operator check.
const VERIFY_LIMIT: usize = 1000;

#[derive(Parser, Debug)]
#[command(
    name = "hssor",
    version,
    about = "Hierarchical SSOR preconditioning workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one preconditioned GMRES solve.
    Solve(SolveArgs),
    /// Run a table of solves.
    Bench(BenchArgs),
    /// Fourier symbol tables, extremes and condition numbers.
    Analyze(AnalyzeArgs),
    /// Write a test problem as Matrix Market plus a JSON descriptor.
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone)]
struct SolverFlags {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 30)]
    restart: usize,
    #[arg(long, default_value_t = 500)]
    maxit: usize,
    /// Per-solve memory guard in MiB.
    #[arg(long, default_value_t = DEFAULT_MEMORY_LIMIT >> 20)]
    memory_limit_mb: u64,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            restart: self.restart,
            max_iters: self.maxit,
            tol: self.tol,
            record_history: true,
        }
    }
    fn memory_limit(&self) -> u64 {
        self.memory_limit_mb << 20
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutFormat {
    Csv,
    Md,
    Json,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_parser = parse_from_str::<ProblemKind>)]
    problem: ProblemKind,
    /// Interior points per direction; 1/h = n + 1.
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_from_str::<PrecondKind>)]
    precond: PrecondKind,
    /// Coarsening factor for the two-grid methods (default 4.5 isotropic, 3 DC1).
    #[arg(long)]
    cf: Option<f64>,
    /// Aggregation read from a partition file instead of matching.
    #[arg(long)]
    partition: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, value_enum, default_value_t = OutFormat::Md)]
    out: OutFormat,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_parser = parse_from_str::<Table>, default_value = "isotropic")]
    table: Table,
    /// Comma-separated rows as DIM:N, e.g. 3:20,3:39.
    #[arg(long, value_delimiter = ',', value_parser = parse_row, required = true)]
    rows: Vec<(usize, usize)>,
    /// Comma-separated preconditioners (default: the six table columns).
    #[arg(long, value_delimiter = ',', value_parser = parse_from_str::<PrecondKind>)]
    methods: Vec<PrecondKind>,
    #[arg(long)]
    cf: Option<f64>,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    md: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Suppress per-cell progress on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, value_parser = parse_from_str::<AnalysisMode>, default_value = "paper")]
    mode: AnalysisMode,
    #[arg(long, value_parser = parse_from_str::<Convention>, default_value = "paper")]
    convention: Convention,
    #[arg(long, default_value_t = 1.0)]
    l1: f64,
    #[arg(long, default_value_t = 1.0)]
    l2: f64,
    #[arg(long, default_value_t = 1.0)]
    l3: f64,
    /// Write the mode table here; otherwise it goes to stdout and the
    /// summary to stderr.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Omit the generation-time comment line.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_from_str::<ProblemKind>, required_unless_present = "spec")]
    problem: Option<ProblemKind>,
    #[arg(long, required_unless_present = "spec")]
    n: Option<usize>,
    /// JSON grid descriptor to generate from instead of --problem/--n.
    #[arg(long, conflicts_with_all = ["problem", "n"])]
    spec: Option<PathBuf>,
    /// Output stem; writes STEM.mtx and STEM.json.
    #[arg(long)]
    out: PathBuf,
}

fn parse_from_str<T: std::str::FromStr<Err = hssor::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: hssor::Error| e.to_string())
}

fn parse_row(s: &str) -> Result<(usize, usize), String> {
    let (d, n) = s
        .split_once(':')
        .ok_or_else(|| format!("row `{s}` is not DIM:N"))?;
    let d = d
        .trim()
        .parse()
        .map_err(|_| format!("bad dimension in `{s}`"))?;
    let n = n.trim().parse().map_err(|_| format!("bad size in `{s}`"))?;
    Ok((d, n))
}

fn default_cf(problem: ProblemKind) -> f64 {
    match problem {
        ProblemKind::Iso2d | ProblemKind::Iso3d => Table::Isotropic.default_cf(),
        ProblemKind::Dc1_2d | ProblemKind::Dc1_3d => Table::Dc1.default_cf(),
    }
}

fn timestamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix {secs}")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a).map(|_| 0),
        Command::Analyze(a) => analyze(a).map(|_| 0),
        Command::Generate(a) => generate(a).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn solve(args: SolveArgs) -> anyhow::Result<u8> {
    let cfg = args.solver.config();
    let mut spec =
        PrecondSpec::new(args.precond).with_cf(args.cf.unwrap_or_else(|| default_cf(args.problem)));
    if let Some(path) = &args.partition {
        if !matches!(args.precond, PrecondKind::TwoGrid(_)) {
            bail!("--partition only applies to gmg-hs and gmg-ss");
        }
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        spec.partition = Some(parse_partition(&text)?);
    }
    let run = run_cell(
        args.problem,
        args.n,
        &spec,
        &cfg,
        args.solver.memory_limit(),
    )?;
    print!("{}", render_run(&run, args.out)?);
    Ok(match &run.cell {
        Cell::Converged { .. } => 0,
        Cell::NotConverged { .. } => 2,
        Cell::MemoryExceeded { .. } => 3,
        Cell::NotApplicable { reason } => {
            eprintln!("error: {reason}");
            1
        }
    })
}

fn render_run(run: &CellRun, out: OutFormat) -> anyhow::Result<String> {
    let (its, time) = run.cell.fields();
    let relres = run
        .report
        .as_ref()
        .map(|r| format!("{:.6e}", r.final_relres))
        .unwrap_or_else(|| "NA".into());
    Ok(match out {
        OutFormat::Json => serde_json::to_string_pretty(run)? + "\n",
        OutFormat::Csv => format!(
            "problem,n,1/h,precond,status,its,time,relres\r\n{},{},{},{},{},{its},{time},{relres}\r\n",
            run.problem,
            run.n,
            run.n + 1,
            run.precond,
            run.cell.code()
        ),
        OutFormat::Md => format!(
            "| problem | 1/h | precond | status | its | time | relres |\n|---|---|---|---|---|---|---|\n| {} | {} | {} | {} | {its} | {time} | {relres} |\n",
            run.problem,
            run.n + 1,
            run.precond,
            run.cell.code()
        ),
    })
}

fn bench(args: BenchArgs) -> anyhow::Result<()> {
    let mut plan = BenchPlan::new(args.table, args.rows);
    if !args.methods.is_empty() {
        plan.methods = args.methods;
    }
    if let Some(cf) = args.cf {
        plan.cf = cf;
    }
    plan.solver = args.solver.config();
    plan.memory_limit = args.solver.memory_limit();
    let quiet = args.quiet;
    let report = plan.run_with(|key, run| {
        if !quiet {
            let (its, time) = run.cell.fields();
            eprintln!(
                "{}D 1/h={} {}: {its} {time}",
                key.dim,
                key.n + 1,
                run.precond
            );
        }
    })?;
    let md = report.to_markdown();
    if let Some(p) = &args.csv {
        fs::write(p, report.to_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &args.md {
        fs::write(p, &md).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &args.json {
        fs::write(p, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing {}", p.display()))?;
    }
    print!("{md}");
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> anyhow::Result<()> {
    let coeffs = [args.l1, args.l2, args.l3];
    let report = AnalysisReport::compute(args.n, args.dim, coeffs, args.mode, args.convention)?;
    let stamp = (!args.no_timestamp).then(timestamp);
    let mut csv = String::new();
    if let Some(ts) = &stamp {
        csv.push_str(&format!("# generated: {ts}\n"));
    }
    csv.push_str(&report.render_csv());
    let mut summary = report.render_summary(stamp.as_deref());
    let points = args.n.checked_pow(args.dim as u32).unwrap_or(usize::MAX);
    if args.convention == Convention::Circulant && args.n >= 3 && points <= VERIFY_LIMIT {
        let v = verify_symbols(args.n, args.dim, coeffs)?;
        summary.push_str(&format!(
            "verify modes={} max_residual_A={:.3e} max_residual_B={:.3e}\n",
            v.modes, v.max_residual_a, v.max_residual_b
        ));
    }
    match &args.csv {
        Some(p) => {
            fs::write(p, csv).with_context(|| format!("writing {}", p.display()))?;
            print!("{summary}");
        }
        None => {
            std::io::stdout().write_all(csv.as_bytes())?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let spec = match (&args.spec, args.problem, args.n) {
        (Some(path), _, _) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            GridSpec::from_json(&text)?
        }
        (None, Some(p), Some(n)) => p.grid_spec(n)?,
        _ => bail!("give --spec or both --problem and --n"),
    };
    let problem = Problem::generate(spec)?;
    problem.export(&args.out)?;
    println!(
        "wrote {0}.mtx and {0}.json ({1} unknowns)",
        args.out.display(),
        problem.a.len()
    );
    Ok(())
}
