//! Command-line front end: single solves, convergence studies,
//! regularization sweeps and the estimate verification suite.
//!
//! Exit codes: 0 success, 1 usage error, 2 solver failure, 3 verification
//! failure.

use crate::error::Error;
use crate::ocp::{
    fit_presaturation_slope, regularization_sweep, run_convergence_study, ConvergenceTable,
    OcpConfig, RhoRule, SolverPath, Target,
};
use crate::solver::InnerMode;
use crate::verify::{verify_estimates, VerifyOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "trackfem",
    version,
    about = "Matrix-free tensor-product FEM solver for elliptic optimal control with boundary value tracking",
    after_help = "Running without a subcommand executes `study --dim 3 --levels 1..4 \
                  --target cosine --rho h2 --path all`."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve one level and print a one-row table
    Solve(SolveArgs),
    /// Convergence study over a level range
    Study(StudyArgs),
    /// Sweep the regularization weight at a fixed level
    RhoSweep(SweepArgs),
    /// Verify the interpolation/projection estimates and space invariants
    VerifyAppendix(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    /// prod_i cos(pi x_i): smooth, Neumann-compatible
    Cosine,
    /// quadratic trace violating the Neumann condition
    Quadratic,
}

impl TargetArg {
    fn to_target(self) -> Target {
        match self {
            TargetArg::Cosine => Target::Cosine,
            TargetArg::Quadratic => Target::Quadratic,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableFormat {
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug)]
enum PathArg {
    One(SolverPath),
    All,
}

impl PathArg {
    fn paths(self) -> Vec<SolverPath> {
        match self {
            PathArg::One(p) => vec![p],
            PathArg::All => vec![
                SolverPath::FullPcg,
                SolverPath::SchurCg,
                SolverPath::SchurPcg,
            ],
        }
    }
}

fn parse_path(s: &str) -> Result<PathArg, String> {
    match s {
        "schur-cg" => Ok(PathArg::One(SolverPath::SchurCg)),
        "schur-pcg" => Ok(PathArg::One(SolverPath::SchurPcg)),
        "full-pcg" => Ok(PathArg::One(SolverPath::FullPcg)),
        "all" => Ok(PathArg::All),
        _ => Err(format!(
            "unknown path '{s}' (expected schur-cg, schur-pcg, full-pcg or all)"
        )),
    }
}

fn parse_rho(s: &str) -> Result<RhoRule, String> {
    match s {
        "h" => Ok(RhoRule::H),
        "h32" => Ok(RhoRule::H32),
        "h2" => Ok(RhoRule::H2),
        _ => {
            if let Some(v) = s.strip_prefix("const:") {
                let v: f64 = v.parse().map_err(|e| format!("bad constant: {e}"))?;
                if v <= 0.0 {
                    return Err("regularization weight must be positive".into());
                }
                Ok(RhoRule::Const(v))
            } else {
                Err(format!(
                    "unknown rho rule '{s}' (expected h, h32, h2 or const:<v>)"
                ))
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum InnerArg {
    Exact,
    Pcg(f64),
}

fn parse_inner(s: &str) -> Result<InnerArg, String> {
    match s {
        "exact" => Ok(InnerArg::Exact),
        _ => {
            if let Some(t) = s.strip_prefix("pcg:") {
                let tol: f64 = t.parse().map_err(|e| format!("bad tolerance: {e}"))?;
                if !(tol > 0.0 && tol < 1.0) {
                    return Err("inner tolerance must lie in (0, 1)".into());
                }
                Ok(InnerArg::Pcg(tol))
            } else {
                Err(format!("unknown inner mode '{s}' (expected exact or pcg:<tol>)"))
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct LevelRange {
    lo: usize,
    hi: usize,
}

fn parse_level_range(s: &str) -> Result<LevelRange, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got '{s}'"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad level: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad level: {e}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("levels must satisfy 1 <= A <= B, got {lo}..{hi}"));
    }
    if hi > 12 {
        return Err(format!("level {hi} out of range (max 12)"));
    }
    Ok(LevelRange { lo, hi })
}

fn parse_rho_list(s: &str) -> Result<RhoList, String> {
    let mut vals = Vec::new();
    for part in s.split(',') {
        let v: f64 = part.trim().parse().map_err(|e| format!("bad value: {e}"))?;
        if v <= 0.0 {
            return Err("sweep weights must be positive".into());
        }
        vals.push(v);
    }
    if vals.windows(2).any(|w| w[1] >= w[0]) {
        return Err("sweep weights must be strictly descending".into());
    }
    Ok(RhoList(vals))
}

#[derive(Clone, Debug)]
struct RhoList(Vec<f64>);

fn default_rho_ladder() -> RhoList {
    // 2^0, 2^-2, ..., 2^-16
    RhoList((0..=8).map(|k| 0.25_f64.powi(k)).collect())
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Spatial dimension
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=3))]
    dim: u32,
    /// Target boundary data
    #[arg(long, value_enum, default_value_t = TargetArg::Cosine)]
    target: TargetArg,
    /// Regularization rule: h | h32 | h2 | const:<v>
    #[arg(long, value_parser = parse_rho, default_value = "h2")]
    rho: RhoRule,
    /// Solver path: schur-cg | schur-pcg | full-pcg | all
    #[arg(long, value_parser = parse_path, default_value = "all")]
    path: PathArg,
    /// Outer relative residual tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Interior solve inside the Schur apply: exact | pcg:<tol>
    #[arg(long, value_parser = parse_inner, default_value = "exact")]
    inner: InnerArg,
    /// Output format
    #[arg(long, value_enum, default_value_t = TableFormat::Md)]
    format: TableFormat,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn base_config(&self, level: usize) -> OcpConfig {
        let mut cfg = OcpConfig::new(self.dim as usize, level, self.rho, self.target.to_target());
        cfg.solver.rel_tol = self.tol;
        match self.inner {
            InnerArg::Exact => cfg.solver.inner_mode = InnerMode::FastDiagonalization,
            InnerArg::Pcg(tol) => {
                cfg.solver.inner_mode = InnerMode::InnerPcg;
                cfg.solver.inner_rel_tol = tol;
            }
        }
        cfg
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Refinement level (n = 2^(level+1) intervals per direction)
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=12))]
    level: u32,
}

#[derive(Args, Debug)]
struct StudyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Level range A..B
    #[arg(long, value_parser = parse_level_range, default_value = "1..4")]
    levels: LevelRange,
    /// Solve levels in parallel with this many threads (default: the
    /// TRACKFEM_JOBS environment variable, else 1)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Refinement level
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=12))]
    level: u32,
    /// Descending comma-separated regularization weights
    #[arg(long, value_parser = parse_rho_list)]
    rhos: Option<RhoList>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Seed for the randomized invariant checks
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Renders a convergence table. CSV columns are exactly
/// `level,dofs,h,error,eoc,iters_full_pcg,iters_scg,iters_pscg`; empty
/// cells mark paths that were not run. Markdown mirrors the same schema.
pub fn emit_table(table: &ConvergenceTable, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut s = String::from("level,dofs,h,error,eoc,iters_full_pcg,iters_scg,iters_pscg\n");
            for row in &table.rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    row.level,
                    row.dofs,
                    format_h(row.h),
                    row.boundary_error.map(format_err).unwrap_or_default(),
                    row.eoc.map(|e| format!("{e:.2}")).unwrap_or_default(),
                    row.iters_full_pcg.map(|i| i.to_string()).unwrap_or_default(),
                    row.iters_scg.map(|i| i.to_string()).unwrap_or_default(),
                    row.iters_pscg.map(|i| i.to_string()).unwrap_or_default(),
                ));
            }
            s
        }
        TableFormat::Md => {
            let header = [
                "level", "dofs", "h", "error", "eoc", "full-pcg", "scg", "pscg",
            ];
            let mut rows: Vec<[String; 8]> = Vec::new();
            for row in &table.rows {
                rows.push([
                    row.level.to_string(),
                    row.dofs.to_string(),
                    format_h(row.h),
                    row.boundary_error
                        .map(format_err)
                        .unwrap_or_else(|| "-".into()),
                    row.eoc.map(|e| format!("{e:.2}")).unwrap_or_else(|| "-".into()),
                    row.iters_full_pcg
                        .map(|i| i.to_string())
                        .unwrap_or_else(|| "-".into()),
                    row.iters_scg
                        .map(|i| i.to_string())
                        .unwrap_or_else(|| "-".into()),
                    row.iters_pscg
                        .map(|i| i.to_string())
                        .unwrap_or_else(|| "-".into()),
                ]);
            }
            let mut width = [0usize; 8];
            for (w, h) in width.iter_mut().zip(header) {
                *w = h.len();
            }
            for r in &rows {
                for (w, c) in width.iter_mut().zip(r) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cells: &[String; 8]| -> String {
                let mut s = String::from("|");
                for (c, w) in cells.iter().zip(width) {
                    s.push_str(&format!(" {c:>w$} |"));
                }
                s.push('\n');
                s
            };
            let mut s = line(&header.map(String::from));
            let dashes: [String; 8] = width.map(|w| "-".repeat(w));
            s.push_str(&line(&dashes));
            for r in &rows {
                s.push_str(&line(r));
            }
            for row in &table.rows {
                if let Some(f) = &row.failure {
                    s.push_str(&format!("level {}: {}\n", row.level, f));
                }
            }
            s
        }
    }
}

/// Shortest scientific form for the binary mesh sizes (0.25 -> "2.5e-1").
fn format_h(h: f64) -> String {
    format!("{h:e}")
}

/// Errors as 4-significant-digit scientific notation.
fn format_err(e: f64) -> String {
    format!("{e:.3e}")
}

fn render_sweep(
    records: &[crate::ocp::RhoRecord],
    target_norm: f64,
    format: TableFormat,
) -> String {
    match format {
        TableFormat::Csv => {
            let mut s = String::from("rho,error,h1_norm\n");
            for r in records {
                s.push_str(&format!(
                    "{},{},{}\n",
                    format_err(r.rho),
                    format_err(r.boundary_error),
                    format_err(r.h1_norm)
                ));
            }
            s
        }
        TableFormat::Md => {
            let mut s = String::from("|          rho |       error |     h1_norm |\n");
            s.push_str("| ------------ | ----------- | ----------- |\n");
            for r in records {
                s.push_str(&format!(
                    "| {:>12} | {:>11} | {:>11} |\n",
                    format_err(r.rho),
                    format_err(r.boundary_error),
                    format_err(r.h1_norm)
                ));
            }
            match fit_presaturation_slope(records, target_norm) {
                Some((slope, n)) => s.push_str(&format!(
                    "pre-saturation slope: {slope:.3} over {n} points (target norm {})\n",
                    format_err(target_norm)
                )),
                None => s.push_str("pre-saturation slope: not enough points\n"),
            }
            s
        }
    }
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(text.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn effective_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("TRACKFEM_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

fn execute(cli: Cli) -> Result<i32, Error> {
    let cmd = cli.cmd.unwrap_or(Cmd::Study(StudyArgs {
        common: CommonArgs {
            dim: 3,
            target: TargetArg::Cosine,
            rho: RhoRule::H2,
            path: PathArg::All,
            tol: 1e-9,
            inner: InnerArg::Exact,
            format: TableFormat::Md,
            out: None,
        },
        levels: LevelRange { lo: 1, hi: 4 },
        jobs: None,
    }));
    match cmd {
        Cmd::Solve(args) => {
            let base = args.common.base_config(args.level as usize);
            let table = run_convergence_study(
                &base,
                &[args.level as usize],
                &args.common.path.paths(),
                1,
            )?;
            let failed = table.rows.iter().any(|r| r.failure.is_some());
            write_output(&emit_table(&table, args.common.format), &args.common.out)?;
            Ok(if failed { 2 } else { 0 })
        }
        Cmd::Study(args) => {
            let base = args.common.base_config(args.levels.lo);
            let levels: Vec<usize> = (args.levels.lo..=args.levels.hi).collect();
            let table = run_convergence_study(
                &base,
                &levels,
                &args.common.path.paths(),
                effective_jobs(args.jobs),
            )?;
            let failed = table.rows.iter().any(|r| r.failure.is_some());
            write_output(&emit_table(&table, args.common.format), &args.common.out)?;
            Ok(if failed { 2 } else { 0 })
        }
        Cmd::RhoSweep(args) => {
            let mut base = args.common.base_config(args.level as usize);
            if matches!(args.common.path, PathArg::One(_)) {
                base.path = args.common.path.paths()[0];
            }
            let rhos = args.rhos.unwrap_or_else(default_rho_ladder);
            let records = regularization_sweep(&base, &rhos.0)?;
            let space = base.space()?;
            let quad = crate::quadrature::gauss_rule(base.quad_order)?;
            let norm = crate::ocp::boundary_l2_norm(&base.target, &space, &quad);
            write_output(
                &render_sweep(&records, norm, args.common.format),
                &args.common.out,
            )?;
            Ok(0)
        }
        Cmd::VerifyAppendix(args) => {
            let report = verify_estimates(&VerifyOptions {
                seed: args.seed,
                ..Default::default()
            })?;
            write_output(&report.render(), &args.out)?;
            Ok(if report.passed() { 0 } else { 3 })
        }
    }
}

fn classify(err: &Error) -> i32 {
    match err {
        Error::InvalidConfig(_) | Error::InvalidMesh(_) | Error::UnsupportedQuadratureOrder(_) => 1,
        _ => 2,
    }
}

/// Parses `argv` and runs the requested command, returning the process
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            }
        }
        Ok(cli) => match execute(cli) {
            Ok(code) => code,
            Err(err) => {
                eprintln!("error: {err}");
                classify(&err)
            }
        },
    }
}
