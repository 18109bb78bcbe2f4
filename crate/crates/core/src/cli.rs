//! Command-line front end. [`run`] holds all the logic so that tests can
//! drive it in-process; the binary only forwards its exit code.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::dependence::DEFAULT_TOL;
use crate::grid::{gaussian_copula_grid, lambda_bar, local_dependence_masked, odds_ratio_function};
use crate::io::{format_grid, format_surface, format_table, ingest_pairs, parse_grid, parse_table};
use crate::measures::Calibration;
use crate::projection::{IpfOptions, DEFAULT_IPF_TOL, DEFAULT_MAX_ITER};
use crate::report::{analyze, compare_tables, fit_margins, grid_delta, to_json, AnalysisReport, SCHEMA};
use crate::table::MarginPair;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "depcore", version, about = "Dependence analysis of contingency tables and gridded densities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count `x,y[,count]` pairs into a probability table.
    Ingest(IngestArgs),
    /// Full dependence report of a table, as JSON.
    Analyze(AnalyzeArgs),
    /// Fit a table to new margins while keeping its dependence.
    Ipf(IpfArgs),
    /// Decide whether two tables share the same dependence.
    Compare(CompareArgs),
    /// Operations on gridded densities over the unit square.
    Grid(GridArgs),
}

#[derive(Debug, Args)]
struct IngestArgs {
    pairs: PathBuf,
    /// Table output path (stdout when absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Label map output path. Defaults to `<output>.labels.json` when
    /// `--output` is given.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(required_unless_present = "batch", conflicts_with = "batch")]
    table: Option<PathBuf>,
    #[arg(long, default_value = "yule")]
    calibration: Calibration,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Analyze every `*.csv` file of a directory.
    #[arg(long)]
    batch: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IpfArgs {
    table: PathBuf,
    /// Target row margin, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    rows: Vec<f64>,
    /// Target column margin, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    cols: Vec<f64>,
    /// Convergence threshold on the L1 margin gap.
    #[arg(long, default_value_t = DEFAULT_IPF_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Tolerance of the dependence-preservation check.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    dep_tol: f64,
}

#[derive(Debug, Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GridOp {
    Delta,
    Lambda,
    Omega,
    Gamma,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(required_unless_present = "make_gauss")]
    grid: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "delta")]
    op: GridOp,
    /// Pivot cell `i,j` of the odds ratio function (grid centre by default).
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pivot: Option<Vec<usize>>,
    /// Write a Gaussian copula grid with correlation RHO at level K instead.
    #[arg(long, num_args = 2, value_names = ["RHO", "K"], allow_negative_numbers = true, conflicts_with = "grid")]
    make_gauss: Option<Vec<String>>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::from(format!("{}: {e}", path.display())))
}

fn text(bytes: &[u8], path: &Path) -> Result<String, Failure> {
    String::from_utf8(bytes.to_vec()).map_err(|_| Failure::from(format!("{}: not valid UTF-8", path.display())))
}

fn emit(out: &mut dyn Write, dest: Option<&Path>, content: &str) -> Result<(), Failure> {
    match dest {
        Some(p) => fs::write(p, content).map_err(|e| Failure::from(format!("{}: {e}", p.display()))),
        None => out.write_all(content.as_bytes()).map_err(Failure::from),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Ingest(a) => cmd_ingest(a, out),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Ipf(a) => cmd_ipf(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Grid(a) => cmd_grid(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_ingest(a: IngestArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let bytes = read(&a.pairs)?;
    let got = ingest_pairs(&text(&bytes, &a.pairs)?)?;
    emit(out, a.output.as_deref(), &format_table(&got.table))?;
    let labels_path = a.labels.or_else(|| {
        a.output.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".labels.json");
            PathBuf::from(s)
        })
    });
    if let Some(p) = labels_path {
        emit(out, Some(&p), &to_json(&got.labels))?;
    }
    Ok(EXIT_OK)
}

fn analyze_file(path: &Path, calibration: Calibration, tol: f64) -> Result<AnalysisReport, Failure> {
    let bytes = read(path)?;
    let t = parse_table(&text(&bytes, path)?).map_err(|e| Failure::from(format!("{}: {e}", path.display())))?;
    Ok(analyze(&bytes, &t, calibration, tol))
}

#[derive(Serialize)]
struct BatchEntry {
    file: String,
    report: Option<AnalysisReport>,
    error: Option<String>,
}

#[derive(Serialize)]
struct BatchReport {
    schema: &'static str,
    results: Vec<BatchEntry>,
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if let Some(dir) = a.batch {
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(|e| Failure::from(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "csv"))
            .collect();
        files.sort();
        let results: Vec<BatchEntry> = files
            .par_iter()
            .map(|p| {
                let file = p.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
                match analyze_file(p, a.calibration, a.tol) {
                    Ok(r) => BatchEntry { file, report: Some(r), error: None },
                    Err(f) => BatchEntry { file, report: None, error: Some(f.message) },
                }
            })
            .collect();
        let any_failed = results.iter().any(|r| r.error.is_some());
        emit(out, None, &to_json(&BatchReport { schema: SCHEMA, results }))?;
        return Ok(if any_failed { EXIT_INPUT } else { EXIT_OK });
    }
    let path = a.table.expect("clap enforces a table or --batch");
    let report = analyze_file(&path, a.calibration, a.tol)?;
    emit(out, None, &to_json(&report))?;
    Ok(EXIT_OK)
}

fn cmd_ipf(a: IpfArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let bytes = read(&a.table)?;
    let t = parse_table(&text(&bytes, &a.table)?)?;
    let target = MarginPair::new(a.rows, a.cols)?;
    let opts = IpfOptions {
        tol: a.tol,
        max_iter: a.max_iter,
    };
    let rep = fit_margins(&bytes, &t, &target, opts, a.dep_tol)?;
    emit(out, None, &to_json(&rep))?;
    Ok(if rep.is_infeasible() { EXIT_INFEASIBLE } else { EXIT_OK })
}

fn cmd_compare(a: CompareArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (ba, bb) = (read(&a.a)?, read(&a.b)?);
    let ta = parse_table(&text(&ba, &a.a)?)?;
    let tb = parse_table(&text(&bb, &a.b)?)?;
    let rep = compare_tables([&ba, &bb], &ta, &tb, a.tol)?;
    emit(out, None, &to_json(&rep))?;
    Ok(EXIT_OK)
}

fn cmd_grid(a: GridArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if let Some(spec) = a.make_gauss {
        let rho: f64 = spec[0].parse().map_err(|_| Failure::from(format!("bad RHO `{}`", spec[0])))?;
        let level: u32 = spec[1].parse().map_err(|_| Failure::from(format!("bad K `{}`", spec[1])))?;
        let g = gaussian_copula_grid(rho, level)?;
        emit(out, a.output.as_deref(), &format_grid(&g))?;
        return Ok(EXIT_OK);
    }
    let path = a.grid.expect("clap enforces a grid file or --make-gauss");
    let bytes = read(&path)?;
    let g = parse_grid(&text(&bytes, &path)?)?;
    let n = g.size();
    let centre = move |i: usize| (i as f64 + 0.5) / n as f64;
    let corner = move |i: usize| (i + 1) as f64 / n as f64;
    let content = match a.op {
        GridOp::Delta => to_json(&grid_delta(&bytes, &g)?),
        GridOp::Lambda => format_surface(&lambda_bar(&g)?, centre),
        GridOp::Omega => {
            let pivot = match a.pivot.as_deref() {
                None => (n / 2, n / 2),
                Some([i, j]) => (*i, *j),
                Some(_) => return Err(Failure::from("--pivot expects `i,j`")),
            };
            format_surface(&odds_ratio_function(&g, pivot)?, centre)
        }
        GridOp::Gamma => format_surface(&local_dependence_masked(&g), corner),
    };
    emit(out, a.output.as_deref(), &content)?;
    Ok(EXIT_OK)
}
