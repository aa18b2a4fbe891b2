//! Command-line front end.
//!
//! Exit status: 0 when everything succeeded and every check passed, 1 when a
//! check failed, 2 for input errors, 3 for engine errors (degree cap, domain).

mod problem;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use problem::{
    parse_builtin, parse_problem, parse_problem_str, InputError, MatrixSpec, OptionsSpec,
    ParsedProblem, ProblemFile, DEFAULT_MU_MAX, DEFAULT_TOL,
};

use crate::cauchy::solve;
use crate::commuting::{default_commute_tol, is_commuting, transition_commuting};
use crate::error::Error;
use crate::matrep::MatrixFunction;
use crate::pbs::{transition, TransitionOptions, TransitionResult};
use crate::verify::{
    closed_form_residual, flow_residual, inverse_residual, liouville_residual, reference_residual,
    volterra_residual, CheckReport, ClosedFormKind, DEFAULT_GRID,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_ENGINE: u8 = 3;

/// Tolerances used by `verify`.
pub const LIOUVILLE_TOL: f64 = 1e-9;
pub const FLOW_TOL: f64 = 1e-9;
pub const EXAMPLE1_ORACLE_TOL: f64 = 1e-10;
pub const AIRY_ORACLE_TOL: f64 = 1e-9;
pub const COMMUTING_ORACLE_TOL: f64 = 1e-10;
pub const RK4_ORACLE_TOL: f64 = 1e-7;
pub const RK4_ORACLE_STEPS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "pbs",
    version,
    about = "Linear time-varying ODEs via the Peano-Baker series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the state-transition matrix Φ(t; t0).
    Transition(CommonArgs),
    /// Evaluate the solution x(t) of the initial value problem.
    Solve(CommonArgs),
    /// Run invariant and oracle checks.
    Verify(VerifyArgs),
    /// Time the transition at increasingly strict tolerances.
    Bench(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON problem file.
    #[arg(long)]
    pub problem: PathBuf,
    /// Times: a single value, a comma list, or start:stop:step.
    #[arg(long = "t", allow_hyphen_values = true)]
    pub times: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "mu-max")]
    pub mu_max: Option<f64>,
    #[arg(long = "degree-cap")]
    pub degree_cap: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write the piecewise-polynomial Φ as JSON to this path.
    #[arg(long = "dump-phi")]
    pub dump_phi: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma list of liouville, flow, volterra, oracle, all.
    #[arg(long, default_value = "all")]
    pub checks: String,
}

/// Failure of a command, mapped onto an exit status.
#[derive(Debug)]
pub enum CliError {
    Input(InputError),
    Engine(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Engine(Error::InvalidArgument(_)) => EXIT_INPUT,
            Self::Engine(_) => EXIT_ENGINE,
            Self::Io(_) => EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Input(e) => write!(f, "input error: {e}"),
            Self::Engine(e) => write!(f, "engine error: {e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        Self::Input(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Engine(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Io(e.into())
    }
}

/// One output row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub time: f64,
    /// Row-major matrix entries or vector components.
    pub values: Vec<f64>,
    pub bound: f64,
}

/// Parses `1.5`, `0,0.5,1` or `start:stop:step` (inclusive of `stop`).
pub fn parse_times(spec: &str) -> Result<Vec<f64>, InputError> {
    let bad = |msg: String| InputError::new("--t", msg);
    let num = |s: &str| -> Result<f64, InputError> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| bad(format!("{s:?} is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad(format!("{s:?} is not finite")))
        }
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(num).collect(),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step == 0.0 || (stop - start) * step < 0.0 {
                return Err(bad(
                    "step must be nonzero and point from start to stop".into()
                ));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            if count > 10_000_000 {
                return Err(bad("range has too many points".into()));
            }
            Ok((0..=count).map(|k| start + step * k as f64).collect())
        }
        _ => Err(bad(
            "expected a value, a comma list, or start:stop:step".into()
        )),
    }
}

fn resolve(args: &CommonArgs) -> Result<ParsedProblem, CliError> {
    let mut parsed = parse_problem(&args.problem)?;
    let opts = &mut parsed.problem.options;
    if let Some(tol) = args.tol {
        if tol <= 0.0 || !tol.is_finite() {
            return Err(InputError::new("--tol", "must be positive and finite").into());
        }
        opts.tol = tol;
    }
    if let Some(mu) = args.mu_max {
        if mu <= 0.0 || !mu.is_finite() {
            return Err(InputError::new("--mu-max", "must be positive and finite").into());
        }
        opts.mu_max = mu;
    }
    if let Some(cap) = args.degree_cap {
        if cap == 0 {
            return Err(InputError::new("--degree-cap", "must be positive").into());
        }
        opts.degree_cap = cap;
    }
    Ok(parsed)
}

fn requested_times(args: &CommonArgs, parsed: &ParsedProblem) -> Result<Vec<f64>, CliError> {
    let times = match &args.times {
        Some(spec) => parse_times(spec)?,
        None => vec![parsed.problem.domain.hi()],
    };
    for &t in &times {
        if !parsed.problem.domain.contains(t) {
            return Err(InputError::new(
                "--t",
                format!(
                    "{t} lies outside the domain [{}, {}]",
                    parsed.problem.domain.lo(),
                    parsed.problem.domain.hi()
                ),
            )
            .into());
        }
    }
    Ok(times)
}

/// Forward and backward transitions from `t0` reaching every requested time.
fn transitions_covering(
    a: &MatrixFunction,
    t0: f64,
    times: &[f64],
    options: &TransitionOptions,
) -> Result<Vec<TransitionResult>, Error> {
    let hi = times.iter().copied().fold(t0, f64::max);
    let lo = times.iter().copied().fold(t0, f64::min);
    let mut out = vec![transition(a, t0, hi, options)?];
    if lo < t0 {
        out.push(transition(a, t0, lo, options)?);
    }
    Ok(out)
}

fn pick(results: &[TransitionResult], t: f64) -> &TransitionResult {
    results
        .iter()
        .find(|r| r.covered().contains(t))
        .expect("transitions cover every requested time")
}

fn header(kind: &str, dim: usize) -> String {
    let mut cols = vec!["time".to_string()];
    if kind == "transition" {
        for i in 0..dim {
            for j in 0..dim {
                cols.push(format!("entry_{i}{j}"));
            }
        }
    } else {
        cols.extend((0..dim).map(|i| format!("x_{i}")));
    }
    cols.push("bound".into());
    cols.join(",")
}

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e15)`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn write_records(
    out: &mut dyn Write,
    format: Format,
    kind: &str,
    dim: usize,
    records: &[OutputRecord],
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", header(kind, dim))?;
            for r in records {
                let mut line = fmt_f64(r.time);
                for v in &r.values {
                    line.push(',');
                    line.push_str(&fmt_f64(*v));
                }
                line.push(',');
                line.push_str(&fmt_f64(r.bound));
                writeln!(out, "{line}")?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, records)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn dump_phi(path: &PathBuf, results: &[TransitionResult]) -> Result<(), CliError> {
    let file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), results)?;
    Ok(())
}

pub fn cmd_transition(args: &CommonArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let parsed = resolve(args)?;
    let times = requested_times(args, &parsed)?;
    let p = &parsed.problem;
    let results = transitions_covering(&p.a, p.t0, &times, &p.options)?;
    let records = times
        .iter()
        .map(|&t| {
            let r = pick(&results, t);
            Ok(OutputRecord {
                time: t,
                values: r.eval(t)?.as_slice().to_vec(),
                bound: r.bound_at(t)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    write_records(out, args.format, "transition", p.dim(), &records)?;
    if let Some(path) = &args.dump_phi {
        dump_phi(path, &results)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_solve(args: &CommonArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let parsed = resolve(args)?;
    if !parsed.has_x0 {
        return Err(InputError::new("x0", "required by solve").into());
    }
    let times = requested_times(args, &parsed)?;
    let p = &parsed.problem;
    let records = times
        .iter()
        .map(|&t| {
            let s = solve(p, t)?;
            Ok(OutputRecord {
                time: t,
                values: s.state,
                bound: s.error_bound,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    write_records(out, args.format, "solve", p.dim(), &records)?;
    if let Some(path) = &args.dump_phi {
        let results = transitions_covering(&p.a, p.t0, &times, &p.options)?;
        dump_phi(path, &results)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Liouville,
    Flow,
    Volterra,
    Oracle,
}

pub fn parse_checks(spec: &str) -> Result<Vec<CheckKind>, InputError> {
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim) {
        let kinds: &[CheckKind] = match name {
            "all" => &[
                CheckKind::Liouville,
                CheckKind::Flow,
                CheckKind::Volterra,
                CheckKind::Oracle,
            ],
            "liouville" => &[CheckKind::Liouville],
            "flow" => &[CheckKind::Flow],
            "volterra" => &[CheckKind::Volterra],
            "oracle" => &[CheckKind::Oracle],
            other => return Err(InputError::new(
                "--checks",
                format!(
                    "unknown check {other:?}; expected liouville, flow, volterra, oracle or all"
                ),
            )),
        };
        for k in kinds {
            if !out.contains(k) {
                out.push(*k);
            }
        }
    }
    Ok(out)
}

/// Runs the selected checks over `[t0, hi]` and, when non-empty, `[lo, t0]`.
pub fn run_checks(parsed: &ParsedProblem, checks: &[CheckKind]) -> Result<Vec<CheckReport>, Error> {
    let p = &parsed.problem;
    let opts = &p.options;
    let mut ends = vec![p.domain.hi()];
    if p.domain.lo() < p.t0 {
        ends.push(p.domain.lo());
    }
    let results = ends
        .iter()
        .map(|&end| transition(&p.a, p.t0, end, opts))
        .collect::<Result<Vec<_>, _>>()?;

    let mut reports = Vec::new();
    for check in checks {
        for r in &results {
            let label = |name: &str| {
                if r.t_end >= r.t0 {
                    name.to_string()
                } else {
                    format!("{name}:backward")
                }
            };
            match check {
                CheckKind::Liouville => {
                    let mut rep = liouville_residual(&p.a, r, DEFAULT_GRID, LIOUVILLE_TOL)?;
                    rep.check = label(&rep.check);
                    reports.push(rep);
                }
                CheckKind::Flow => {
                    let s = 0.5 * (r.t0 + r.t_end);
                    let mut rep = flow_residual(&p.a, r.t0, s, r.t_end, opts, FLOW_TOL)?;
                    rep.check = label(&rep.check);
                    reports.push(rep);
                    let mut inv = inverse_residual(&p.a, r.t0, r.t_end, opts, FLOW_TOL)?;
                    inv.check = label(&inv.check);
                    reports.push(inv);
                }
                CheckKind::Volterra => {
                    let mut rep = volterra_residual(&p.a, r, DEFAULT_GRID, opts)?;
                    rep.check = label(&rep.check);
                    reports.push(rep);
                }
                CheckKind::Oracle => {
                    let mut rep = oracle_report(parsed, r)?;
                    rep.check = label(&rep.check);
                    reports.push(rep);
                }
            }
        }
    }
    Ok(reports)
}

fn oracle_report(parsed: &ParsedProblem, r: &TransitionResult) -> Result<CheckReport, Error> {
    let p = &parsed.problem;
    if let Some(case) = &parsed.builtin {
        let tol = match case.kind {
            ClosedFormKind::Example1 => EXAMPLE1_ORACLE_TOL,
            ClosedFormKind::Airy => AIRY_ORACLE_TOL,
        };
        return closed_form_residual(case, r, 21, tol);
    }
    if let MatrixFunction::Polynomial(m) = &p.a {
        if is_commuting(m, default_commute_tol(m)) {
            let mut worst: f64 = 0.0;
            let n = 41;
            for k in 0..n {
                let tau = r.t0 + (r.t_end - r.t0) * k as f64 / (n - 1) as f64;
                let exact = transition_commuting(m, r.t0, tau, 1e-16);
                worst = worst.max((&r.eval(tau)? - &exact).max_abs());
            }
            return Ok(CheckReport::new(
                "oracle:commuting",
                worst,
                COMMUTING_ORACLE_TOL.max(10.0 * r.total_bound),
                format!("{n} points"),
            ));
        }
    }
    reference_residual(&p.a, r, 11, RK4_ORACLE_STEPS, RK4_ORACLE_TOL)
}

fn write_reports(
    out: &mut dyn Write,
    format: Format,
    reports: &[CheckReport],
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            writeln!(out, "check,max_residual,tolerance,pass,grid")?;
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},\"{}\"",
                    r.check,
                    fmt_f64(r.max_residual),
                    fmt_f64(r.tolerance),
                    r.pass,
                    r.grid
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let checks = parse_checks(&args.checks)?;
    let parsed = resolve(&args.common)?;
    let reports = run_checks(&parsed, &checks)?;
    write_reports(out, args.common.format, &reports)?;
    Ok(if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

#[derive(Debug, Serialize)]
struct BenchRow {
    tol: f64,
    steps: usize,
    max_order: usize,
    total_bound: f64,
    runtime_ms: f64,
}

pub fn cmd_bench(args: &CommonArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let parsed = resolve(args)?;
    let p = &parsed.problem;
    let end = match &args.times {
        Some(_) => *requested_times(args, &parsed)?
            .last()
            .expect("at least one time"),
        None => p.domain.hi(),
    };
    let mut rows = Vec::new();
    for exp in (4..=14).step_by(2) {
        let tol = 10f64.powi(-exp);
        let opts = TransitionOptions { tol, ..p.options };
        let start = Instant::now();
        let r = transition(&p.a, p.t0, end, &opts)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        rows.push(BenchRow {
            tol,
            steps: r.steps.len(),
            max_order: r.max_order(),
            total_bound: r.total_bound,
            runtime_ms: elapsed,
        });
    }
    match args.format {
        Format::Csv => {
            writeln!(out, "tol,steps,max_order,total_bound,runtime_ms")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{:.3}",
                    fmt_f64(r.tol),
                    r.steps,
                    r.max_order,
                    fmt_f64(r.total_bound),
                    r.runtime_ms
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

/// Dispatches a parsed command line; diagnostics go to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Transition(a) => cmd_transition(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(code) => code,
        // a closed downstream pipe is not an error of ours
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "pbs: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_lists() {
        assert_eq!(parse_times("1.5").unwrap(), vec![1.5]);
        assert_eq!(parse_times("0, 0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        let r = parse_times("0:1.5:0.1").unwrap();
        assert_eq!(r.len(), 16);
        assert!((r[15] - 1.5).abs() < 1e-12);
        assert_eq!(parse_times("1:0:-0.5").unwrap(), vec![1.0, 0.5, 0.0]);
        assert!(parse_times("0:1:0").is_err());
        assert!(parse_times("0:1:-1").is_err());
        assert!(parse_times("a").is_err());
        assert!(parse_times("0:1").is_err());
    }

    #[test]
    fn check_names() {
        assert_eq!(parse_checks("all").unwrap().len(), 4);
        assert_eq!(parse_checks("flow,flow").unwrap(), vec![CheckKind::Flow]);
        let err = parse_checks("liouville,bogus").unwrap_err();
        assert_eq!(err.field, "--checks");
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(1.5), "1.5");
        assert_eq!(fmt_f64(-2.5e-11), "-2.5e-11");
        assert_eq!(fmt_f64(1e-10), "1e-10");
        assert_eq!(fmt_f64(0.001), "0.001");
    }

    #[test]
    fn csv_header_layout() {
        assert_eq!(
            header("transition", 2),
            "time,entry_00,entry_01,entry_10,entry_11,bound"
        );
        assert_eq!(header("solve", 3), "time,x_0,x_1,x_2,bound");
    }
}
