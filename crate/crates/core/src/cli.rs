//! Command-line front end.
//!
//! [`parse_args`] turns an argument vector into a validated
//! [`ExperimentSpec`]; [`run`] executes it and writes the report. Usage
//! errors map to exit code 2 and operation failures to exit code 1.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::bounds::{bounds_report, mu_upper_bound, nonminimal_count_bound, uniform_case};
use crate::frame::{frame_potential, tightness_defect, VectorSystem};
use crate::io::{self, Format};
use crate::objective::{evaluate, NormConstraints};
use crate::optimizer::{certify, optimize, OptResult, OptimizerConfig};
use crate::untf::{build_untf, BuildRequest, DEFAULT_DEFECT_TOL, DEFAULT_MAX_ITERS};
use crate::{FrameError, Result};

/// Environment variable holding the worker thread count (0 or unset: all cores).
pub const THREADS_ENV: &str = "FRAME_LAB_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Build a tight frame with equal norms.
    BuildUntf,
    /// Evaluate the per-vector ratios of a system file.
    Eval,
    /// Maximize the smallest ratio under norm constraints.
    Optimize,
    /// Print every closed-form value for one parameter set.
    Bounds,
    /// Compare a system file against the closed-form values.
    Certify,
    /// Tabulate closed-form values over a range of noise levels.
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::BuildUntf => "build-untf",
            Command::Eval => "eval",
            Command::Optimize => "optimize",
            Command::Bounds => "bounds",
            Command::Certify => "certify",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "frame-lab", version, about = "Max-min frame energy experiments")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Ambient dimension d.
    #[arg(long)]
    dim: Option<usize>,
    /// Number of vectors N.
    #[arg(long)]
    count: Option<usize>,
    /// Lower bound on squared norms.
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<f64>,
    /// Upper bound on squared norms.
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<f64>,
    /// Noise level; `sweep` also accepts `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Format of written systems and of the sweep table; defaults to the
    /// `--output` extension, else JSON. Input files go by their extension.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// `sweep` only: also run the optimizer at every noise level.
    #[arg(long)]
    with_optimize: bool,
}

/// Noise levels: one value, or an inclusive arithmetic range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SigmaSpec {
    Value(f64),
    Range { start: f64, stop: f64, step: f64 },
}

impl SigmaSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            SigmaSpec::Value(s) => vec![s],
            SigmaSpec::Range { start, stop, step } => {
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
        }
    }

    fn single(&self) -> Option<f64> {
        match *self {
            SigmaSpec::Value(s) => Some(s),
            SigmaSpec::Range { .. } => None,
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    #[serde(skip)]
    pub command: Command,
    pub dim: Option<usize>,
    pub count: Option<usize>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub sigma: SigmaSpec,
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub with_optimize: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UsageError {
    /// `--help` or `--version`: print the text and exit successfully.
    Info(String),
    Invalid(String),
}

impl UsageError {
    pub fn exit_code(&self) -> i32 {
        match self {
            UsageError::Info(_) => EXIT_OK,
            UsageError::Invalid(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UsageError::Info(text) | UsageError::Invalid(text) => f.write_str(text.trim_end()),
        }
    }
}

impl std::error::Error for UsageError {}

fn invalid(msg: impl Into<String>) -> UsageError {
    UsageError::Invalid(msg.into())
}

fn parse_number(flag: &str, text: &str) -> std::result::Result<f64, UsageError> {
    let x: f64 = text.trim().parse().map_err(|_| invalid(format!("--{flag}: {text:?} is not a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("--{flag}: value must be finite, got {text}")))
    }
}

fn parse_sigma(text: &str, allow_range: bool) -> std::result::Result<SigmaSpec, UsageError> {
    let parts: Vec<&str> = text.split(':').collect();
    let spec = match parts.as_slice() {
        [value] => SigmaSpec::Value(parse_number("sigma", value)?),
        [start, stop, step] if allow_range => {
            let (start, stop, step) =
                (parse_number("sigma", start)?, parse_number("sigma", stop)?, parse_number("sigma", step)?);
            if !(step > 0.0) || stop < start {
                return Err(invalid(format!("--sigma: range {text} needs step > 0 and stop >= start")));
            }
            SigmaSpec::Range { start, stop, step }
        }
        [_, _, _] => return Err(invalid("--sigma: ranges are only accepted by sweep")),
        _ => return Err(invalid(format!("--sigma: expected a number or start:stop:step, got {text:?}"))),
    };
    if spec.values().iter().any(|&s| s < 0.0) {
        return Err(invalid(format!("--sigma: noise level must be non-negative, got {text}")));
    }
    Ok(spec)
}

fn require<T>(value: Option<T>, flag: &str, command: Command) -> std::result::Result<T, UsageError> {
    value.ok_or_else(|| invalid(format!("--{flag} is required for {}", command.name())))
}

/// Parses and validates `argv` (including the program name).
pub fn parse_args<I, S>(argv: I) -> std::result::Result<ExperimentSpec, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| {
        let text = e.render().to_string();
        match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => UsageError::Info(text),
            _ => UsageError::Invalid(text),
        }
    })?;
    let command = args.command;
    let sigma = match &args.sigma {
        Some(text) => parse_sigma(text, command == Command::Sweep)?,
        None => SigmaSpec::Value(0.0),
    };

    if let Some(0) = args.dim {
        return Err(invalid("--dim must be at least 1"));
    }
    if let Some(0) = args.count {
        return Err(invalid("--count must be at least 1"));
    }
    for (flag, value) in [("c1", args.c1), ("c2", args.c2)] {
        if let Some(c) = value {
            if !(c > 0.0 && c.is_finite()) {
                return Err(invalid(format!("--{flag} must be positive, got {c}")));
            }
        }
    }
    if let (Some(c1), Some(c2)) = (args.c1, args.c2) {
        if c1 >= c2 {
            return Err(invalid(format!("--c1 must be smaller than --c2, got c1 = {c1}, c2 = {c2}")));
        }
    }
    if args.restarts == Some(0) {
        return Err(invalid("--restarts must be at least 1"));
    }
    if let Some(tol) = args.tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(invalid(format!("--tol must be non-negative, got {tol}")));
        }
    }
    if args.with_optimize && command != Command::Sweep {
        return Err(invalid("--with-optimize only applies to sweep"));
    }

    match command {
        Command::BuildUntf => {
            let (d, n) = (require(args.dim, "dim", command)?, require(args.count, "count", command)?);
            if n < d {
                return Err(invalid(format!("--count must be at least --dim for build-untf, got {n} < {d}")));
            }
            if args.tol == Some(0.0) {
                return Err(invalid("--tol must be positive for build-untf"));
            }
        }
        Command::Eval => {
            require(args.input.as_ref(), "input", command)?;
        }
        Command::Certify => {
            require(args.input.as_ref(), "input", command)?;
            require(args.c1, "c1", command)?;
            require(args.c2, "c2", command)?;
        }
        Command::Optimize => {
            require(args.dim, "dim", command)?;
            require(args.count, "count", command)?;
            require(args.c1, "c1", command)?;
            require(args.c2, "c2", command)?;
        }
        Command::Bounds | Command::Sweep => {
            let (d, n) = (require(args.dim, "dim", command)?, require(args.count, "count", command)?);
            require(args.c1, "c1", command)?;
            require(args.c2, "c2", command)?;
            if n <= d {
                return Err(invalid(format!(
                    "--count must exceed --dim for {}, got {n} <= {d}",
                    command.name()
                )));
            }
        }
    }

    let format = args.format.unwrap_or_else(|| args.output.as_deref().map_or(Format::Json, Format::from_path));
    Ok(ExperimentSpec {
        command,
        dim: args.dim,
        count: args.count,
        c1: args.c1,
        c2: args.c2,
        sigma,
        seed: args.seed,
        restarts: args.restarts.unwrap_or(OptimizerConfig::default().restarts),
        max_iters: args.max_iters,
        tol: args.tol,
        input: args.input,
        output: args.output,
        format,
        with_optimize: args.with_optimize,
    })
}

fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(text) if !text.trim().is_empty() => text
            .trim()
            .parse()
            .map_err(|_| FrameError::Domain(format!("{THREADS_ENV} must be a non-negative integer, got {text:?}"))),
        _ => Ok(0),
    }
}

impl ExperimentSpec {
    fn constraints(&self, sigma: f64) -> Result<NormConstraints> {
        let (c1, c2) = (self.c1.unwrap_or(1.0), self.c2.unwrap_or(f64::MAX));
        NormConstraints::new(c1, c2, sigma)
    }

    fn sigma(&self) -> f64 {
        self.sigma.single().unwrap_or(0.0)
    }

    fn optimizer_config(&self, threads: usize) -> OptimizerConfig {
        let defaults = OptimizerConfig::default();
        OptimizerConfig {
            restarts: self.restarts,
            max_iters: self.max_iters.unwrap_or(defaults.max_iters),
            tolerance: self.tol.unwrap_or(defaults.tolerance),
            seed: self.seed,
            threads,
            ..defaults
        }
    }

    fn read_input(&self) -> Result<VectorSystem> {
        let path = self.input.as_deref().ok_or_else(|| FrameError::Domain("no input file".into()))?;
        io::read_system(path, self.dim)
    }
}

#[derive(Serialize)]
struct BuildResult<'a> {
    dim: usize,
    count: usize,
    target_norm2: f64,
    tightness_defect: f64,
    frame_potential: f64,
    vectors: &'a VectorSystem,
}

#[derive(Serialize)]
struct EvalResult {
    dim: usize,
    count: usize,
    sigma: f64,
    #[serde(flatten)]
    report: crate::RatioReport,
}

#[derive(Serialize)]
struct OptimizeResult<'a> {
    min_value: crate::ExtReal,
    objective: crate::ExtReal,
    argmin_set: &'a [usize],
    restart_index: usize,
    converged: bool,
    nonminimal_norm_count: usize,
    norms2: Vec<f64>,
    ratios: &'a [crate::ExtReal],
    history: &'a [(usize, f64)],
    vectors: &'a VectorSystem,
}

impl<'a> From<&'a OptResult> for OptimizeResult<'a> {
    fn from(r: &'a OptResult) -> Self {
        Self {
            min_value: r.best_report.min_value,
            objective: r.best_report.objective,
            argmin_set: &r.best_report.argmin_set,
            restart_index: r.restart_index,
            converged: r.converged,
            nonminimal_norm_count: r.nonminimal_norm_count,
            norms2: r.best_system.norms2(),
            ratios: &r.best_report.ratios,
            history: &r.history,
            vectors: &r.best_system,
        }
    }
}

/// One row of a sweep. Absent values are empty CSV cells and JSON nulls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub uniform_answer: f64,
    pub mu_bound: Option<f64>,
    pub achieved: Option<f64>,
}

fn sweep_rows(spec: &ExperimentSpec, threads: usize) -> Result<Vec<SweepRow>> {
    let (d, n) = (spec.dim.unwrap_or(0), spec.count.unwrap_or(0));
    let (c1, c2) = (spec.c1.unwrap_or(0.0), spec.c2.unwrap_or(0.0));
    spec.sigma
        .values()
        .into_iter()
        .map(|sigma| {
            let uniform = uniform_case(d, n, c1, c2, sigma)?;
            let mu_bound = if nonminimal_count_bound(d, c1, sigma)?.valid {
                mu_upper_bound(d, n, c1, c2, sigma)?.mu_bound
            } else {
                None
            };
            let achieved = if spec.with_optimize {
                let result = optimize(d, n, &spec.constraints(sigma)?, &spec.optimizer_config(threads))?;
                result.best_report.min_value.finite()
            } else {
                None
            };
            Ok(SweepRow { sigma, uniform_answer: uniform.uniform_answer, mu_bound, achieved })
        })
        .collect()
}

/// Shortest decimal form that parses back to the same `f64`.
fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn sweep_csv(spec: &ExperimentSpec, rows: &[SweepRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| FrameError::Io(e.to_string());
    writer.write_record(["sigma", "uniform_answer", "mu_bound", "achieved"]).map_err(csv_err)?;
    for row in rows {
        writer
            .write_record([cell(Some(row.sigma)), cell(Some(row.uniform_answer)), cell(row.mu_bound), cell(row.achieved)])
            .map_err(csv_err)?;
    }
    let body = writer.into_inner().map_err(|e| FrameError::Io(e.to_string()))?;
    let header = format!(
        "# frame-lab sweep dim={} count={} c1={} c2={} seed={} restarts={} with_optimize={}\n",
        spec.dim.unwrap_or(0),
        spec.count.unwrap_or(0),
        spec.c1.unwrap_or(0.0),
        spec.c2.unwrap_or(0.0),
        spec.seed,
        spec.restarts,
        spec.with_optimize
    );
    Ok(header + &String::from_utf8_lossy(&body))
}

fn emit(spec: &ExperimentSpec, out: &mut dyn Write, text: &str) -> Result<()> {
    match (&spec.output, spec.command) {
        (Some(path), Command::Eval | Command::Bounds | Command::Certify | Command::Sweep) => write_file(path, text),
        _ => out.write_all(text.as_bytes()).map_err(FrameError::from),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| FrameError::Io(format!("{}: {e}", path.display())))
}

/// Runs one command. Reports go to `out` unless `--output` names a file;
/// `build-untf` and `optimize` write the system itself to `--output`.
pub fn run(spec: &ExperimentSpec, out: &mut dyn Write) -> Result<()> {
    let threads = threads_from_env()?;
    let name = spec.command.name();
    let text = match spec.command {
        Command::BuildUntf => {
            let (d, n) = (spec.dim.unwrap_or(0), spec.count.unwrap_or(0));
            let c = spec.c1.unwrap_or(1.0);
            let req = BuildRequest {
                seed: spec.seed,
                max_iters: spec.max_iters.unwrap_or(DEFAULT_MAX_ITERS),
                defect_tol: spec.tol.unwrap_or(DEFAULT_DEFECT_TOL),
                ..BuildRequest::new(d, n, c)
            };
            let vs = build_untf(&req)?;
            if let Some(path) = &spec.output {
                io::write_system(path, &vs, spec.format)?;
            }
            let result = BuildResult {
                dim: d,
                count: n,
                target_norm2: c,
                tightness_defect: tightness_defect(&vs)?,
                frame_potential: frame_potential(&vs),
                vectors: &vs,
            };
            io::render_report(name, spec, result)?
        }
        Command::Eval => {
            let vs = spec.read_input()?;
            let sigma = spec.sigma();
            let report = evaluate(&vs, sigma)?;
            io::render_report(name, spec, EvalResult { dim: vs.dim(), count: vs.count(), sigma, report })?
        }
        Command::Optimize => {
            let (d, n) = (spec.dim.unwrap_or(0), spec.count.unwrap_or(0));
            let result = optimize(d, n, &spec.constraints(spec.sigma())?, &spec.optimizer_config(threads))?;
            if let Some(path) = &spec.output {
                io::write_system(path, &result.best_system, spec.format)?;
            }
            io::render_report(name, spec, OptimizeResult::from(&result))?
        }
        Command::Bounds => {
            let (d, n) = (spec.dim.unwrap_or(0), spec.count.unwrap_or(0));
            io::render_report(name, spec, bounds_report(d, n, &spec.constraints(spec.sigma())?)?)?
        }
        Command::Certify => {
            let vs = spec.read_input()?;
            io::render_report(name, spec, certify(&vs, &spec.constraints(spec.sigma())?)?)?
        }
        Command::Sweep => {
            let rows = sweep_rows(spec, threads)?;
            match spec.format {
                Format::Csv => sweep_csv(spec, &rows)?,
                Format::Json => io::render_report(name, spec, &rows)?,
            }
        }
    };
    emit(spec, out, &text)
}

/// Parses, runs and maps the outcome to an exit code, printing errors to `err`.
pub fn main_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Err(UsageError::Info(text)) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_USAGE
        }
        Ok(spec) => match run(&spec, out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_FAILURE
            }
        },
    }
}
