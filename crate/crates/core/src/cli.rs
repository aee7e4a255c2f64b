//! Command-line front end.
//!
//! Verbs: `windows`, `solve`, `bound`, `rates`, `resonance`. Every verb
//! writes JSON (default) or CSV; JSON payloads start with a `meta` block
//! echoing the full effective configuration.
//!
//! Exit status: 0 success, 2 usage, 3 resonance, 4 budget, 5 bound
//! violation, 6 degenerate fit.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    certify_bound, near_resonance_sweep, rate_fit, uniform_grid, BoundReport, RateFit,
    ResonancePoint,
};
use crate::error::Error;
use crate::fnmodel::{SmoothFunction, SupNormConfig};
use crate::quadrature::QuadConfig;
use crate::solver::{EvalForm, ProblemSpec, SolveContext};
use crate::windows::{resonance_points, sample_sequence, window, Placement};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESONANCE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_BOUND_VIOLATION: i32 = 5;
pub const EXIT_DEGENERATE_FIT: i32 = 6;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NearResonance { .. } => EXIT_RESONANCE,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::DegenerateFit(_) => EXIT_DEGENERATE_FIT,
        _ => EXIT_USAGE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "neumann-sp",
    version,
    about = "Non-resonant singularly perturbed Neumann problems: eps*y'' + k*y = f(t), y'(a) = y'(b) = 0"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the windows J_n and the resonance points between them
    Windows(WindowsArgs),
    /// Sample y, y', y'' and the ODE residual on a uniform grid
    Solve(SolveArgs),
    /// Compare the a priori bound with the measured error
    Bound(BoundArgs),
    /// Fit the convergence rate of sup|y - f/k| along theta-midpoint eps_n
    Rates(RatesArgs),
    /// Track sup|y| as theta approaches m*pi
    Resonance(ResonanceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output path, `-` for stdout
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DomainArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadArgs {
    #[arg(long, default_value_t = 4)]
    pub panels_per_period: usize,
    #[arg(long, default_value_t = 8)]
    pub gauss_order: usize,
    #[arg(long, default_value_t = 4)]
    pub min_panels: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_panels: u64,
}

impl QuadArgs {
    fn config(&self) -> QuadConfig {
        QuadConfig {
            panels_per_period: self.panels_per_period,
            gauss_order: self.gauss_order,
            min_panels: self.min_panels,
            max_panels: self.max_panels,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WindowsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    #[arg(long, default_value_t = 5)]
    pub n_max: u64,
    /// Largest resonance index listed (default n_max + 1)
    #[arg(long)]
    pub m_max: Option<u64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EpsArgs {
    /// Explicit eps
    #[arg(long, conflicts_with = "n")]
    #[serde(rename = "eps_requested")]
    pub eps: Option<f64>,
    /// Window index; eps is placed inside J_n
    #[arg(long)]
    pub n: Option<u64>,
    /// Place eps at theta = n*pi + lambda + r*(pi - 2*lambda) instead of the
    /// theta-midpoint
    #[arg(long, requires = "n")]
    pub fraction: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub f: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub eps: EpsArgs,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long, default_value = "reduced")]
    pub form: EvalForm,
    #[command(flatten)]
    #[serde(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub solve: SolveArgs,
    #[arg(long, default_value_t = 4097)]
    pub mu_samples: usize,
    #[arg(long, default_value_t = 1.05)]
    pub mu_safety: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RatesArgs {
    #[arg(long)]
    pub f: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    #[arg(long, default_value_t = 2)]
    pub n_from: u64,
    #[arg(long, default_value_t = 14)]
    pub n_to: u64,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResonanceArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// Comma-separated, strictly decreasing phase offsets
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.25,0.125,0.0625")]
    pub deltas: Vec<f64>,
    #[arg(long, default_value_t = crate::analysis::DELTA_FLOOR)]
    pub delta_floor: f64,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

// ---------------------------------------------------------------------------
// Payloads

#[derive(Serialize)]
struct Meta<'a, C: Serialize> {
    command: &'static str,
    version: &'static str,
    #[serde(flatten)]
    config: &'a C,
    format: Format,
}

#[derive(Serialize)]
struct WindowRow {
    n: u64,
    lo: f64,
    hi: f64,
}

#[derive(Serialize)]
struct ResonanceRow {
    m: u64,
    eps_star: f64,
}

#[derive(Serialize)]
struct WindowsPayload<'a> {
    meta: Meta<'a, WindowsArgs>,
    windows: Vec<WindowRow>,
    resonances: Vec<ResonanceRow>,
}

#[derive(Serialize)]
struct SolveMeta<'a> {
    #[serde(flatten)]
    base: Meta<'a, SolveArgs>,
    eps: f64,
    theta: f64,
    omega: f64,
    window_n: Option<u64>,
}

#[derive(Serialize)]
struct SampleRow {
    t: f64,
    y: f64,
    y1: f64,
    y2: f64,
    residual: f64,
}

#[derive(Serialize)]
struct SolvePayload<'a> {
    meta: SolveMeta<'a>,
    data: Vec<SampleRow>,
}

#[derive(Serialize)]
struct BoundMeta<'a> {
    #[serde(flatten)]
    base: Meta<'a, BoundArgs>,
    eps: f64,
    theta: f64,
    window_n: Option<u64>,
}

#[derive(Serialize)]
struct BoundPayload<'a> {
    meta: BoundMeta<'a>,
    #[serde(flatten)]
    report: &'a BoundReport,
}

#[derive(Serialize)]
struct RatesPayload<'a> {
    meta: Meta<'a, RatesArgs>,
    #[serde(flatten)]
    fit: &'a RateFit,
    pass: bool,
}

#[derive(Serialize)]
struct ResonancePayload<'a> {
    meta: Meta<'a, ResonanceArgs>,
    data: &'a [ResonancePoint],
}

// ---------------------------------------------------------------------------
// Rendering

/// Failure inside a command: a library error or an I/O problem.
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn json_bytes<T: Serialize>(payload: &T) -> Result<Vec<u8>, Failure> {
    let mut v = serde_json::to_vec_pretty(payload)?;
    v.push(b'\n');
    Ok(v)
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Failure::Io(e.to_string()))
}

fn emit(bytes: &[u8], out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if out.out == "-" {
        stdout.write_all(bytes)?;
        stdout.flush()?;
    } else {
        File::create(&out.out)?.write_all(bytes)?;
    }
    Ok(())
}

fn problem(f: &str, k: f64, a: f64, b: f64) -> Result<ProblemSpec, Error> {
    crate::windows::check_problem(k, a, b)?;
    ProblemSpec::new(a, b, k, SmoothFunction::parse(f, a, b)?)
}

fn resolve_eps(args: &SolveArgs) -> Result<f64, Error> {
    let d = &args.domain;
    match (args.eps.eps, args.eps.n) {
        (Some(eps), None) => Ok(eps),
        (None, Some(n)) => {
            let placement = match args.eps.fraction {
                Some(r) => Placement::ThetaFraction(r),
                None => Placement::ThetaMidpoint,
            };
            Ok(sample_sequence(d.lambda, d.k, d.a, d.b, n, n, placement)?[0].1)
        }
        _ => Err(Error::InvalidArgument(
            "exactly one of --eps or --n is required".into(),
        )),
    }
}

fn check_grid(n: usize) -> Result<(), Error> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("--grid must be at least 1".into()))
    }
}

fn cmd_windows(args: &WindowsArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let d = &args.domain;
    let windows = (0..=args.n_max)
        .map(|n| window(n, d.lambda, d.k, d.a, d.b).map(|w| WindowRow { n, lo: w.lo, hi: w.hi }))
        .collect::<Result<Vec<_>, _>>()?;
    let m_max = args.m_max.unwrap_or(args.n_max + 1);
    let effective = WindowsArgs {
        m_max: Some(m_max),
        ..args.clone()
    };
    let resonances = resonance_points(d.k, d.a, d.b, m_max)?
        .into_iter()
        .zip(1..)
        .map(|(eps_star, m)| ResonanceRow { m, eps_star })
        .collect::<Vec<_>>();
    let bytes = match args.output.format {
        Format::Json => json_bytes(&WindowsPayload {
            meta: Meta {
                command: "windows",
                version: env!("CARGO_PKG_VERSION"),
                config: &effective,
                format: args.output.format,
            },
            windows,
            resonances,
        })?,
        Format::Csv => {
            let mut b = csv_bytes(&windows)?;
            b.push(b'\n');
            b.extend(csv_bytes(&resonances)?);
            b
        }
    };
    emit(&bytes, &args.output, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let d = &args.domain;
    check_grid(args.grid)?;
    let p = problem(&args.f, d.k, d.a, d.b)?;
    let eps = resolve_eps(args)?;
    let ctx = SolveContext::new(&p, eps, d.lambda, args.quad.config(), args.form)?;
    let profile = ctx.solve_grid(&uniform_grid(d.a, d.b, args.grid))?;
    let data: Vec<SampleRow> = (0..profile.len())
        .map(|i| SampleRow {
            t: profile.grid[i],
            y: profile.y[i],
            y1: profile.y1[i],
            y2: profile.y2[i],
            residual: profile.residual[i],
        })
        .collect();
    let bytes = match args.output.format {
        Format::Json => json_bytes(&SolvePayload {
            meta: SolveMeta {
                base: Meta {
                    command: "solve",
                    version: env!("CARGO_PKG_VERSION"),
                    config: args,
                    format: args.output.format,
                },
                eps,
                theta: ctx.theta,
                omega: ctx.omega,
                window_n: ctx.window.window_index(),
            },
            data,
        })?,
        Format::Csv => csv_bytes(&data)?,
    };
    emit(&bytes, &args.output, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_bound(args: &BoundArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let s = &args.solve;
    let d = &s.domain;
    check_grid(s.grid)?;
    let p = problem(&s.f, d.k, d.a, d.b)?;
    let eps = resolve_eps(s)?;
    let ctx = SolveContext::new(&p, eps, d.lambda, s.quad.config(), s.form)?;
    let cfg = SupNormConfig {
        samples: args.mu_samples,
        safety: args.mu_safety,
    };
    let report = certify_bound(&ctx, &uniform_grid(d.a, d.b, s.grid), &cfg)?;
    let bytes = match s.output.format {
        Format::Json => json_bytes(&BoundPayload {
            meta: BoundMeta {
                base: Meta {
                    command: "bound",
                    version: env!("CARGO_PKG_VERSION"),
                    config: args,
                    format: s.output.format,
                },
                eps,
                theta: ctx.theta,
                window_n: ctx.window.window_index(),
            },
            report: &report,
        })?,
        Format::Csv => csv_bytes(&[FlatBound::from(&report)])?,
    };
    emit(&bytes, &s.output, stdout)?;
    Ok(if report.certified {
        EXIT_OK
    } else {
        EXIT_BOUND_VIOLATION
    })
}

/// One CSV row for a bound report (the csv crate does not flatten).
#[derive(Serialize)]
struct FlatBound {
    eps: f64,
    lambda: f64,
    k: f64,
    span: f64,
    mu1: f64,
    mu2: f64,
    fa1: f64,
    fb1: f64,
    fa2: f64,
    bound: f64,
    sup_error: f64,
    certified: bool,
    caveat: String,
}

impl From<&BoundReport> for FlatBound {
    fn from(r: &BoundReport) -> Self {
        let t = &r.terms;
        Self {
            eps: t.eps,
            lambda: t.lambda,
            k: t.k,
            span: t.span,
            mu1: t.mu1,
            mu2: t.mu2,
            fa1: t.fa1,
            fb1: t.fb1,
            fa2: t.fa2,
            bound: t.bound,
            sup_error: r.sup_error,
            certified: r.certified,
            caveat: r.caveat.clone(),
        }
    }
}

fn cmd_rates(args: &RatesArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let d = &args.domain;
    check_grid(args.grid)?;
    let p = problem(&args.f, d.k, d.a, d.b)?;
    let fit = rate_fit(&p, d.lambda, args.n_from, args.n_to, args.grid, args.quad.config())?;
    let bytes = match args.output.format {
        Format::Json => json_bytes(&RatesPayload {
            meta: Meta {
                command: "rates",
                version: env!("CARGO_PKG_VERSION"),
                config: args,
                format: args.output.format,
            },
            fit: &fit,
            pass: fit.passes(),
        })?,
        Format::Csv => csv_bytes(&fit.points)?,
    };
    emit(&bytes, &args.output, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_resonance(args: &ResonanceArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    check_grid(args.grid)?;
    let p = problem(&args.f, args.k, args.a, args.b)?;
    let sweep = near_resonance_sweep(
        &p,
        args.m,
        &args.deltas,
        args.grid,
        args.quad.config(),
        args.delta_floor,
    )?;
    let bytes = match args.output.format {
        Format::Json => json_bytes(&ResonancePayload {
            meta: Meta {
                command: "resonance",
                version: env!("CARGO_PKG_VERSION"),
                config: args,
                format: args.output.format,
            },
            data: &sweep,
        })?,
        Format::Csv => csv_bytes(&sweep)?,
    };
    emit(&bytes, &args.output, stdout)?;
    Ok(EXIT_OK)
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if !e.use_stderr() {
                let _ = write!(stdout, "{rendered}");
                return EXIT_OK;
            }
            // usage errors stay on one line
            let first = rendered.lines().next().unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{first}");
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Windows(a) => cmd_windows(a, stdout),
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Bound(a) => cmd_bound(a, stdout),
        Command::Rates(a) => cmd_rates(a, stdout),
        Command::Resonance(a) => cmd_resonance(a, stdout),
    };
    match result {
        Ok(code) => {
            if code == EXIT_BOUND_VIOLATION {
                let _ = writeln!(stderr, "error: bound violation: measured error exceeds the a priori bound");
            }
            code
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}
