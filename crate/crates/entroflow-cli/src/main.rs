//! Command-line exporter: entropy surfaces, steepest-ascent flows,
//! Fisher geodesics, gamma maximum-likelihood fits, prime-gap
//! statistics, and the maximum-entropy correlation locus, as plot-ready
//! CSV (default) or JSON.
//!
//! Exit codes: 0 success, 2 configuration or validation, 3 non-finite
//! value, 4 unsupported family/operation, 5 degenerate data,
//! 6 resource limit.

use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entroflow::gamma::{fit_mle, GammaFisherMetric};
use entroflow::geometry::{self, MetricField, Point2, Trajectory};
use entroflow::mckay::{self, M1FisherMetric};
use entroflow::primes::{self, SpacingStats};
use entroflow::{Error, GammaParams, M1Point, WeibullParams};

/// Inclusive sample range `lo:hi:count`.
#[derive(Debug, Clone, Copy)]
struct RangeSpec {
    lo: f64,
    hi: f64,
    count: usize,
}

impl RangeSpec {
    fn samples(&self) -> Vec<f64> {
        geometry::linspace(self.lo, self.hi, self.count)
    }
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:count, got `{s}`"));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| format!("bad lower bound `{}`", parts[0]))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| format!("bad upper bound `{}`", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad sample count `{}`", parts[2]))?;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(format!("range bounds must be finite, got `{s}`"));
        }
        if lo >= hi {
            return Err(format!("range needs lo < hi, got `{s}`"));
        }
        if count < 2 {
            return Err(format!("range needs at least 2 samples, got {count}"));
        }
        Ok(RangeSpec { lo, hi, count })
    }
}

/// Comma-separated coordinate pair `x1,x2`.
#[derive(Debug, Clone, Copy)]
struct Pair([f64; 2]);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(format!("expected two comma-separated numbers, got `{s}`"));
        }
        let mut out = [0.0; 2];
        for (slot, part) in out.iter_mut().zip(&parts) {
            let v: f64 = part
                .trim()
                .parse()
                .map_err(|_| format!("bad number `{part}`"))?;
            if !v.is_finite() {
                return Err(format!("coordinates must be finite, got `{s}`"));
            }
            *slot = v;
        }
        Ok(Pair(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Gamma in mean and shape (mu, kappa).
    Gamma,
    /// McKay with unit first shape, in (c, alpha2).
    #[value(name = "mckay-m1")]
    MckayM1,
    /// McKay unit-shape chart in (alpha2, rho).
    #[value(name = "mckay-rho")]
    MckayRho,
    /// Weibull in scale and shape (xi, beta).
    Weibull,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Gamma => "gamma",
            Family::MckayM1 => "mckay-m1",
            Family::MckayRho => "mckay-rho",
            Family::Weibull => "weibull",
        }
    }

    fn axis_names(self) -> (&'static str, &'static str) {
        match self {
            Family::Gamma => ("mu", "kappa"),
            Family::MckayM1 => ("c", "alpha2"),
            Family::MckayRho => ("alpha2", "rho"),
            Family::Weibull => ("xi", "beta"),
        }
    }

    fn entropy(self, x: f64, y: f64) -> entroflow::Result<f64> {
        match self {
            Family::Gamma => Ok(GammaParams::new(x, y)?.entropy()),
            Family::MckayM1 => Ok(M1Point::new(x, y)?.entropy()),
            Family::MckayRho => mckay::m1_entropy_rho(x, y),
            Family::Weibull => Ok(WeibullParams::new(x, y)?.entropy()),
        }
    }

    fn gradient(self, p: Point2) -> entroflow::Result<[f64; 2]> {
        match self {
            Family::Gamma => Ok(GammaParams::new(p[0], p[1])?.entropy_gradient()),
            Family::MckayM1 => Ok(M1Point::new(p[0], p[1])?.entropy_gradient()),
            Family::MckayRho => mckay::m1_entropy_rho_gradient(p[0], p[1]),
            Family::Weibull => Ok(WeibullParams::new(p[0], p[1])?.entropy_gradient()),
        }
    }

    fn metric(self) -> Option<Box<dyn MetricField>> {
        match self {
            Family::Gamma => Some(Box::new(GammaFisherMetric)),
            Family::MckayM1 => Some(Box::new(M1FisherMetric)),
            Family::MckayRho | Family::Weibull => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Parser)]
#[command(
    name = "entroflow",
    version,
    about = "Entropy surfaces, flows, geodesics, and prime-gap statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a family's entropy on a parameter grid.
    Surface(SurfaceArgs),
    /// Integrate the steepest-ascent flow of a family's entropy.
    Flow(FlowArgs),
    /// Shoot a Fisher-metric geodesic from a point and velocity.
    Geodesic(GeodesicArgs),
    /// Fit a gamma density to a file of samples by maximum likelihood.
    FitGamma(FitGammaArgs),
    /// Prime-gap statistics: block table, gap histogram, or range row.
    Primes(PrimesArgs),
    /// Maximum-entropy correlation locus of the unit-shape McKay chart.
    Locus(LocusArgs),
}

#[derive(Args)]
struct SurfaceArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// First-axis samples as lo:hi:count.
    #[arg(long)]
    x: RangeSpec,
    /// Second-axis samples as lo:hi:count.
    #[arg(long)]
    y: RangeSpec,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Start point as x1,x2 in the family's chart.
    #[arg(long, allow_hyphen_values = true)]
    start: Pair,
    /// Integration horizon.
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    /// RK4 step.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Start point as x1,x2 in the family's chart.
    #[arg(long, allow_hyphen_values = true)]
    start: Pair,
    /// Initial velocity as v1,v2.
    #[arg(long, allow_hyphen_values = true)]
    velocity: Pair,
    /// Integration horizon.
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    /// RK4 step.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct FitGammaArgs {
    /// Input file with one positive real per line.
    #[arg(long)]
    input: PathBuf,
    /// Output file (stdout when omitted); the result is always JSON.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PrimesArgs {
    #[command(subcommand)]
    mode: PrimesMode,
}

#[derive(Subcommand)]
enum PrimesMode {
    /// Spacing statistics per block of consecutive primes.
    #[command(name = "table1")]
    Table1(Table1Args),
    /// Observed gap frequencies against the fitted gamma model.
    Histogram(HistogramArgs),
    /// One spacing-statistics row over the first N primes.
    Range(RangeArgs),
}

#[derive(Args)]
struct Table1Args {
    /// Number of blocks.
    #[arg(long, default_value_t = 10)]
    blocks: u64,
    /// Primes per block.
    #[arg(long, default_value_t = 100_000)]
    block_size: u64,
    /// Append a whole-range row over the first N primes (repeatable).
    #[arg(long, value_name = "N")]
    totals: Vec<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct HistogramArgs {
    /// Number of primes whose gaps are counted.
    #[arg(long)]
    count: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct RangeArgs {
    /// Number of primes whose gaps are summarized.
    #[arg(long)]
    count: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct LocusArgs {
    /// alpha2 samples as lo:hi:count; all samples must be positive.
    #[arg(long)]
    alpha2: RangeSpec,
    #[command(flatten)]
    out: OutputArgs,
}

enum CliError {
    Config(String),
    Unsupported(String),
    Io(std::io::Error),
    Lib(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Unsupported(msg) => write!(f, "{msg}"),
            CliError::Io(err) => write!(f, "{err}"),
            CliError::Lib(err) => write!(f, "{err}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Lib(err)
    }
}

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Config(_) | CliError::Io(_) => 2,
        CliError::Unsupported(_) => 4,
        CliError::Lib(err) => match err {
            Error::Domain(_) | Error::InvalidStep(_) | Error::Ordering(_) => 2,
            Error::NonFinite { .. }
            | Error::Convergence(_)
            | Error::SingularMetric { .. }
            | Error::NoInteriorMaximum { .. } => 3,
            Error::DegenerateSample(_) => 5,
            Error::ResourceLimit(_) => 6,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Surface(args) => cmd_surface(args),
        Command::Flow(args) => cmd_flow(args),
        Command::Geodesic(args) => cmd_geodesic(args),
        Command::FitGamma(args) => cmd_fit_gamma(args),
        Command::Primes(args) => match args.mode {
            PrimesMode::Table1(args) => cmd_primes_table1(args),
            PrimesMode::Histogram(args) => cmd_primes_histogram(args),
            PrimesMode::Range(args) => cmd_primes_range(args),
        },
        Command::Locus(args) => cmd_locus(args),
    }
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content).map_err(CliError::Io),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("serializable output");
    text.push('\n');
    text
}

// ---- surface ----------------------------------------------------------

#[derive(Serialize)]
struct SurfaceOut<'a> {
    x_name: &'a str,
    y_name: &'a str,
    x: &'a [f64],
    y: &'a [f64],
    /// Row-major over the first axis: `values[ix * y.len() + iy]`.
    values: &'a [f64],
}

fn validate_axes(family: Family, xs: &[f64], ys: &[f64]) -> Result<(), CliError> {
    let (xn, yn) = family.axis_names();
    if xs.iter().any(|&v| v <= 0.0) {
        return Err(CliError::Config(format!("{xn} samples must be positive")));
    }
    if ys.iter().any(|&v| v <= 0.0) {
        return Err(CliError::Config(format!("{yn} samples must be positive")));
    }
    if family == Family::MckayRho && ys.iter().any(|&v| v > 1.0) {
        return Err(CliError::Config("rho samples must lie in (0, 1]".into()));
    }
    Ok(())
}

fn cmd_surface(args: SurfaceArgs) -> Result<(), CliError> {
    let xs = args.x.samples();
    let ys = args.y.samples();
    validate_axes(args.family, &xs, &ys)?;
    // Domain errors are ruled out above, so any evaluation failure
    // surfaces as a non-finite sample with its coordinates.
    let field = geometry::grid_eval(
        |x, y| args.family.entropy(x, y).unwrap_or(f64::NAN),
        &xs,
        &ys,
        args.family.axis_names().0,
        args.family.axis_names().1,
    )?;
    let content = match args.out.format {
        Format::Csv => {
            let mut out = format!("{},{},entropy\n", field.x_label, field.y_label);
            for (ix, &x) in field.x.iter().enumerate() {
                for (iy, &y) in field.y.iter().enumerate() {
                    writeln!(out, "{x:.9},{y:.9},{:.9}", field.value(ix, iy)).unwrap();
                }
            }
            out
        }
        Format::Json => to_json(&SurfaceOut {
            x_name: &field.x_label,
            y_name: &field.y_label,
            x: &field.x,
            y: &field.y,
            values: &field.values,
        }),
    };
    emit(&args.out.output, &content)
}

// ---- flow and geodesic -------------------------------------------------

#[derive(Serialize)]
struct FlowOut {
    t: Vec<f64>,
    x1: Vec<f64>,
    x2: Vec<f64>,
    entropy: Vec<f64>,
    truncated: bool,
}

#[derive(Serialize)]
struct GeodesicOut {
    t: Vec<f64>,
    x1: Vec<f64>,
    x2: Vec<f64>,
    speed: Vec<f64>,
    truncated: bool,
}

fn trajectory_csv(traj: &Trajectory, column: &str, values: &[f64]) -> String {
    let mut out = format!("t,x1,x2,{column}\n");
    for (i, (&t, p)) in traj.times.iter().zip(&traj.points).enumerate() {
        writeln!(out, "{t:.9},{:.9},{:.9},{:.9}", p[0], p[1], values[i]).unwrap();
    }
    if traj.truncated {
        writeln!(out, "# truncated at t={:.9}", traj.times.last().unwrap()).unwrap();
    }
    out
}

fn cmd_flow(args: FlowArgs) -> Result<(), CliError> {
    let start = args.start.0;
    // Report a bad start as a validation error rather than a non-finite
    // sample mid-flight.
    args.family.entropy(start[0], start[1])?;
    let traj = geometry::gradient_flow(
        |p| args.family.gradient(p).unwrap_or([f64::NAN; 2]),
        start,
        args.t_max,
        args.step,
    )?;
    let entropy: Vec<f64> = traj
        .points
        .iter()
        .map(|p| args.family.entropy(p[0], p[1]))
        .collect::<entroflow::Result<_>>()?;
    let content = match args.out.format {
        Format::Csv => trajectory_csv(&traj, "entropy", &entropy),
        Format::Json => to_json(&FlowOut {
            t: traj.times,
            x1: traj.points.iter().map(|p| p[0]).collect(),
            x2: traj.points.iter().map(|p| p[1]).collect(),
            entropy,
            truncated: traj.truncated,
        }),
    };
    emit(&args.out.output, &content)
}

fn cmd_geodesic(args: GeodesicArgs) -> Result<(), CliError> {
    let metric = args.family.metric().ok_or_else(|| {
        CliError::Unsupported(format!(
            "family {} has no Fisher metric; use gamma or mckay-m1",
            args.family.name()
        ))
    })?;
    let traj = geometry::geodesic_shoot(
        metric.as_ref(),
        args.start.0,
        args.velocity.0,
        args.t_max,
        args.step,
    )?;
    let velocities = traj
        .velocities
        .as_ref()
        .expect("geodesics carry velocities");
    let speed: Vec<f64> = traj
        .points
        .iter()
        .zip(velocities)
        .map(|(&p, &v)| Ok(metric.metric(p)?.speed(v)))
        .collect::<entroflow::Result<_>>()?;
    let content = match args.out.format {
        Format::Csv => trajectory_csv(&traj, "speed", &speed),
        Format::Json => to_json(&GeodesicOut {
            t: traj.times,
            x1: traj.points.iter().map(|p| p[0]).collect(),
            x2: traj.points.iter().map(|p| p[1]).collect(),
            speed,
            truncated: traj.truncated,
        }),
    };
    emit(&args.out.output, &content)
}

// ---- fit-gamma ---------------------------------------------------------

#[derive(Serialize)]
struct FitOut {
    mu: f64,
    kappa: f64,
    residual: f64,
    n: u64,
}

fn cmd_fit_gamma(args: FitGammaArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input).map_err(CliError::Io)?;
    let mut data = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        let value = trimmed
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v > 0.0)
            .ok_or_else(|| {
                CliError::Config(format!(
                    "line {}: expected a positive real, got `{trimmed}`",
                    index + 1
                ))
            })?;
        data.push(value);
    }
    if data.len() < 2 {
        return Err(CliError::Config(format!(
            "need at least 2 samples, got {}",
            data.len()
        )));
    }
    let fit = fit_mle(&data)?;
    let content = to_json(&FitOut {
        mu: fit.params.mu(),
        kappa: fit.params.kappa(),
        residual: fit.residual,
        n: data.len() as u64,
    });
    emit(&args.output, &content)
}

// ---- primes ------------------------------------------------------------

#[derive(Serialize)]
struct StatsRowOut<'a> {
    label: &'a str,
    count: u64,
    mean: f64,
    sd: f64,
    cv: f64,
    kappa: f64,
}

fn stats_json(rows: &[SpacingStats]) -> String {
    let out: Vec<StatsRowOut> = rows
        .iter()
        .map(|r| StatsRowOut {
            label: &r.label,
            count: r.count,
            mean: r.mean,
            sd: r.sd,
            cv: r.cv,
            kappa: r.kappa,
        })
        .collect();
    to_json(&out)
}

fn emit_stats(out: &OutputArgs, rows: &[SpacingStats]) -> Result<(), CliError> {
    let content = match out.format {
        Format::Csv => primes::stats_csv(rows),
        Format::Json => stats_json(rows),
    };
    emit(&out.output, &content)
}

fn cmd_primes_table1(args: Table1Args) -> Result<(), CliError> {
    if args.blocks == 0 {
        return Err(CliError::Config("need at least 1 block".into()));
    }
    let n = args
        .blocks
        .checked_mul(args.block_size)
        .ok_or_else(|| CliError::Config("blocks * block_size overflows".into()))?;
    let mut rows = primes::block_stats(n, args.block_size)?;
    for &total in &args.totals {
        rows.push(primes::range_stats(total)?);
    }
    emit_stats(&args.out, &rows)
}

fn cmd_primes_range(args: RangeArgs) -> Result<(), CliError> {
    let row = primes::range_stats(args.count)?;
    emit_stats(&args.out, &[row])
}

#[derive(Serialize)]
struct EntryOut {
    gap: u64,
    observed: u64,
    model: f64,
}

#[derive(Serialize)]
struct HistogramOut {
    total: u64,
    mu: f64,
    kappa: f64,
    entries: Vec<EntryOut>,
    ranking: Vec<u64>,
}

/// Rank (1-based) of the listed gap closest to the mean gap.
fn mean_gap_rank(ranked: &[primes::GapCount], mean: f64) -> (usize, u64) {
    let mut best = (0usize, ranked[0].gap, f64::INFINITY);
    for (i, entry) in ranked.iter().enumerate() {
        let d = (entry.gap as f64 - mean).abs();
        if d < best.2 {
            best = (i, entry.gap, d);
        }
    }
    (best.0 + 1, best.1)
}

fn cmd_primes_histogram(args: HistogramArgs) -> Result<(), CliError> {
    let hist = primes::gap_histogram(args.count)?;
    let ranked = hist.ranked();
    let content = match args.out.format {
        Format::Csv => {
            let mut out = primes::histogram_csv(&hist);
            for (i, entry) in ranked.iter().take(8).enumerate() {
                writeln!(
                    out,
                    "# rank {}: gap {} observed {}",
                    i + 1,
                    entry.gap,
                    entry.observed
                )
                .unwrap();
            }
            let mean = hist.fit.params.mu();
            let (rank, gap) = mean_gap_rank(&ranked, mean);
            writeln!(out, "# mean gap {mean:.6} sits at rank {rank} (gap {gap})").unwrap();
            out
        }
        Format::Json => to_json(&HistogramOut {
            total: hist.total,
            mu: hist.fit.params.mu(),
            kappa: hist.fit.params.kappa(),
            entries: hist
                .entries
                .iter()
                .map(|e| EntryOut {
                    gap: e.gap,
                    observed: e.observed,
                    model: e.model,
                })
                .collect(),
            ranking: ranked.iter().map(|e| e.gap).collect(),
        }),
    };
    emit(&args.out.output, &content)
}

// ---- locus -------------------------------------------------------------

#[derive(Serialize)]
struct LocusRowOut {
    alpha2: f64,
    rho_star: Option<f64>,
    error: Option<&'static str>,
}

const NO_INTERIOR_MAXIMUM: &str = "no interior maximum";

fn cmd_locus(args: LocusArgs) -> Result<(), CliError> {
    if args.alpha2.lo <= 0.0 {
        return Err(CliError::Config("alpha2 samples must be positive".into()));
    }
    let mut rows = Vec::with_capacity(args.alpha2.count);
    for alpha2 in args.alpha2.samples() {
        match mckay::max_entropy_locus(alpha2) {
            Ok(point) => rows.push(LocusRowOut {
                alpha2,
                rho_star: Some(point.rho),
                error: None,
            }),
            Err(Error::NoInteriorMaximum { .. }) => rows.push(LocusRowOut {
                alpha2,
                rho_star: None,
                error: Some(NO_INTERIOR_MAXIMUM),
            }),
            Err(err) => return Err(err.into()),
        }
    }
    let content = match args.out.format {
        Format::Csv => {
            let mut out = String::from("alpha2,rho_star,error\n");
            for row in &rows {
                match row.rho_star {
                    Some(rho) => writeln!(out, "{:.6},{rho:.6},", row.alpha2).unwrap(),
                    None => writeln!(out, "{:.6},,{}", row.alpha2, NO_INTERIOR_MAXIMUM).unwrap(),
                }
            }
            out
        }
        Format::Json => to_json(&rows),
    };
    emit(&args.out.output, &content)
}
