//! `monoidx` command-line frontend.
//!
//! Every successful command prints one JSON envelope on stdout:
//!
//! ```text
//! {"command": "...", "inputs": {...}, "seed": 42 | null, "version": "...", "result": {...}}
//! ```
//!
//! Exit codes: 0 success, 1 data or estimation error, 2 usage error.
//! Series files are CSV with a `t,y` header and rows strictly increasing in `t`.
//! Random commands take `--seed`, else `MONOIDX_SEED`, else a fresh seed that
//! is echoed in the envelope.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bank::get_function;
use crate::bootstrap::{bootstrap_ci, BootstrapConfig, Subsample};
use crate::error::Error;
use crate::grouping::{grouped_index, plan_groups, rate_exponents};
use crate::index::index_numeric;
use crate::series::SampledSeries;
use crate::smoothing::{select_bandwidth, BandwidthGrid, SeriesSource};
use crate::studies::{
    convergence_trace, rate_estimate, surface_study, table_report, write_csv, StudyConfig,
};
use crate::synth::{generate_series, NoiseSpec};

pub const SEED_ENV: &str = "MONOIDX_SEED";

#[derive(Debug, Parser)]
#[command(name = "monoidx", version, about = "Index of increase for noisy sampled functions")]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a bank function with Gaussian noise and write a t,y CSV.
    Generate(GenerateArgs),
    /// Plain index of increase of a series file.
    Index(IndexArgs),
    /// Grouped index of a series file.
    Gindex(GindexArgs),
    /// Cross-validated choice of the grouping parameter.
    Cv(CvArgs),
    /// m-out-of-n bootstrap interval for the grouped index.
    Boot(BootArgs),
    /// Batch studies driven by a JSON config.
    Study(StudyArgs),
}

#[derive(Debug, Args, Serialize)]
struct GenerateArgs {
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct IndexArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct GindexArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "function"])))]
struct CvArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long = "fn", requires = "n")]
    function: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 50)]
    repeats: usize,
    #[arg(long, default_value_t = 30)]
    grid_size: usize,
    #[arg(long, default_value_t = 0.01)]
    grid_min: f64,
    #[arg(long, default_value_t = 0.99)]
    grid_max: f64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SubsampleArg {
    Auto,
    Fixed(usize),
}

impl FromStr for SubsampleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(SubsampleArg::Auto);
        }
        s.parse()
            .map(SubsampleArg::Fixed)
            .map_err(|_| format!("expected `auto` or an integer, got `{s}`"))
    }
}

impl Serialize for SubsampleArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SubsampleArg::Auto => s.serialize_str("auto"),
            SubsampleArg::Fixed(m) => s.serialize_u64(*m as u64),
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct BootArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
    #[arg(long, default_value = "auto")]
    m: SubsampleArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StudyKind {
    Surface,
    Trace,
    Table,
}

#[derive(Debug, Args, Serialize)]
struct StudyArgs {
    #[arg(value_enum)]
    kind: StudyKind,
    #[arg(long)]
    config: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Estimation(Error),
    Input { kind: &'static str, message: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Estimation(e)
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input {
        kind: "IoError",
        message: format!("{}: {e}", path.display()),
    }
}

/// Reads a `t,y` series file.
pub fn read_series(path: &Path) -> crate::Result<SampledSeries, String> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| e.to_string())?;
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "y" {
        return Err(format!("expected header `t,y`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")));
    }
    let mut t = Vec::new();
    let mut y = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let parse = |field: &str| {
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("row {}: `{field}` is not a number", line + 1))
        };
        let ti = parse(&record[0])?;
        if t.last() == Some(&ti) {
            return Err(format!("row {}: duplicate t = {ti}", line + 1));
        }
        t.push(ti);
        y.push(parse(&record[1])?);
    }
    SampledSeries::new(t, y).map_err(|e| e.to_string())
}

/// Writes a `t,y` series file; values use shortest round-trip formatting.
pub fn write_series(path: &Path, series: &SampledSeries) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["t", "y"])?;
    for (t, y) in series.t().iter().zip(series.y()) {
        writer.write_record([t.to_string(), y.to_string()])?;
    }
    writer.flush()
}

fn load(path: &Path) -> Result<SampledSeries, Failure> {
    read_series(path).map_err(|message| Failure::Input {
        kind: "InvalidSeriesFile",
        message: format!("{}: {message}", path.display()),
    })
}

fn resolve_seed(flag: Option<u64>, env: Option<OsString>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match env {
        Some(raw) => raw
            .to_str()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got {raw:?}"))),
        None => Ok(rand::random()),
    }
}

struct Outcome {
    command: &'static str,
    inputs: Value,
    seed: Option<u64>,
    result: Value,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn execute(command: Command, env_seed: Option<OsString>) -> Result<Outcome, Failure> {
    match command {
        Command::Generate(args) => {
            let seed = resolve_seed(args.seed, env_seed)?;
            let spec = get_function(&args.function)?;
            let series = generate_series(spec, args.n, NoiseSpec::new(args.sigma, seed)?)?;
            write_series(&args.out, &series).map_err(|e| io_failure(&args.out, e))?;
            Ok(Outcome {
                command: "generate",
                inputs: to_value(&args),
                seed: Some(seed),
                result: json!({
                    "path": args.out,
                    "n": series.len(),
                    "function": spec.id.as_str(),
                    "sigma": args.sigma,
                }),
            })
        }
        Command::Index(args) => {
            let series = load(&args.input)?;
            let value = index_numeric(&series)?;
            Ok(Outcome {
                command: "index",
                inputs: to_value(&args),
                seed: None,
                result: json!({ "n": series.len(), "index": value }),
            })
        }
        Command::Gindex(args) => {
            let series = load(&args.input)?;
            let plan = plan_groups(series.len(), args.alpha)?;
            let value = grouped_index(&series, args.alpha)?;
            Ok(Outcome {
                command: "gindex",
                inputs: to_value(&args),
                seed: None,
                result: json!({ "plan": plan, "index": value }),
            })
        }
        Command::Cv(args) => {
            let seed = resolve_seed(args.seed, env_seed)?;
            let source = match (&args.input, &args.function) {
                (Some(path), _) => SeriesSource::Fixed(load(path)?),
                (None, Some(id)) => SeriesSource::Synthetic {
                    spec: get_function(id)?,
                    n: args.n.ok_or_else(|| Failure::Usage("--fn requires --n".into()))?,
                    sigma: NoiseSpec::new(args.sigma, seed)?.sigma,
                },
                (None, None) => return Err(Failure::Usage("one of --in or --fn is required".into())),
            };
            let grid = BandwidthGrid::equidistant(args.grid_min, args.grid_max, args.grid_size)?;
            let report = select_bandwidth(&source, &grid, args.folds, args.repeats, seed)?;
            Ok(Outcome {
                command: "cv",
                inputs: to_value(&args),
                seed: Some(seed),
                result: to_value(&report),
            })
        }
        Command::Boot(args) => {
            let seed = resolve_seed(args.seed, env_seed)?;
            let series = load(&args.input)?;
            let config = BootstrapConfig {
                replicates: args.replicates,
                subsample: match args.m {
                    SubsampleArg::Auto => Subsample::Auto,
                    SubsampleArg::Fixed(m) => Subsample::Fixed(m),
                },
                seed,
            };
            let report = bootstrap_ci(&series, args.alpha, &config)?;
            Ok(Outcome {
                command: "boot",
                inputs: to_value(&args),
                seed: Some(seed),
                result: to_value(&report),
            })
        }
        Command::Study(args) => {
            let text = std::fs::read_to_string(&args.config).map_err(|e| io_failure(&args.config, e))?;
            let config: StudyConfig = serde_json::from_str(&text).map_err(|e| Failure::Input {
                kind: "InvalidConfig",
                message: format!("{}: {e}", args.config.display()),
            })?;
            let result = run_study(args.kind, &config)?;
            Ok(Outcome {
                command: "study",
                inputs: json!({ "kind": args.kind, "config": args.config, "study": config }),
                seed: None,
                result,
            })
        }
    }
}

#[derive(Serialize)]
struct TraceCsvRow<'a> {
    function: &'a str,
    alpha: f64,
    n: usize,
    median_abs_error: f64,
    seeds: usize,
}

fn run_study(kind: StudyKind, config: &StudyConfig) -> Result<Value, Failure> {
    let specs = config.validate()?;
    match kind {
        StudyKind::Surface => {
            let rows = surface_study(config)?;
            let path = config.output_path("surface");
            write_csv(&path, &rows).map_err(|e| io_failure(&path, e))?;
            Ok(json!({ "path": path, "rows": rows.len() }))
        }
        StudyKind::Trace => {
            let mut csv_rows = Vec::new();
            let mut traces = Vec::new();
            for spec in &specs {
                for &alpha in &config.alpha_grid {
                    let trace = convergence_trace(spec, alpha, config.sigma, &config.n_grid, &config.seeds)?;
                    let predicted = rate_exponents(alpha, spec.holder_gamma)?.overall;
                    let (slope, slope_error) = match rate_estimate(&trace) {
                        Ok(s) => (Some(s), None),
                        Err(e) => (None, Some(e.to_string())),
                    };
                    csv_rows.extend(trace.iter().map(|r| TraceCsvRow {
                        function: spec.id.as_str(),
                        alpha,
                        n: r.n,
                        median_abs_error: r.median_abs_error,
                        seeds: r.seeds,
                    }));
                    traces.push(json!({
                        "function": spec.id.as_str(),
                        "alpha": alpha,
                        "predicted_exponent": predicted,
                        "slope": slope,
                        "slope_error": slope_error,
                        "rows": trace,
                    }));
                }
            }
            let path = config.output_path("trace");
            write_csv(&path, &csv_rows).map_err(|e| io_failure(&path, e))?;
            Ok(json!({ "path": path, "traces": traces }))
        }
        StudyKind::Table => {
            let rows = table_report(
                &specs,
                &config.alpha_grid,
                config.sigma,
                config.n_grid[0],
                config.replicates,
                config.seeds[0],
            )?;
            let path = config.output_path("table");
            write_csv(&path, &rows).map_err(|e| io_failure(&path, e))?;
            Ok(json!({ "path": path, "rows": rows }))
        }
    }
}

/// Runs the CLI, reading `MONOIDX_SEED` from the process environment.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(
        args,
        std::env::var_os(SEED_ENV),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// Runs the CLI with an explicit seed environment value and output streams.
pub fn run_with<I, T>(args: I, env_seed: Option<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };

    let outcome = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(cli.command, env_seed)),
            Err(e) => Err(Failure::Usage(format!("--threads: {e}"))),
        },
        None => execute(cli.command, env_seed),
    };

    match outcome {
        Ok(o) => {
            let envelope = json!({
                "command": o.command,
                "inputs": o.inputs,
                "seed": o.seed,
                "version": env!("CARGO_PKG_VERSION"),
                "result": o.result,
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&envelope).expect("json"));
            0
        }
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
        Err(Failure::Estimation(e)) => {
            let _ = writeln!(err, "error[{}]: {e}", e.name());
            1
        }
        Err(Failure::Input { kind, message }) => {
            let _ = writeln!(err, "error[{kind}]: {message}");
            1
        }
    }
}
