//! Batch experiments over functions, sample sizes, grouping parameters and
//! seeds: estimate surfaces, convergence traces with fitted rates, and
//! bootstrap summary tables. Every table is a pure function of its config.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bank::{FunctionId, FunctionSpec};
use crate::bootstrap::{bootstrap_ci, BootstrapConfig, Subsample, DEFAULT_REPLICATES};
use crate::error::{Error, Result};
use crate::grouping::grouped_index;
use crate::index::exact_index;
use crate::numeric::{median, ols_slope};
use crate::synth::{generate_series, NoiseSpec};

/// Quadrature resolution for the true index in error computations.
pub const TRUTH_RESOLUTION: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub functions: Vec<String>,
    pub n_grid: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    pub seeds: Vec<u64>,
    /// Output path prefix; each study writes `<prefix>-<study>.csv`.
    pub output: PathBuf,
    /// Bootstrap replicates for the table study.
    #[serde(default = "default_replicates")]
    pub replicates: usize,
}

fn default_sigma() -> f64 {
    1.0
}

fn default_replicates() -> usize {
    DEFAULT_REPLICATES
}

impl StudyConfig {
    pub fn validate(&self) -> Result<Vec<&'static FunctionSpec>> {
        if self.functions.is_empty() || self.n_grid.is_empty() || self.alpha_grid.is_empty() || self.seeds.is_empty() {
            return Err(Error::InvalidArgument(
                "functions, n_grid, alpha_grid and seeds must all be non-empty".into(),
            ));
        }
        if let Some(&a) = self.alpha_grid.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
            return Err(Error::InvalidAlpha(a));
        }
        NoiseSpec::new(self.sigma, 0)?;
        self.functions
            .iter()
            .map(|f| f.parse::<FunctionId>().map(FunctionId::spec))
            .collect()
    }

    pub fn output_path(&self, study: &str) -> PathBuf {
        let mut name = self.output.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(format!("-{study}.csv"));
        self.output.with_file_name(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub function: String,
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
    pub index: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub median_abs_error: f64,
    pub seeds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub function: String,
    pub true_value: f64,
    pub point_estimate: f64,
    pub standard_deviation: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub alpha: f64,
    pub n: usize,
    pub subsample_size: usize,
}

/// Grouped index for every (function, n, alpha, seed) cell.
pub fn surface_study(config: &StudyConfig) -> Result<Vec<SurfaceRow>> {
    let specs = config.validate()?;
    let mut cells = Vec::new();
    for &spec in &specs {
        for &n in &config.n_grid {
            for &alpha in &config.alpha_grid {
                for &seed in &config.seeds {
                    cells.push((spec, n, alpha, seed));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(spec, n, alpha, seed)| {
            let series = generate_series(spec, n, NoiseSpec::new(config.sigma, seed)?)?;
            Ok(SurfaceRow {
                function: spec.id.to_string(),
                n,
                alpha,
                seed,
                index: grouped_index(&series, alpha)?.value,
            })
        })
        .collect()
}

/// Median over seeds of `|grouped index - true index|` at each sample size.
pub fn convergence_trace(
    spec: &FunctionSpec,
    alpha: f64,
    sigma: f64,
    n_grid: &[usize],
    seeds: &[u64],
) -> Result<Vec<TraceRow>> {
    if n_grid.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidArgument("n_grid and seeds must be non-empty".into()));
    }
    let truth = exact_index(spec, TRUTH_RESOLUTION)?.value;
    n_grid
        .iter()
        .map(|&n| {
            let errors: Vec<f64> = seeds
                .par_iter()
                .map(|&seed| {
                    let series = generate_series(spec, n, NoiseSpec::new(sigma, seed)?)?;
                    Ok((grouped_index(&series, alpha)?.value - truth).abs())
                })
                .collect::<Result<_>>()?;
            Ok(TraceRow {
                n,
                median_abs_error: median(&errors),
                seeds: seeds.len(),
            })
        })
        .collect()
}

/// Least-squares slope of `ln(error)` against `ln(n)`.
///
/// Needs at least three distinct sample sizes, all with positive error.
pub fn rate_estimate(trace: &[TraceRow]) -> Result<f64> {
    if let Some(row) = trace.iter().find(|r| !(r.median_abs_error > 0.0)) {
        return Err(Error::InsufficientTrace(format!(
            "median error at n = {} is {}, its logarithm is undefined",
            row.n, row.median_abs_error
        )));
    }
    let mut ns: Vec<usize> = trace.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::InsufficientTrace(format!(
            "need at least 3 distinct sample sizes, got {}",
            ns.len()
        )));
    }
    let x: Vec<f64> = trace.iter().map(|r| (r.n as f64).ln()).collect();
    let y: Vec<f64> = trace.iter().map(|r| r.median_abs_error.ln()).collect();
    Ok(ols_slope(&x, &y))
}

/// One bootstrap summary row per function. `alphas` is either a single value
/// shared by all functions or one value per function.
pub fn table_report(
    functions: &[&FunctionSpec],
    alphas: &[f64],
    sigma: f64,
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<Vec<TableRow>> {
    if functions.is_empty() {
        return Err(Error::InvalidArgument("no functions given".into()));
    }
    if alphas.len() != 1 && alphas.len() != functions.len() {
        return Err(Error::InvalidArgument(format!(
            "expected 1 or {} alphas, got {}",
            functions.len(),
            alphas.len()
        )));
    }
    functions
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let alpha = if alphas.len() == 1 { alphas[0] } else { alphas[i] };
            let series = generate_series(spec, n, NoiseSpec::new(sigma, seed)?)?;
            let config = BootstrapConfig {
                replicates,
                subsample: Subsample::Auto,
                seed,
            };
            let boot = bootstrap_ci(&series, alpha, &config)?;
            Ok(TableRow {
                function: spec.id.to_string(),
                true_value: spec.reference_index,
                point_estimate: boot.point_estimate,
                standard_deviation: boot.standard_deviation,
                ci_low: boot.ci_low,
                ci_high: boot.ci_high,
                alpha,
                n,
                subsample_size: boot.subsample_size,
            })
        })
        .collect()
}

/// Writes rows as CSV with a header line.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()
}
