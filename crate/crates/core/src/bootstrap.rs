//! m-out-of-n bootstrap for the grouped index.
//!
//! Each replicate draws `m` of the `n` observations with replacement, puts
//! them back in time order and recomputes the grouped index with the same
//! `alpha` (so `floor(m^alpha)` groups). The 2.5% and 97.5% quantiles of the
//! replicate distribution form the 95% interval.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouping::{grouped_index, grouped_index_of_values, plan_groups};
use crate::numeric::{quantile_sorted, sample_sd};
use crate::rng::{stream, Purpose};
use crate::series::SampledSeries;

pub const DEFAULT_REPLICATES: usize = 1000;
/// Extra draws allowed per replicate whose resample has no movement.
pub const MAX_REDRAWS: usize = 100;
const LOWER_LEVEL: f64 = 0.025;
const UPPER_LEVEL: f64 = 0.975;

/// Resample size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsample {
    /// `round(2 sqrt(n))`, see [`subsample_size`].
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub subsample: Subsample,
    pub seed: u64,
}

impl BootstrapConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            replicates: DEFAULT_REPLICATES,
            subsample: Subsample::Auto,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapReport {
    /// Grouped index on the full series.
    pub point_estimate: f64,
    pub alpha: f64,
    pub replicates: usize,
    pub subsample_size: usize,
    /// Groups used inside each replicate.
    pub subsample_groups: usize,
    pub standard_deviation: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Replicates that were dropped because every redraw was degenerate.
    pub degenerate: usize,
    /// Replicate index values in replicate order.
    pub distribution: Vec<f64>,
}

/// `round(2 sqrt(n))` clamped to `[8, n]`.
pub fn subsample_size(n: usize) -> Result<usize> {
    if n < 16 {
        return Err(Error::TooFewPoints { needed: 16, got: n });
    }
    let m = (2.0 * (n as f64).sqrt()).round() as usize;
    Ok(m.clamp(8, n))
}

fn replicate(y: &[f64], m: usize, alpha: f64, seed: u64, id: usize) -> Option<f64> {
    let mut rng = stream(seed, Purpose::Bootstrap, id as u64);
    let mut picks = vec![0usize; m];
    let mut values = vec![0.0; m];
    for _ in 0..=MAX_REDRAWS {
        for p in picks.iter_mut() {
            *p = rng.random_range(0..y.len());
        }
        // Locations are strictly increasing, so index order is time order.
        picks.sort_unstable();
        for (v, &p) in values.iter_mut().zip(&picks) {
            *v = y[p];
        }
        match grouped_index_of_values(&values, alpha) {
            Ok(v) => return Some(v.value),
            Err(Error::DegenerateSeries) => continue,
            Err(_) => return None,
        }
    }
    None
}

/// Bootstrap distribution, standard deviation and 95% quantile interval of the grouped index.
pub fn bootstrap_ci(series: &SampledSeries, alpha: f64, config: &BootstrapConfig) -> Result<BootstrapReport> {
    let n = series.len();
    if n < 16 {
        return Err(Error::TooFewPoints { needed: 16, got: n });
    }
    if config.replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    let m = match config.subsample {
        Subsample::Auto => subsample_size(n)?,
        Subsample::Fixed(m) if (4..=n).contains(&m) => m,
        Subsample::Fixed(m) => {
            return Err(Error::InvalidArgument(format!(
                "subsample size must be in [4, {n}], got {m}"
            )))
        }
    };
    let point_estimate = grouped_index(series, alpha)?.value;
    let subsample_groups = plan_groups(m, alpha)?.groups;

    let y = series.y();
    let draws: Vec<Option<f64>> = (0..config.replicates)
        .into_par_iter()
        .map(|id| replicate(y, m, alpha, config.seed, id))
        .collect();
    let distribution: Vec<f64> = draws.iter().flatten().copied().collect();
    let degenerate = config.replicates - distribution.len();
    // Allowed: at most 1% of replicates.
    if degenerate * 100 > config.replicates || distribution.is_empty() {
        return Err(Error::ResampleExhausted {
            degenerate,
            replicates: config.replicates,
        });
    }

    let mut sorted = distribution.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(BootstrapReport {
        point_estimate,
        alpha,
        replicates: config.replicates,
        subsample_size: m,
        subsample_groups,
        standard_deviation: sample_sd(&distribution),
        ci_low: quantile_sorted(&sorted, LOWER_LEVEL),
        ci_high: quantile_sorted(&sorted, UPPER_LEVEL),
        degenerate,
        distribution,
    })
}
