//! Gaussian kernel regression and repeated k-fold cross-validation of its
//! bandwidth, used to pick the grouping parameter.
//!
//! A bandwidth `b` on `[0, 1]` corresponds to `1 / b` groups, so the
//! cross-validated bandwidth `b_cv` translates to `alpha_cv = ln(1/b_cv) / ln n`.
//!
//! The kernel follows the "normal" smoother convention in which the bandwidth
//! spans the kernel's interquartile range: the Gaussian standard deviation is
//! `0.3706506 * b`, putting the quartiles at `+-0.25 b`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::RngCore;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::bank::FunctionSpec;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::rng::{stream, Purpose};
use crate::series::SampledSeries;
use crate::synth::{generate_series, NoiseSpec};

/// Gaussian standard deviation per unit bandwidth.
pub const KERNEL_SCALE: f64 = 0.3706506;

/// Beyond this many standard deviations `exp(-x^2/2)` underflows to exactly zero.
const KERNEL_REACH: f64 = 38.7;

pub const DEFAULT_FOLDS: usize = 5;
pub const DEFAULT_REPEATS: usize = 50;

/// Candidate bandwidths, strictly increasing inside `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandwidthGrid {
    values: Vec<f64>,
}

impl BandwidthGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("bandwidth grid is empty".into()));
        }
        if let Some(&b) = values.iter().find(|&&b| !(b > 0.0 && b < 1.0)) {
            return Err(Error::InvalidBandwidth(b));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "bandwidth grid must be strictly increasing".into(),
            ));
        }
        Ok(Self { values })
    }

    /// `count` equidistant bandwidths from `low` to `high` inclusive.
    pub fn equidistant(low: f64, high: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("bandwidth grid is empty".into()));
        }
        if count == 1 {
            return Self::new(vec![low]);
        }
        let step = (high - low) / (count - 1) as f64;
        Self::new((0..count).map(|i| low + i as f64 * step).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Default for BandwidthGrid {
    /// 30 points from 0.01 to 0.99.
    fn default() -> Self {
        Self::equidistant(0.01, 0.99, 30).expect("default grid is valid")
    }
}

/// Outcome of bandwidth selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub grid: BandwidthGrid,
    /// Cross-validated mean squared prediction error per bandwidth.
    pub mean_errors: Vec<f64>,
    pub b_cv: f64,
    pub alpha_cv: f64,
    pub n: usize,
    pub folds: usize,
    pub repeats: usize,
}

/// Where the cross-validation data comes from.
#[derive(Debug, Clone)]
pub enum SeriesSource {
    /// Observed data: each repeat re-draws only the fold partition.
    Fixed(SampledSeries),
    /// Simulated data: each repeat also draws a fresh noisy series.
    Synthetic {
        spec: &'static FunctionSpec,
        n: usize,
        sigma: f64,
    },
}

impl SeriesSource {
    pub fn len(&self) -> usize {
        match self {
            SeriesSource::Fixed(s) => s.len(),
            SeriesSource::Synthetic { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn series_for_repeat(&self, seed: u64, repeat: usize) -> Result<SampledSeries> {
        match self {
            SeriesSource::Fixed(s) => Ok(s.clone()),
            SeriesSource::Synthetic { spec, n, sigma } => {
                let data_seed = stream(seed, Purpose::CvRepeatData, repeat as u64).next_u64();
                generate_series(spec, *n, NoiseSpec::new(*sigma, data_seed)?)
            }
        }
    }
}

fn check_bandwidth(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidBandwidth(b))
    }
}

/// Converts a selected bandwidth into a grouping parameter.
pub fn alpha_from_bandwidth(b_cv: f64, n: usize) -> Result<f64> {
    if !(b_cv > 0.0 && b_cv < 1.0) {
        return Err(Error::InvalidBandwidth(b_cv));
    }
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    Ok((1.0 / b_cv).ln() / (n as f64).ln())
}

/// Kernel-weighted mean of `train_y` at `x`; `None` when every weight underflows.
fn weighted_mean_at(train_t: &[f64], train_y: &[f64], x: f64, sd: f64) -> Option<f64> {
    let reach = KERNEL_REACH * sd;
    let lo = train_t.partition_point(|&t| t < x - reach);
    let hi = train_t.partition_point(|&t| t <= x + reach);
    let inv = 1.0 / (2.0 * sd * sd);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in lo..hi {
        let d = x - train_t[i];
        let w = (-d * d * inv).exp();
        num += w * train_y[i];
        den += w;
    }
    (den > 0.0).then(|| num / den)
}

fn nearest_value(train_t: &[f64], train_y: &[f64], x: f64) -> f64 {
    let i = train_t.partition_point(|&t| t < x);
    let pick = if i == 0 {
        0
    } else if i == train_t.len() || x - train_t[i - 1] <= train_t[i] - x {
        i - 1
    } else {
        i
    };
    train_y[pick]
}

fn predict_direct(train_t: &[f64], train_y: &[f64], x: f64, sd: f64) -> f64 {
    weighted_mean_at(train_t, train_y, x, sd).unwrap_or_else(|| nearest_value(train_t, train_y, x))
}

/// Nadaraya-Watson estimate with a Gaussian kernel at each evaluation point.
///
/// `train_t` must be sorted. Points where all kernel weights underflow to zero
/// take the value of the nearest training point.
pub fn kernel_smooth(
    train_t: &[f64],
    train_y: &[f64],
    eval_points: &[f64],
    bandwidth: f64,
) -> Result<Vec<f64>> {
    check_bandwidth(bandwidth)?;
    if train_t.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    if train_t.len() != train_y.len() {
        return Err(Error::InvalidArgument(format!(
            "training locations ({}) and values ({}) differ in length",
            train_t.len(),
            train_y.len()
        )));
    }
    if train_t.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("training locations must be sorted".into()));
    }
    let sd = KERNEL_SCALE * bandwidth;
    Ok(eval_points
        .iter()
        .map(|&x| predict_direct(train_t, train_y, x, sd))
        .collect())
}

/// Random partition of `0..n` into `folds` near-equal folds: `fold_of[i]`.
fn partition(n: usize, folds: usize, seed: u64, repeat: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream(seed, Purpose::FoldSplit, repeat as u64));
    let mut fold_of = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        fold_of[i] = pos % folds;
    }
    fold_of
}

/// Spacing of an equidistant design, if the series has one.
fn uniform_spacing(t: &[f64]) -> Option<f64> {
    let n = t.len();
    let step = (t[n - 1] - t[0]) / (n - 1) as f64;
    let tol = 1e-9 * step;
    t.iter()
        .enumerate()
        .all(|(i, &ti)| (ti - (t[0] + i as f64 * step)).abs() <= tol)
        .then_some(step)
}

/// Held-out predictions for every fold of one partition, for many bandwidths.
///
/// On an equidistant design all kernel sums are discrete convolutions in
/// index space, evaluated exactly (up to rounding) with FFTs; numerator and
/// denominator ride in the real and imaginary parts of one transform.
/// Otherwise each held-out point is smoothed directly.
struct FoldScorer<'a> {
    series: &'a SampledSeries,
    fold_of: Vec<usize>,
    folds: usize,
    fft: Option<FftState>,
}

struct FftState {
    len: usize,
    step: f64,
    inverse: Arc<dyn Fft<f64>>,
    /// Transform of `(mask * y) + i * mask` per fold.
    spectra: Vec<Vec<Complex64>>,
}

// FFT denominators below this are recomputed directly.
const FFT_MASS_FLOOR: f64 = 1e-6;

impl<'a> FoldScorer<'a> {
    fn new(series: &'a SampledSeries, fold_of: Vec<usize>, folds: usize, planner: &mut FftPlanner<f64>) -> Self {
        let fft = uniform_spacing(series.t()).map(|step| {
            let n = series.len();
            let len = (2 * n - 1).next_power_of_two();
            let forward = planner.plan_fft_forward(len);
            let inverse = planner.plan_fft_inverse(len);
            let spectra = (0..folds)
                .map(|k| {
                    let mut buf = vec![Complex64::new(0.0, 0.0); len];
                    for (i, (&fold, &y)) in fold_of.iter().zip(series.y()).enumerate() {
                        if fold != k {
                            buf[i] = Complex64::new(y, 1.0);
                        }
                    }
                    forward.process(&mut buf);
                    buf
                })
                .collect();
            FftState {
                len,
                step,
                inverse,
                spectra,
            }
        });
        Self {
            series,
            fold_of,
            folds,
            fft,
        }
    }

    fn training_set(&self, k: usize) -> (Vec<f64>, Vec<f64>) {
        self.fold_of
            .iter()
            .zip(self.series.t().iter().zip(self.series.y()))
            .filter(|(&f, _)| f != k)
            .map(|(_, (&t, &y))| (t, y))
            .unzip()
    }

    /// Mean over folds of the held-out mean squared error.
    fn score(&self, bandwidth: f64, kernel_spectrum: Option<&[Complex64]>) -> f64 {
        let sd = KERNEL_SCALE * bandwidth;
        let y = self.series.y();
        let t = self.series.t();
        let fold_errors: Vec<f64> = (0..self.folds)
            .map(|k| {
                let mut sq = Vec::new();
                match (&self.fft, kernel_spectrum) {
                    (Some(state), Some(kernel)) => {
                        let mut buf: Vec<Complex64> = state.spectra[k]
                            .iter()
                            .zip(kernel)
                            .map(|(a, b)| a * b)
                            .collect();
                        state.inverse.process(&mut buf);
                        let scale = 1.0 / state.len as f64;
                        let mut training = None;
                        for (i, &fold) in self.fold_of.iter().enumerate() {
                            if fold != k {
                                continue;
                            }
                            let num = buf[i].re * scale;
                            let den = buf[i].im * scale;
                            let pred = if den > FFT_MASS_FLOOR {
                                num / den
                            } else {
                                let (tt, ty) = training.get_or_insert_with(|| self.training_set(k));
                                predict_direct(tt, ty, t[i], sd)
                            };
                            sq.push((pred - y[i]).powi(2));
                        }
                    }
                    _ => {
                        let (tt, ty) = self.training_set(k);
                        for (i, &fold) in self.fold_of.iter().enumerate() {
                            if fold == k {
                                let pred = predict_direct(&tt, &ty, t[i], sd);
                                sq.push((pred - y[i]).powi(2));
                            }
                        }
                    }
                }
                pairwise_sum(&sq) / sq.len() as f64
            })
            .collect();
        pairwise_sum(&fold_errors) / self.folds as f64
    }

    fn kernel_spectrum(&self, bandwidth: f64, planner: &mut FftPlanner<f64>) -> Option<Vec<Complex64>> {
        let state = self.fft.as_ref()?;
        let n = self.series.len();
        let sd = KERNEL_SCALE * bandwidth;
        let inv = 1.0 / (2.0 * sd * sd);
        let mut buf = vec![Complex64::new(0.0, 0.0); state.len];
        for lag in 0..n {
            let d = lag as f64 * state.step;
            let w = (-d * d * inv).exp();
            buf[lag] = Complex64::new(w, 0.0);
            if lag > 0 {
                buf[state.len - lag] = Complex64::new(w, 0.0);
            }
        }
        planner.plan_fft_forward(state.len).process(&mut buf);
        Some(buf)
    }
}

fn check_folds(n: usize, folds: usize) -> Result<()> {
    if folds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {folds}")));
    }
    if n < 2 * folds {
        return Err(Error::TooFewPoints {
            needed: 2 * folds,
            got: n,
        });
    }
    Ok(())
}

/// k-fold cross-validated mean squared prediction error of the smoother at one bandwidth.
pub fn cv_score(series: &SampledSeries, bandwidth: f64, folds: usize, seed: u64) -> Result<f64> {
    check_bandwidth(bandwidth)?;
    check_folds(series.len(), folds)?;
    let mut planner = FftPlanner::new();
    let scorer = FoldScorer::new(series, partition(series.len(), folds, seed, 0), folds, &mut planner);
    let kernel = scorer.kernel_spectrum(bandwidth, &mut planner);
    Ok(scorer.score(bandwidth, kernel.as_deref()))
}

fn repeat_errors(
    source: &SeriesSource,
    grid: &BandwidthGrid,
    folds: usize,
    seed: u64,
    repeat: usize,
) -> Result<Vec<f64>> {
    let series = source.series_for_repeat(seed, repeat)?;
    let mut planner = FftPlanner::new();
    let scorer = FoldScorer::new(
        &series,
        partition(series.len(), folds, seed, repeat),
        folds,
        &mut planner,
    );
    Ok(grid
        .values()
        .iter()
        .map(|&b| {
            let kernel = scorer.kernel_spectrum(b, &mut planner);
            scorer.score(b, kernel.as_deref())
        })
        .collect())
}

/// Repeated k-fold cross-validation over the grid; picks the bandwidth with
/// the smallest mean error (smallest bandwidth on ties).
pub fn select_bandwidth(
    source: &SeriesSource,
    grid: &BandwidthGrid,
    folds: usize,
    repeats: usize,
    seed: u64,
) -> Result<CvReport> {
    let n = source.len();
    check_folds(n, folds)?;
    if repeats == 0 {
        return Err(Error::InvalidArgument("need at least one repeat".into()));
    }
    let per_repeat: Vec<Vec<f64>> = (0..repeats)
        .into_par_iter()
        .map(|r| repeat_errors(source, grid, folds, seed, r))
        .collect::<Result<_>>()?;
    let mean_errors: Vec<f64> = (0..grid.values().len())
        .map(|j| {
            let col: Vec<f64> = per_repeat.iter().map(|row| row[j]).collect();
            pairwise_sum(&col) / repeats as f64
        })
        .collect();
    let best = mean_errors
        .iter()
        .enumerate()
        .fold(0, |best, (j, &e)| if e < mean_errors[best] { j } else { best });
    let b_cv = grid.values()[best];
    Ok(CvReport {
        grid: grid.clone(),
        alpha_cv: alpha_from_bandwidth(b_cv, n)?,
        mean_errors,
        b_cv,
        n,
        folds,
        repeats,
    })
}
