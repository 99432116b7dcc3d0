//! The index of increase: the share of a path's total variation that comes
//! from upward movements.
//!
//! For increments `d_i = y_i - y_{i-1}` the discrete index is
//! `sum (d_i)+ / sum |d_i|`. It is 1 for non-decreasing paths, 0 for
//! non-increasing ones, and the numerator is exactly the total-variation
//! distance from the path to the nearest non-increasing path (see
//! [`monotone_projection`]).

use serde::Serialize;

use crate::bank::FunctionSpec;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum_by;
use crate::series::SampledSeries;

/// Smallest quadrature resolution accepted by [`exact_index`].
pub const MIN_RESOLUTION: usize = 1_000;

/// An index value together with the sums it was formed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexValue {
    pub value: f64,
    /// Sum of positive increments (un-normalized index).
    pub numerator: f64,
    /// Total variation of the path.
    pub denominator: f64,
}

impl IndexValue {
    /// `numerator` and `down` are the summed rises and falls, `denominator` their total.
    fn from_sums(numerator: f64, down: f64, denominator: f64) -> Result<Self> {
        if !(denominator > 0.0) || !denominator.is_finite() {
            return Err(Error::DegenerateSeries);
        }
        // Divide the smaller side and complement the larger, so swapping rises
        // and falls maps the value to exactly 1 - value.
        let value = if numerator <= down {
            numerator / denominator
        } else {
            1.0 - down / denominator
        }
        .clamp(0.0, 1.0);
        Ok(Self {
            value,
            numerator,
            denominator,
        })
    }
}

/// Nearest non-increasing path and its total-variation distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionResult {
    pub projected: Vec<f64>,
    pub distance: f64,
}

/// `y[i] - y[i-1]` for `i = 1..n`.
pub fn increments(series: &SampledSeries) -> Vec<f64> {
    value_increments(series.y())
}

pub(crate) fn value_increments(y: &[f64]) -> Vec<f64> {
    y.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Discrete index of increase of a sampled path.
///
/// Zero increments add to neither sum. A path with no movement at all has no
/// index and yields [`Error::DegenerateSeries`].
pub fn index_numeric(series: &SampledSeries) -> Result<IndexValue> {
    index_of_values(series.y())
}

/// [`index_numeric`] on a bare value sequence (locations are irrelevant to the index).
pub fn index_of_values(y: &[f64]) -> Result<IndexValue> {
    if y.len() < 2 {
        return Err(Error::DegenerateSeries);
    }
    let steps = y.len() - 1;
    let up = pairwise_sum_by(steps, |i| (y[i + 1] - y[i]).max(0.0));
    let down = pairwise_sum_by(steps, |i| (y[i] - y[i + 1]).max(0.0));
    let total = pairwise_sum_by(steps, |i| (y[i + 1] - y[i]).abs());
    IndexValue::from_sums(up, down, total)
}

/// Index of a bank function from its closed-form derivative, using the
/// composite midpoint rule on `resolution` subintervals of `[0, 1]`.
pub fn exact_index(spec: &FunctionSpec, resolution: usize) -> Result<IndexValue> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "quadrature resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let width = 1.0 / resolution as f64;
    let node = |k: usize| (k as f64 + 0.5) * width;
    let up = pairwise_sum_by(resolution, |k| spec.derivative(node(k)).max(0.0)) * width;
    let down = pairwise_sum_by(resolution, |k| (-spec.derivative(node(k))).max(0.0)) * width;
    let total = pairwise_sum_by(resolution, |k| spec.derivative(node(k)).abs()) * width;
    if total <= f64::EPSILON {
        return Err(Error::DegenerateSeries);
    }
    IndexValue::from_sums(up, down, total)
}

/// Projects the path onto the non-increasing paths with the same start.
///
/// Rising steps are flattened and falling steps kept, so the projected
/// increments are `min(d_i, 0)` and the distance `sum |d_i - min(d_i, 0)|`
/// equals the sum of positive increments. No non-increasing path is closer in
/// total variation.
pub fn monotone_projection(series: &SampledSeries) -> ProjectionResult {
    let y = series.y();
    let mut projected = Vec::with_capacity(y.len());
    let mut level = y[0];
    projected.push(level);
    let mut removed = Vec::with_capacity(y.len() - 1);
    for w in y.windows(2) {
        let step = w[1] - w[0];
        let kept = step.min(0.0);
        level += kept;
        projected.push(level);
        removed.push((step - kept).abs());
    }
    let distance = pairwise_sum_by(removed.len(), |i| removed[i]);
    ProjectionResult {
        projected,
        distance,
    }
}
