//! The ordered `(t, y)` sample path every estimator consumes.

use crate::error::{Error, Result};

/// Ordered samples `(t_i, y_i)` on the unit interval.
///
/// `t` is strictly increasing inside `[0, 1]`, both vectors have the same
/// length, and there are at least two points. All values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSeries {
    t: Vec<f64>,
    y: Vec<f64>,
}

impl SampledSeries {
    pub fn new(t: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if t.len() != y.len() {
            return Err(Error::InvalidSeries(format!(
                "t has {} values but y has {}",
                t.len(),
                y.len()
            )));
        }
        if t.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least 2 points, got {}",
                t.len()
            )));
        }
        if let Some(i) = t.iter().chain(&y).position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "non-finite value at position {}",
                i % t.len()
            )));
        }
        if t[0] < 0.0 || t[t.len() - 1] > 1.0 {
            return Err(Error::InvalidSeries(format!(
                "sample locations must lie in [0, 1], got [{}, {}]",
                t[0],
                t[t.len() - 1]
            )));
        }
        if let Some(i) = t.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSeries(format!(
                "t must be strictly increasing (t[{}] = {} >= t[{}] = {})",
                i,
                t[i],
                i + 1,
                t[i + 1]
            )));
        }
        Ok(Self { t, y })
    }

    /// Values observed at the equidistant design `t_i = i / (n - 1)`.
    pub fn on_unit_grid(y: Vec<f64>) -> Result<Self> {
        let t = unit_grid(y.len());
        Self::new(t, y)
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.t, self.y)
    }

    /// Same locations, values replaced. Lengths must agree.
    pub fn with_values(&self, y: Vec<f64>) -> Result<Self> {
        Self::new(self.t.clone(), y)
    }

    /// The first `len` points.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        let len = len.min(self.len());
        Self::new(self.t[..len].to_vec(), self.y[..len].to_vec())
    }
}

/// The design points `t_i = i / (n - 1)`, `i = 0..n`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    let last = (n - 1) as f64;
    (0..n).map(|i| i as f64 / last).collect()
}
