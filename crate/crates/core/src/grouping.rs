//! Group-and-average: trading resolution for noise reduction.
//!
//! The `n` observations are split into `M = max(2, floor(n^alpha))`
//! contiguous groups of `N = floor(n / M)` points; the `n - M N < M` trailing
//! points are dropped. The index is then computed on the `M` group means.
//! Small `alpha` averages more noise away, large `alpha` keeps more of the
//! function's shape.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{index_of_values, IndexValue};
use crate::numeric::pairwise_sum;
use crate::series::SampledSeries;

/// Layout of contiguous equal-size groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupingPlan {
    pub alpha: f64,
    pub n: usize,
    /// Number of groups.
    pub groups: usize,
    /// Observations per group.
    pub group_size: usize,
    /// Trailing observations left out.
    pub dropped: usize,
}

impl GroupingPlan {
    /// Zero-based, half-open index range of group `j` (zero-based).
    pub fn group_range(&self, j: usize) -> std::ops::Range<usize> {
        j * self.group_size..(j + 1) * self.group_size
    }

    pub fn used(&self) -> usize {
        self.groups * self.group_size
    }
}

/// Convergence exponents of the grouped estimator for a given `alpha` and
/// Hoelder exponent `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateExponents {
    /// `alpha * gamma`: bias from averaging the function over a group.
    pub deterministic: f64,
    /// `(1 - 3 alpha) / 2`: accumulated noise of the group means.
    pub stochastic: f64,
    /// The smaller of the two; the overall rate is `n^-overall`.
    pub overall: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidGamma(gamma))
    }
}

/// `floor(n^alpha)`, treating values within rounding of the next integer as that integer.
fn floor_power(n: usize, alpha: f64) -> usize {
    let raw = (n as f64).powf(alpha);
    let below = raw.floor();
    let above = below + 1.0;
    if above - raw <= 1e-9 * raw {
        above as usize
    } else {
        below as usize
    }
}

pub fn plan_groups(n: usize, alpha: f64) -> Result<GroupingPlan> {
    check_alpha(alpha)?;
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    let groups = floor_power(n, alpha).clamp(2, n);
    let group_size = n / groups;
    Ok(GroupingPlan {
        alpha,
        n,
        groups,
        group_size,
        dropped: n - groups * group_size,
    })
}

fn group_means(values: &[f64], plan: &GroupingPlan) -> Vec<f64> {
    let size = plan.group_size as f64;
    (0..plan.groups)
        .map(|j| pairwise_sum(&values[plan.group_range(j)]) / size)
        .collect()
}

/// Means of `t` and `y` over each group.
pub fn group_average(series: &SampledSeries, plan: &GroupingPlan) -> Result<SampledSeries> {
    if plan.n != series.len() {
        return Err(Error::PlanMismatch {
            plan: plan.n,
            series: series.len(),
        });
    }
    SampledSeries::new(group_means(series.t(), plan), group_means(series.y(), plan))
}

/// Index of increase of the group means.
pub fn grouped_index(series: &SampledSeries, alpha: f64) -> Result<IndexValue> {
    let plan = plan_groups(series.len(), alpha)?;
    let averaged = group_average(series, &plan)?;
    index_of_values(averaged.y())
}

/// [`grouped_index`] on a time-ordered value sequence whose locations may repeat.
pub fn grouped_index_of_values(values: &[f64], alpha: f64) -> Result<IndexValue> {
    let plan = plan_groups(values.len(), alpha)?;
    index_of_values(&group_means(values, &plan))
}

/// The `alpha` maximizing `min(alpha gamma, (1 - 3 alpha) / 2)`: `1 / (3 + 2 gamma)`.
pub fn alpha_max(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(1.0 / (3.0 + 2.0 * gamma))
}

pub fn rate_exponents(alpha: f64, gamma: f64) -> Result<RateExponents> {
    check_alpha(alpha)?;
    check_gamma(gamma)?;
    let deterministic = alpha * gamma;
    let stochastic = (1.0 - 3.0 * alpha) / 2.0;
    Ok(RateExponents {
        deterministic,
        stochastic,
        overall: deterministic.min(stochastic),
    })
}

/// The `alpha` for which groups of `group_size` partition `n` points: `1 - ln N / ln n`.
pub fn alpha_for_group_size(n: usize, group_size: usize) -> Result<f64> {
    if group_size < 2 || group_size > n / 2 {
        return Err(Error::InvalidGroupSize { n, group_size });
    }
    Ok(1.0 - (group_size as f64).ln() / (n as f64).ln())
}
