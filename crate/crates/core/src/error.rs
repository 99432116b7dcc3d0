use thiserror::Error;

/// Errors raised by the estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    /// The sample path has zero total variation, so the index is undefined.
    #[error("degenerate series: total variation is zero, the index is undefined")]
    DegenerateSeries,

    #[error("unknown function `{0}` (expected one of h1..h8)")]
    UnknownFunction(String),

    #[error("grouping parameter {0} is outside (0, 1)")]
    InvalidAlpha(f64),

    #[error("Hoelder exponent {0} is outside (0, 1]")]
    InvalidGamma(f64),

    #[error("group size {group_size} is invalid for n = {n} (need 2 <= N <= n/2)")]
    InvalidGroupSize { n: usize, group_size: usize },

    #[error("grouping plan is for n = {plan} but the series has {series} points")]
    PlanMismatch { plan: usize, series: usize },

    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("bandwidth {0} is outside (0, 1)")]
    InvalidBandwidth(f64),

    #[error("{degenerate} of {replicates} bootstrap replicates stayed degenerate after redraws")]
    ResampleExhausted { degenerate: usize, replicates: usize },

    #[error("insufficient trace: {0}")]
    InsufficientTrace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable variant name, used in CLI error reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidSeries(_) => "InvalidSeries",
            Error::DegenerateSeries => "DegenerateSeries",
            Error::UnknownFunction(_) => "UnknownFunction",
            Error::InvalidAlpha(_) => "InvalidAlpha",
            Error::InvalidGamma(_) => "InvalidGamma",
            Error::InvalidGroupSize { .. } => "InvalidGroupSize",
            Error::PlanMismatch { .. } => "PlanMismatch",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::InvalidBandwidth(_) => "InvalidBandwidth",
            Error::ResampleExhausted { .. } => "ResampleExhausted",
            Error::InsufficientTrace(_) => "InsufficientTrace",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
