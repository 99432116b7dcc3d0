//! Index of increase for functions observed with measurement error.
//!
//! The index of increase of a path is the share of its total variation that
//! comes from upward movements: 1 for non-decreasing paths, 0 for
//! non-increasing ones. On densely sampled noisy data the plain discrete index
//! collapses to 1/2, because the noise increments dominate. This crate
//! implements the group-and-average estimator that fixes this, plus the tools
//! to use it in practice:
//!
//! - [`index`]: discrete and quadrature indices, monotone projection
//! - [`bank`]: eight test functions with closed-form derivatives
//! - [`synth`]: reproducible noisy samples
//! - [`grouping`]: the grouped estimator and its rate exponents
//! - [`smoothing`]: Gaussian kernel smoother and cross-validated grouping parameter
//! - [`bootstrap`]: m-out-of-n bootstrap intervals
//! - [`studies`]: batch experiments (surfaces, convergence traces, tables)
//! - [`cli`]: the `monoidx` command-line frontend
//!
//! ```
//! use monoidx::{bank::get_function, grouping::grouped_index, synth::{generate_series, NoiseSpec}};
//!
//! let h1 = get_function("h1")?;
//! let data = generate_series(h1, 100_000, NoiseSpec::new(1.0, 7)?)?;
//! let estimate = grouped_index(&data, 0.28)?;
//! assert!((estimate.value - 2.0 / 3.0).abs() < 0.1);
//! # Ok::<(), monoidx::Error>(())
//! ```

pub mod bank;
pub mod bootstrap;
pub mod cli;
mod error;
pub mod grouping;
pub mod index;
pub mod numeric;
pub mod rng;
pub mod series;
pub mod smoothing;
pub mod studies;
pub mod synth;

pub use error::{Error, Result};
pub use index::{exact_index, increments, index_numeric, monotone_projection, IndexValue, ProjectionResult};
pub use series::SampledSeries;
