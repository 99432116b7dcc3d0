//! Eight test functions on `[0, 1]` with closed-form derivatives.
//!
//! `h1..h4` are the trigonometric quartet (two non-monotone, two monotone),
//! `h5..h8` the mixed polynomial/trigonometric quartet. Reference indices are
//! the published four-decimal values.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::series::{unit_grid, SampledSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionId {
    H1,
    H2,
    H3,
    H4,
    H5,
    H6,
    H7,
    H8,
}

impl FunctionId {
    pub const ALL: [FunctionId; 8] = [
        FunctionId::H1,
        FunctionId::H2,
        FunctionId::H3,
        FunctionId::H4,
        FunctionId::H5,
        FunctionId::H6,
        FunctionId::H7,
        FunctionId::H8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionId::H1 => "h1",
            FunctionId::H2 => "h2",
            FunctionId::H3 => "h3",
            FunctionId::H4 => "h4",
            FunctionId::H5 => "h5",
            FunctionId::H6 => "h6",
            FunctionId::H7 => "h7",
            FunctionId::H8 => "h8",
        }
    }

    pub fn spec(self) -> &'static FunctionSpec {
        &BANK[self as usize]
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

/// A test function with its analytic derivative.
#[derive(Debug)]
pub struct FunctionSpec {
    pub id: FunctionId,
    value: fn(f64) -> f64,
    derivative: fn(f64) -> f64,
    /// Hoelder exponent of the derivative.
    pub holder_gamma: f64,
    pub reference_index: f64,
}

impl FunctionSpec {
    pub fn eval(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        (self.derivative)(t)
    }
}

static BANK: [FunctionSpec; 8] = [
    FunctionSpec {
        id: FunctionId::H1,
        value: |t| (-PI / 2.0 + 1.5 * PI * t).sin(),
        derivative: |t| 1.5 * PI * (-PI / 2.0 + 1.5 * PI * t).cos(),
        holder_gamma: 1.0,
        reference_index: 0.6667,
    },
    FunctionSpec {
        id: FunctionId::H2,
        value: |t| (-PI / 2.0 + 1.5 * PI * t).cos(),
        derivative: |t| -1.5 * PI * (-PI / 2.0 + 1.5 * PI * t).sin(),
        holder_gamma: 1.0,
        reference_index: 0.3333,
    },
    FunctionSpec {
        id: FunctionId::H3,
        value: |t| (PI / 2.0 * t).sin(),
        derivative: |t| PI / 2.0 * (PI / 2.0 * t).cos(),
        holder_gamma: 1.0,
        reference_index: 1.0,
    },
    FunctionSpec {
        id: FunctionId::H4,
        value: |t| (PI / 2.0 * t).cos(),
        derivative: |t| -PI / 2.0 * (PI / 2.0 * t).sin(),
        holder_gamma: 1.0,
        reference_index: 0.0,
    },
    FunctionSpec {
        id: FunctionId::H5,
        value: |t| (t - 1.0).powi(2) + (6.0 * t).sin(),
        derivative: |t| 2.0 * (t - 1.0) + 6.0 * (6.0 * t).cos(),
        holder_gamma: 1.0,
        reference_index: 0.3311,
    },
    FunctionSpec {
        id: FunctionId::H6,
        value: |t| (t - 0.25).powi(2) + (0.25 * t).sin(),
        derivative: |t| 2.0 * (t - 0.25) + 0.25 * (0.25 * t).cos(),
        holder_gamma: 1.0,
        reference_index: 0.9799,
    },
    FunctionSpec {
        id: FunctionId::H7,
        value: |t| t * t * t - 5.6 * t * t + 6.0 * t,
        derivative: |t| 3.0 * t * t - 11.2 * t + 6.0,
        holder_gamma: 1.0,
        reference_index: 0.8157,
    },
    FunctionSpec {
        id: FunctionId::H8,
        value: |t| (2.0 * PI * t).sin(),
        derivative: |t| 2.0 * PI * (2.0 * PI * t).cos(),
        holder_gamma: 1.0,
        reference_index: 0.5,
    },
];

/// Looks a bank function up by its id string (`"h1"` .. `"h8"`).
pub fn get_function(id: &str) -> Result<&'static FunctionSpec> {
    id.parse::<FunctionId>().map(FunctionId::spec)
}

/// Noise-free samples `h(t_i)` at `t_i = i / (n - 1)`.
pub fn sample_on_grid(spec: &FunctionSpec, n: usize) -> Result<SampledSeries> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let t = unit_grid(n);
    let y = t.iter().map(|&x| spec.eval(x)).collect();
    SampledSeries::new(t, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::exact_index;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lookup() {
        assert_eq!(get_function("h3").unwrap().eval(1.0), 1.0);
        assert_eq!(get_function("h8").unwrap().reference_index, 0.5);
        assert_eq!(get_function("h7").unwrap().reference_index, 0.8157);
        assert_eq!(
            get_function("h9").unwrap_err(),
            Error::UnknownFunction("h9".into())
        );
        for id in FunctionId::ALL {
            assert_eq!(id.spec().id, id);
            assert_eq!(id.to_string().parse::<FunctionId>().unwrap(), id);
            assert_eq!(id.spec().holder_gamma, 1.0);
        }
    }

    #[test]
    fn grid_samples() {
        let s = sample_on_grid(get_function("h3").unwrap(), 2).unwrap();
        assert_eq!(s.t(), &[0.0, 1.0]);
        assert_eq!(s.y()[0], 0.0);
        assert_eq!(s.y()[1], 1.0);

        let s = sample_on_grid(get_function("h4").unwrap(), 3).unwrap();
        assert_eq!(s.y()[0], 1.0);
        assert!((s.y()[1] - (PI / 4.0).cos()).abs() < 1e-15);
        assert!(s.y()[2].abs() < 1e-15);

        assert!(sample_on_grid(get_function("h1").unwrap(), 1).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let step = 1e-6;
        for id in FunctionId::ALL {
            let spec = id.spec();
            for _ in 0..1000 {
                let t: f64 = rng.random_range(0.001..0.999);
                let fd = (spec.eval(t + step) - spec.eval(t - step)) / (2.0 * step);
                let d = spec.derivative(t);
                assert!(
                    (fd - d).abs() <= 1e-6 * d.abs().max(1.0),
                    "{id} at {t}: {fd} vs {d}"
                );
            }
        }
    }

    #[test]
    fn references_match_quadrature() {
        for id in FunctionId::ALL {
            let spec = id.spec();
            let v = exact_index(spec, 1_000_000).unwrap().value;
            assert!(
                (v - spec.reference_index).abs() <= 5e-4,
                "{id}: {v} vs {}",
                spec.reference_index
            );
        }
    }
}
