//! Noisy observations `Y_i = h(t_i) + sigma * z_i` on the equidistant design.

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bank::FunctionSpec;
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};
use crate::series::{unit_grid, SampledSeries};

/// i.i.d. mean-zero Gaussian measurement errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "noise sigma must be finite and >= 0, got {sigma}"
            )));
        }
        Ok(Self { sigma, seed })
    }
}

// ChaCha words consumed per normal variate (two u64 draws).
const WORDS_PER_VARIATE: u128 = 4;
const CHUNK: usize = 4096;

/// Standard normal variates `z_0 .. z_{n-1}`; `z_i` depends only on `(seed, i)`.
///
/// Each variate is a Box-Muller transform of the two 64-bit words at a fixed
/// position of the seed's noise stream, so any chunking gives the same output.
pub fn standard_normals(seed: u64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let mut rng = stream(seed, Purpose::Noise, 0);
            rng.set_word_pos((c * CHUNK) as u128 * WORDS_PER_VARIATE);
            for z in chunk.iter_mut() {
                let a = rng.next_u64();
                let b = rng.next_u64();
                *z = box_muller(a, b);
            }
        });
    out
}

fn box_muller(a: u64, b: u64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    // u1 in (0, 1] keeps the logarithm finite.
    let u1 = ((a >> 11) + 1) as f64 * SCALE;
    let u2 = (b >> 11) as f64 * SCALE;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// `n` noisy samples of `spec` at `t_i = i / (n - 1)`.
///
/// Bit-identical for identical inputs; `sigma = 0` reproduces
/// [`crate::bank::sample_on_grid`] exactly.
pub fn generate_series(spec: &FunctionSpec, n: usize, noise: NoiseSpec) -> Result<SampledSeries> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    NoiseSpec::new(noise.sigma, noise.seed)?;
    let t = unit_grid(n);
    let mut y: Vec<f64> = t.iter().map(|&x| spec.eval(x)).collect();
    if noise.sigma > 0.0 {
        let z = standard_normals(noise.seed, n);
        for (yi, zi) in y.iter_mut().zip(z) {
            *yi += noise.sigma * zi;
        }
    }
    SampledSeries::new(t, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bank::{get_function, sample_on_grid};
    use crate::index::index_numeric;
    use crate::numeric::{mean, sample_sd};

    #[test]
    fn zero_noise_is_grid_sampling() {
        let h3 = get_function("h3").unwrap();
        let a = generate_series(h3, 5, NoiseSpec::new(0.0, 99).unwrap()).unwrap();
        assert_eq!(a, sample_on_grid(h3, 5).unwrap());
    }

    #[test]
    fn deterministic_per_seed() {
        let h1 = get_function("h1").unwrap();
        let noise = NoiseSpec::new(1.0, 42).unwrap();
        let a = generate_series(h1, 10_000, noise).unwrap();
        let b = generate_series(h1, 10_000, noise).unwrap();
        assert_eq!(a, b);
        let c = generate_series(h1, 10_000, NoiseSpec::new(1.0, 43).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn prefix_stable_across_lengths() {
        // z_i depends only on (seed, i), not on n or the chunk layout.
        let long = standard_normals(5, 3 * CHUNK + 17);
        let short = standard_normals(5, CHUNK + 3);
        assert_eq!(&long[..short.len()], &short[..]);
    }

    #[test]
    fn independent_of_thread_count() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| standard_normals(11, 50_000));
        let b = four.install(|| standard_normals(11, 50_000));
        assert_eq!(a, b);
    }

    #[test]
    fn gaussian_sanity() {
        let n = 1_000_000;
        let z = standard_normals(2024, n);
        let m = mean(&z);
        assert!(m.abs() < 4.0 / (n as f64).sqrt(), "{m}");
        let sd = sample_sd(&z);
        assert!((sd - 1.0).abs() < 0.005, "{sd}");
        let tail = z.iter().filter(|v| v.abs() > 1.96).count() as f64 / n as f64;
        assert!((tail - 0.05).abs() < 0.002, "{tail}");
    }

    #[test]
    fn noise_swamps_the_plain_index() {
        let h1 = get_function("h1").unwrap();
        let s = generate_series(h1, 10_000, NoiseSpec::new(1.0, 3).unwrap()).unwrap();
        let v = index_numeric(&s).unwrap().value;
        assert!((v - 0.5).abs() < 0.02, "{v}");
    }

    #[test]
    fn rejects_negative_sigma() {
        assert!(NoiseSpec::new(-1.0, 0).is_err());
        assert!(NoiseSpec::new(f64::NAN, 0).is_err());
    }
}
