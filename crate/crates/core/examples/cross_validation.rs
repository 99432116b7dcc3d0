//! Pick the grouping parameter by cross-validating a kernel smoother.

use monoidx::bank::FunctionId;
use monoidx::smoothing::{select_bandwidth, BandwidthGrid, SeriesSource};
use monoidx::synth::{generate_series, NoiseSpec};

fn main() -> monoidx::Result<()> {
    let n = 10_000;
    let grid = BandwidthGrid::default();

    let observed = generate_series(FunctionId::H3.spec(), n, NoiseSpec::new(1.0, 1)?)?;
    let report = select_bandwidth(&SeriesSource::Fixed(observed), &grid, 5, 10, 1)?;
    println!("observed h3: b_cv={:.3} alpha_cv={:.3}", report.b_cv, report.alpha_cv);

    // Simulated data: every repeat draws a fresh noisy series.
    let source = SeriesSource::Synthetic { spec: FunctionId::H1.spec(), n, sigma: 1.0 };
    let report = select_bandwidth(&source, &grid, 5, 10, 1)?;
    println!("simulated h1: b_cv={:.3} alpha_cv={:.3}", report.b_cv, report.alpha_cv);
    for (b, e) in grid.values().iter().zip(&report.mean_errors).step_by(5) {
        println!("  b={b:.3} cv error {e:.5}");
    }
    Ok(())
}
