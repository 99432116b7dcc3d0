//! Median error of the grouped index as n grows, with a fitted log-log rate.

use monoidx::bank::FunctionId;
use monoidx::grouping::rate_exponents;
use monoidx::studies::{convergence_trace, rate_estimate};

fn main() -> monoidx::Result<()> {
    let seeds: Vec<u64> = (0..20).collect();
    let n_grid = [1_000, 10_000, 100_000];
    for (id, alpha) in [(FunctionId::H1, 0.28), (FunctionId::H5, 0.28), (FunctionId::H8, 0.3)] {
        let trace = convergence_trace(id.spec(), alpha, 1.0, &n_grid, &seeds)?;
        let predicted = rate_exponents(alpha, id.spec().holder_gamma)?.overall;
        println!("{id} alpha={alpha} (predicted exponent -{predicted:.3})");
        for row in &trace {
            println!("  n={:>7} median error {:.4}", row.n, row.median_abs_error);
        }
        match rate_estimate(&trace) {
            Ok(slope) => println!("  fitted slope {slope:.3}"),
            Err(e) => println!("  no slope: {e}"),
        }
    }
    Ok(())
}
