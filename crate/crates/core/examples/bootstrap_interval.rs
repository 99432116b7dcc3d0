//! m-out-of-n bootstrap intervals for the grouped index.

use monoidx::bank::FunctionId;
use monoidx::bootstrap::{bootstrap_ci, BootstrapConfig, Subsample};
use monoidx::synth::{generate_series, NoiseSpec};

fn main() -> monoidx::Result<()> {
    for (id, alpha) in [(FunctionId::H5, 0.28), (FunctionId::H6, 0.24), (FunctionId::H7, 0.24), (FunctionId::H8, 0.34)] {
        let series = generate_series(id.spec(), 10_000, NoiseSpec::new(1.0, 3)?)?;
        let r = bootstrap_ci(&series, alpha, &BootstrapConfig::new(3))?;
        println!(
            "{id}: estimate {:.4} sd {:.4} 95% [{:.4}, {:.4}]  true {:.4}  (m={}, {} groups)",
            r.point_estimate, r.standard_deviation, r.ci_low, r.ci_high,
            id.spec().reference_index, r.subsample_size, r.subsample_groups
        );
    }

    let series = generate_series(FunctionId::H8.spec(), 10_000, NoiseSpec::new(1.0, 3)?)?;
    let config = BootstrapConfig { subsample: Subsample::Fixed(1_000), ..BootstrapConfig::new(3) };
    let r = bootstrap_ci(&series, 0.34, &config)?;
    println!("h8 with m=1000: sd {:.4} 95% [{:.4}, {:.4}]", r.standard_deviation, r.ci_low, r.ci_high);
    Ok(())
}
