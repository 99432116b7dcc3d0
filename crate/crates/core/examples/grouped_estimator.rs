//! Noise drives the plain index to 1/2; averaging over groups recovers it.

use monoidx::bank::FunctionId;
use monoidx::grouping::{grouped_index, plan_groups, rate_exponents, alpha_for_group_size};
use monoidx::synth::{generate_series, NoiseSpec};
use monoidx::index_numeric;

fn main() -> monoidx::Result<()> {
    let n = 100_000;
    let alpha = 0.28;
    let plan = plan_groups(n, alpha)?;
    println!("n={n} alpha={alpha}: {} groups of {} ({} dropped)", plan.groups, plan.group_size, plan.dropped);

    for id in [FunctionId::H1, FunctionId::H2, FunctionId::H5, FunctionId::H8] {
        let series = generate_series(id.spec(), n, NoiseSpec::new(1.0, 7)?)?;
        println!(
            "{id}: plain {:.4}  grouped {:.4}  true {:.4}",
            index_numeric(&series)?.value,
            grouped_index(&series, alpha)?.value,
            id.spec().reference_index
        );
    }

    // A day of seconds averaged to minutes: which alpha gives 60-second groups?
    let minutes = alpha_for_group_size(86_400, 60)?;
    let rates = rate_exponents(minutes, 1.0)?;
    println!(
        "\nminute averages of a day: alpha={minutes:.4}, bias exponent {:.4}, noise exponent {:.4}",
        rates.deterministic, rates.stochastic
    );
    Ok(())
}
