//! Plain index of increase on noise-free samples of every bank function,
//! next to the quadrature value and the stored reference.

use monoidx::bank::{sample_on_grid, FunctionId};
use monoidx::{exact_index, index_numeric, monotone_projection, SampledSeries};

fn main() -> monoidx::Result<()> {
    println!("{:<4} {:>10} {:>10} {:>10}", "fn", "grid", "exact", "reference");
    for id in FunctionId::ALL {
        let spec = id.spec();
        let grid = index_numeric(&sample_on_grid(spec, 10_000)?)?.value;
        let exact = exact_index(spec, 1_000_000)?.value;
        println!("{:<4} {grid:>10.4} {exact:>10.4} {:>10.4}", id, spec.reference_index);
    }

    let series = SampledSeries::on_unit_grid(vec![0.0, 2.0, 1.0, 3.0])?;
    let p = monotone_projection(&series);
    println!("\nnearest non-increasing path to {:?}: {:?} (distance {})", series.y(), p.projected, p.distance);
    Ok(())
}
