//! Write a noisy series to CSV, read it back and drive the CLI on it.

use monoidx::bank::FunctionId;
use monoidx::cli::{read_series, run, write_series};
use monoidx::synth::{generate_series, NoiseSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("monoidx-series-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("h7.csv");

    let series = generate_series(FunctionId::H7.spec(), 5_000, NoiseSpec::new(0.5, 42)?)?;
    write_series(&path, &series)?;
    let back = read_series(&path)?;
    println!("{} rows, identical after reading back: {}", back.len(), back == series);

    let file = path.to_str().unwrap();
    let code = run(["monoidx", "gindex", "--alpha", "0.3", "--in", file]);
    println!("exit code {code}");
    Ok(())
}
