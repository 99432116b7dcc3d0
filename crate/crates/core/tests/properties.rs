use monoidx::bank::{sample_on_grid, FunctionId};
use monoidx::bootstrap::{bootstrap_ci, BootstrapConfig};
use monoidx::numeric::{median, ols_slope};
use monoidx::studies::{convergence_trace, surface_study, write_csv, StudyConfig};
use monoidx::synth::{generate_series, NoiseSpec};
use monoidx::index_numeric;
use tempfile::TempDir;

#[test]
fn noise_swamps_every_bank_function() {
    for id in FunctionId::ALL {
        let inside = (0..100)
            .filter(|&seed| {
                let series = generate_series(id.spec(), 10_000, NoiseSpec::new(1.0, seed).unwrap()).unwrap();
                (0.48..=0.52).contains(&index_numeric(&series).unwrap().value)
            })
            .count();
        assert!(inside >= 95, "{id}: {inside}/100");
    }
}

// Grid error against the reference index should halve as n doubles for the
// first quartet (slope about -1 on a log-log scale).
#[test]
fn grid_error_of_first_quartet_decays_linearly() {
    let ns = [100usize, 1_000, 10_000, 100_000];
    let mut problems = Vec::new();
    for id in [FunctionId::H1, FunctionId::H2, FunctionId::H3, FunctionId::H4] {
        let spec = id.spec();
        let errors: Vec<f64> = ns
            .iter()
            .map(|&n| (index_numeric(&sample_on_grid(spec, n).unwrap()).unwrap().value - spec.reference_index).abs())
            .collect();
        if errors.iter().any(|&e| e <= 0.0) {
            problems.push(format!("{id}: errors {errors:?} include 0, slope undefined"));
            continue;
        }
        let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
        let slope = ols_slope(&x, &y);
        if !(-1.3..=-0.7).contains(&slope) {
            problems.push(format!("{id}: slope {slope:.3} from errors {errors:?}"));
        }
    }
    assert!(problems.is_empty(), "{}", problems.join("\n"));
}

#[test]
fn h3_grouped_error_does_not_grow_with_n() {
    let trace = convergence_trace(FunctionId::H3.spec(), 0.2, 1.0, &[1_000, 10_000, 100_000], &(0..20).collect::<Vec<_>>())
        .unwrap();
    let errors: Vec<f64> = trace.iter().map(|r| r.median_abs_error).collect();
    let inversions: Vec<f64> = errors.windows(2).map(|w| w[1] - w[0]).filter(|&up| up > 0.0).collect();
    assert!(inversions.len() <= 1 && inversions.iter().all(|&up| up <= 0.01), "{errors:?}");
}

#[test]
fn noise_does_not_narrow_bootstrap_intervals() {
    let spec = FunctionId::H8.spec();
    let width = |sigma: f64, seed: u64| {
        let series = generate_series(spec, 10_000, NoiseSpec::new(sigma, seed).unwrap()).unwrap();
        let report = bootstrap_ci(&series, 0.34, &BootstrapConfig::new(seed)).unwrap();
        report.ci_high - report.ci_low
    };
    let quiet: Vec<f64> = (0..10).map(|s| width(0.0, s)).collect();
    let noisy: Vec<f64> = (0..10).map(|s| width(1.0, s)).collect();
    assert!(median(&noisy) >= median(&quiet), "quiet {quiet:?}\nnoisy {noisy:?}");
}

#[test]
fn study_tables_are_byte_identical_on_rerun() {
    let dir = TempDir::new().unwrap();
    let config = StudyConfig {
        functions: vec!["h5".into(), "h7".into()],
        n_grid: vec![500, 2_000],
        alpha_grid: vec![0.2, 0.3, 0.4],
        sigma: 1.0,
        seeds: vec![3, 4],
        output: dir.path().join("s"),
        replicates: 100,
    };
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    let rows = surface_study(&config).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 3 * 2);
    write_csv(&first, &rows).unwrap();
    write_csv(&second, &surface_study(&config).unwrap()).unwrap();
    assert_eq!(std::fs::read(first).unwrap(), std::fs::read(second).unwrap());
}
