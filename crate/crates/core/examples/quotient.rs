//! Random quotients: success fractions of the small-cancellation premise over a length grid.

use pentalab::conjugacy::{ClassCensus, Metric};
use pentalab::presentation::VerdictConfig;
use pentalab::quotient::{density_k, rows_to_csv, threshold_experiment};

fn main() -> Result<(), pentalab::Error> {
    for ell in [20.0, 63.0, 127.0, 200.0] {
        println!("k(1/63.51, {ell}) = {}", density_k(1.0 / 63.51, ell));
    }
    let census = ClassCensus::build(Metric::Cube, 12.0)?;
    let rows = threshold_experiment(&census, &[6.0, 8.0, 10.0, 12.0], &[0.015, 0.1], 0.8, 20, 1, &VerdictConfig::default())?;
    print!("{}", rows_to_csv(&rows));
    Ok(())
}
