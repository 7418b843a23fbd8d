//! Growth tables and exponent fits for the group, its classes and a wall stabilizer.

use pentalab::conjugacy::Metric;
use pentalab::growth::{default_window, fit_exponent, GrowthLab, Subject};

fn main() -> Result<(), pentalab::Error> {
    let mut lab = GrowthLab::new();
    for (subject, metric, n) in [
        (Subject::Group, Metric::Cube, 14.0),
        (Subject::Group, Metric::Hyp, 10.0),
        (Subject::Conjugacy, Metric::Cube, 10.0),
        (Subject::PrimitiveConjugacy, Metric::Cube, 10.0),
        (Subject::WallStabilizer, Metric::Cube, 400.0),
    ] {
        let table = lab.growth(subject, metric, n)?;
        let fit = fit_exponent(&table, default_window(&table))?;
        println!(
            "{subject:?} / {metric:?}: b {:.4} on [{}, {}], B/A {:.3}",
            fit.b_hat,
            fit.window.0,
            fit.window.1,
            fit.b_sandwich / fit.a_hat
        );
    }
    Ok(())
}
