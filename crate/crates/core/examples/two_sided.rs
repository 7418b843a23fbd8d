//! Tiling certificate and the two-sided distance comparison on a ball of chambers.
//!
//! `cargo run --release --example two_sided -- 8`

use pentalab::davis::{Ball, Budget};
use pentalab::qi::{tiling_certificate, verify_two_sided, TwoSidedConfig};

fn main() -> Result<(), pentalab::Error> {
    let radius = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let ball = Ball::new(radius, &Budget::default())?;
    let cert = tiling_certificate(&ball);
    println!("{} chambers, certificate holds to 1e-9: {}", cert.chambers, cert.holds(1e-9));
    let r = verify_two_sided(&ball, &TwoSidedConfig::default());
    println!("{} pairs, {} violations, d_H/d_X in [{:.4}, {:.4}]", r.pairs, r.violations(), r.min_ratio, r.max_ratio);
    for (d, pairs, lo, hi) in r.by_distance.iter().take(12) {
        println!("  d_X = {d:>2}: {pairs:>10} pairs, d_H in [{lo:.4}, {hi:.4}]");
    }
    Ok(())
}
