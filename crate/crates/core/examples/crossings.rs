//! Crossing types of random lines through the tiling, and the margins behind the lower bound.

use pentalab::qi::{classify_line, claims_check, random_line};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), pentalab::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let line = random_line(&mut rng, 2.0);
    for c in classify_line(&line, -4.0, 4.0)? {
        println!("{:?} between sides {} and {}: length {:.4}", c.kind, c.entry, c.exit, c.length);
    }
    let r = claims_check(2000, 1)?;
    println!("pair margin {:.4}, triple margin {:.4}", r.pair_margin, r.triple_margin);
    for m in &r.minima {
        println!("  {:?}: {} samples, min {:.6}, infimum {:.6}", m.kind, m.samples, m.observed, m.infimum);
    }
    Ok(())
}
