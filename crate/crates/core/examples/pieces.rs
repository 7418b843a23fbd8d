//! Largest loose pieces between axes, and the survival curve of piece diameters.

use pentalab::conjugacy::{conj_min, ClassCensus, Metric};
use pentalab::pieces::{max_piece_census, piece_decay, PieceConfig};

fn main() -> Result<(), pentalab::Error> {
    let cfg = PieceConfig::default();
    let g = conj_min(&"0213".parse()?)?;
    let h = conj_min(&"0314".parse()?)?;
    if let Some(p) = max_piece_census(&g, &h, cfg.j, 6)? {
        println!("{} vs {}: diameter {:.4} via translate {}", g.rep, h.rep, p.diameter, p.translate);
    }
    let census = ClassCensus::build(Metric::Hyp, 10.0)?;
    let d = piece_decay(&census, 1000, 1, &cfg)?;
    println!("{} pairs, log-survival slope {:.4} on [{:.2}, {:.2}]", d.pairs, d.slope, d.window.0, d.window.1);
    for (x, s) in d.survival.iter().step_by(4).filter(|p| p.1 > 0.0) {
        println!("  P(D > {x:>5.2}) = {s:.4}");
    }
    Ok(())
}
