//! Small-cancellation verdict for an explicit presentation.
//!
//! `cargo run --release --example verdict -- 0.8 0123402413 0314203412`

use pentalab::conjugacy::conj_min;
use pentalab::presentation::{cprime_verdict, Presentation, VerdictConfig};

fn main() -> Result<(), pentalab::Error> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.8);
    let mut words: Vec<String> = args.collect();
    if words.is_empty() {
        words = vec!["0123402413".into()];
    }
    let relators = words.iter().map(|w| conj_min(&w.parse()?)).collect::<Result<Vec<_>, _>>()?;
    let v = cprime_verdict(&Presentation::new(relators, alpha)?, &VerdictConfig::default())?;
    println!("C'({alpha}): {:?}", v.status);
    for s in &v.systoles {
        println!("  systole {} (cube {}, hyp {:.4})", s.root, s.cube, s.hyp);
    }
    if let Some(c) = &v.worst_cone {
        println!("  worst cone piece {:?}: {:.4} against {:.4}", c.classes, c.diameter, c.bound);
    }
    if let Some(w) = &v.worst_wall {
        println!("  worst wall piece {}: {:.4} against {:.4}", w.class, w.diameter, w.bound);
    }
    for (t, ok) in &v.thresholds {
        println!("  C'({t}): {ok}");
    }
    Ok(())
}
