//! Pentagon lengths in closed form next to the same lengths measured on the tiling.

use pentalab::qi::{golden_defect, length_table, measured_lengths};

fn main() {
    let t = length_table();
    let m = measured_lengths();
    let rows = [
        ("a", t.a, m.a),
        ("b", t.b, m.b),
        ("c", t.c, m.c),
        ("d", t.d, m.d),
        ("e", t.e, m.e),
        ("f", t.f, m.f),
        ("2g", t.two_g, m.two_g),
        ("lambda", t.lambda, m.lambda),
    ];
    println!("{:<8}{:>14}{:>14}", "name", "closed form", "measured");
    for (name, x, y) in rows {
        println!("{name:<8}{x:>14.9}{y:>14.9}");
    }
    println!("cosh 2a - golden ratio: {:.1e}", golden_defect());
}
