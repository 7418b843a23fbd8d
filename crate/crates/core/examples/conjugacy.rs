//! Conjugacy classes: canonical representatives, both translation lengths, primitive roots.

use pentalab::conjugacy::{conj_min, primitive_root, ClassCensus, Metric};
use pentalab::qi::sharpness;

fn main() -> Result<(), pentalab::Error> {
    for w in ["02", "0213", "3102", "0202", "01234", "02413"] {
        let c = conj_min(&w.parse()?)?;
        let root = primitive_root(&c)?.map(|(r, n)| format!("{}^{n}", r.rep)).unwrap_or_else(|| "-".into());
        println!("{w:>6} -> {:<8} cube {:>2}  hyp {:.6}  root {root}", c.rep.to_string(), c.len_cube, c.len_hyp);
    }
    let census = ClassCensus::build(Metric::Cube, 10.0)?;
    let s = sharpness(&census)?;
    println!(
        "{} classes up to cube length 10; len_hyp/len_cube in [{:.6} ({}), {:.6} ({})]",
        s.classes, s.inf_ratio, s.inf_witness, s.sup_ratio, s.sup_witness
    );
    Ok(())
}
