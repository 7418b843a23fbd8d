//! Medians and convex hulls in the Davis complex.

use pentalab::coxeter::Word;
use pentalab::davis::{hull_window, Ball, Budget};
use pentalab::pieces::combinatorial_axis;

fn main() -> Result<(), pentalab::Error> {
    let ball = Ball::new(6, &Budget::default())?;
    let (a, b, c): (Word, Word, Word) = ("02".parse()?, "13".parse()?, "024".parse()?);
    println!("median({a}, {b}, {c}) = {}", ball.median(&a, &b, &c)?);
    let closure = ball.median_closure(&[a, b, c])?;
    println!("median closure has {} chambers", closure.len());
    let rep: Word = "0213".parse()?;
    let hull = hull_window(&combinatorial_axis(&rep, 2))?;
    println!("hull of two periods each side of {rep}: {} chambers, thickness {}", hull.chambers.len(), hull.thickness);
    Ok(())
}
