//! Poincaré disk picture of a ball of chambers with one axis drawn in.
//!
//! `cargo run --release --example render > tiling.svg`

use pentalab::conjugacy::conj_min;
use pentalab::davis::{Ball, Budget};
use pentalab::pieces::AxisLine;
use pentalab::render::render_svg;

fn main() -> Result<(), pentalab::Error> {
    let ball = Ball::new(5, &Budget::default())?;
    let axis = AxisLine::of(&conj_min(&"0213".parse()?)?.rep)?;
    print!("{}", render_svg(&ball, Some(&axis.geodesic), "axis of 0213", 800));
    Ok(())
}
