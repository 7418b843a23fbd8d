//! Poincaré-disk SVG of a ball of pentagons, optionally with a geodesic.
//!
//! A hyperboloid point `(x, y, z)` is drawn at `(x, y) / (1 + z)`.

use std::fmt::Write;

use crate::davis::Ball;
use crate::geometry::{Geodesic, Vec3};
use crate::qi::{classify_line, CrossingType};
use crate::tiling::pentagon;

/// Poincaré-disk projection.
pub fn to_disk(p: &Vec3) -> (f64, f64) {
    (p[0] / (1.0 + p[2]), p[1] / (1.0 + p[2]))
}

fn edge_points(a: &Vec3, b: &Vec3, steps: usize, out: &mut Vec<(f64, f64)>) {
    let Ok(g) = Geodesic::through(a, b) else { return };
    let len = crate::geometry::dist(a, b);
    for k in 0..steps {
        out.push(to_disk(&g.point(len * k as f64 / steps as f64)));
    }
}

fn color(t: CrossingType) -> &'static str {
    match t {
        CrossingType::I => "#d62728",
        CrossingType::II => "#ff7f0e",
        CrossingType::III => "#2ca02c",
        CrossingType::IV => "#1f77b4",
        CrossingType::V => "#9467bd",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG document with `metadata` embedded verbatim (escaped) in a `<metadata>` element.
pub fn render_svg(ball: &Ball, geodesic: Option<&Geodesic>, metadata: &str, size: u32) -> String {
    let p = pentagon();
    let half = size as f64 / 2.0;
    let scale = half * 0.98;
    let px = |(x, y): (f64, f64)| (half + scale * x, half - scale * y);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, "<metadata>{}</metadata>", escape(metadata));
    let _ = writeln!(s, r##"<circle cx="{half}" cy="{half}" r="{scale}" fill="none" stroke="#999" stroke-width="1"/>"##);
    let _ = writeln!(s, r##"<g id="tiles" fill="#f4f1ea" stroke="#333" stroke-width="0.6">"##);
    for (i, m) in ball.isometries.iter().enumerate() {
        let verts: Vec<Vec3> = p.vertices.iter().map(|v| m.apply(v)).collect();
        let mut pts = Vec::new();
        for k in 0..5 {
            edge_points(&verts[k], &verts[(k + 1) % 5], 8, &mut pts);
        }
        let path: Vec<String> = pts
            .iter()
            .map(|&q| {
                let (x, y) = px(q);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon data-word="{}" points="{}"/>"#, ball.word(i as u32), path.join(" "));
    }
    let _ = writeln!(s, "</g>");
    if let Some(g) = geodesic {
        let mut pts = Vec::new();
        let n = 400;
        for k in 0..=n {
            let t = -8.0 + 16.0 * k as f64 / n as f64;
            pts.push(px(to_disk(&g.point(t))));
        }
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(
            s,
            r##"<polyline id="geodesic" fill="none" stroke="#000" stroke-width="1.2" points="{}"/>"##,
            path.join(" ")
        );
        if let Ok(recs) = classify_line(g, -6.0, 6.0) {
            let _ = writeln!(s, r#"<g id="crossings" stroke-width="3" fill="none">"#);
            for r in recs {
                let (a, b) = (px(to_disk(&g.point(r.span.0))), px(to_disk(&g.point(r.span.1))));
                let _ = writeln!(
                    s,
                    r#"<line data-type="{:?}" stroke="{}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                    r.kind,
                    color(r.kind),
                    a.0,
                    a.1,
                    b.0,
                    b.1
                );
            }
            let _ = writeln!(s, "</g>");
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davis::Budget;

    #[test]
    fn radius_zero_draws_one_pentagon() {
        let b = Ball::new(0, &Budget::default()).unwrap();
        let svg = render_svg(&b, None, "{\"a\":1}", 200);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains("<metadata>"));
    }
}
