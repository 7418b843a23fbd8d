//! The right-angled regular pentagon and its tiling of H².
//!
//! The base pentagon `P₀` is centered at the origin; side `i` has polar
//! `eᵢ = (cosh b·cos θᵢ, cosh b·sin θᵢ, sinh b)` with `θᵢ = 2πi/5`, and
//! `P₀ = {p : ⟨p, eᵢ⟩ ≤ 0 for all i}`. Vertex `i` joins sides `i` and `i+1`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::geometry::{cross, dot, lin, reflection, HPoint, Isometry, Vec3};

/// Closed-form lengths of the pentagon and its tiling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lengths {
    /// `K = (√5 − 1)/4`.
    pub k: f64,
    /// Half a side.
    pub a: f64,
    /// Center to side midpoint.
    pub b: f64,
    /// Midpoints of adjacent sides.
    pub c: f64,
    /// Midpoints of non-adjacent sides.
    pub d: f64,
    /// Right triangle with legs `a` and `2a`.
    pub e: f64,
    /// Right triangle with legs `2a` and `2a`.
    pub f: f64,
    /// Half the fourth side of the quadrilateral with base `2a` and legs `4a`.
    pub g: f64,
    /// `d / c`.
    pub lambda: f64,
    /// Thin-triangle constant `ln(1 + √2)`.
    pub delta: f64,
    /// Center to vertex.
    pub circumradius: f64,
}

impl Lengths {
    fn compute() -> Self {
        let k = (5f64.sqrt() - 1.0) / 4.0;
        let a = (k + 1.0).sqrt().acosh();
        let b = (1.0 / (1.0 - k).sqrt()).acosh();
        let c = (k + 1.0).acosh();
        let d = (2.0 * k * k + 2.0 * k + 1.0).acosh();
        let e = ((2.0 * k + 1.0) * (k + 1.0).sqrt()).acosh();
        let f = (4.0 * k * k + 4.0 * k + 1.0).acosh();
        let q = 8.0 * k * k + 8.0 * k + 1.0;
        let g = (1.0 + 2.0 * k * q * q).acosh() / 2.0;
        let delta = (1.0 + 2f64.sqrt()).ln();
        let circumradius = (a.cosh() * b.cosh()).acosh();
        Lengths { k, a, b, c, d, e, f, g, lambda: d / c, delta, circumradius }
    }
}

/// Shared closed-form constants.
pub fn lengths() -> &'static Lengths {
    static L: OnceLock<Lengths> = OnceLock::new();
    L.get_or_init(Lengths::compute)
}

/// Geometry of the base pentagon.
#[derive(Clone, Debug)]
pub struct Pentagon {
    pub polars: [Vec3; 5],
    pub reflections: [Isometry; 5],
    /// `vertices[i]` joins sides `i` and `i+1`.
    pub vertices: [Vec3; 5],
    pub midpoints: [Vec3; 5],
}

impl Pentagon {
    fn build() -> Self {
        let b = lengths().b;
        let polars: [Vec3; 5] = std::array::from_fn(|i| {
            let th = 2.0 * PI * i as f64 / 5.0;
            [b.cosh() * th.cos(), b.cosh() * th.sin(), b.sinh()]
        });
        let reflections = std::array::from_fn(|i| reflection(&polars[i]));
        let vertices = std::array::from_fn(|i| {
            let v = cross(&polars[i], &polars[(i + 1) % 5]);
            HPoint::normalize(v).expect("adjacent sides meet").0
        });
        let midpoints = std::array::from_fn(|i| {
            let o = HPoint::ORIGIN.0;
            let m = lin(1.0, &o, -dot(&o, &polars[i]), &polars[i]);
            HPoint::normalize(m).expect("foot is timelike").0
        });
        Pentagon { polars, reflections, vertices, midpoints }
    }

    /// Polar of the symmetry axis through the midpoint of side `i`.
    pub fn side_axis(&self, i: usize) -> Vec3 {
        let th = 2.0 * PI * i as f64 / 5.0;
        [-th.sin(), th.cos(), 0.0]
    }

    /// Polar of the symmetry axis through vertex `i`.
    pub fn vertex_axis(&self, i: usize) -> Vec3 {
        let th = 2.0 * PI * i as f64 / 5.0 + PI / 5.0;
        [-th.sin(), th.cos(), 0.0]
    }

    /// Largest `⟨p, eᵢ⟩`, with its side; `≤ 0` means `p ∈ P₀`.
    pub fn outside(&self, p: &Vec3) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, e) in self.polars.iter().enumerate() {
            let v = dot(p, e);
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }

    /// Distance from a side line to the farthest vertex.
    pub fn height(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| crate::geometry::dist_to_line(v, &self.polars[0]))
            .fold(0.0, f64::max)
    }
}

/// The base pentagon.
pub fn pentagon() -> &'static Pentagon {
    static P: OnceLock<Pentagon> = OnceLock::new();
    P.get_or_init(Pentagon::build)
}

/// Reflection in side `i` of the base pentagon.
pub fn generator(i: u8) -> &'static Isometry {
    &pentagon().reflections[i as usize]
}

/// Walk from `P₀` to a chamber containing `p`; returns the letters crossed.
pub fn locate(p: &Vec3) -> (Vec<u8>, Isometry) {
    let pent = pentagon();
    let mut word = Vec::new();
    let mut m = Isometry::IDENTITY;
    for _ in 0..100_000 {
        let local = m.inverse().apply(p);
        let scale_p = local[2].max(1.0);
        let (i, v) = pent.outside(&local);
        if v <= 1e-12 * scale_p {
            break;
        }
        m = m.then_reflect(&pent.polars[i]);
        word.push(i as u8);
    }
    (word, m)
}
