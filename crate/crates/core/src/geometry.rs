//! Hyperboloid model of the hyperbolic plane.
//!
//! Points live on the upper sheet of `x² + y² − z² = −1`. Geodesics are
//! described by a unit spacelike polar `e` (the line is `{p : ⟨p,e⟩ = 0}`)
//! together with a base point and unit tangent for parametrization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

/// Lorentz form `x₁y₁ + x₂y₂ − x₃y₃`.
#[inline]
pub fn dot(u: &Vec3, v: &Vec3) -> f64 {
    u[0] * v[0] + u[1] * v[1] - u[2] * v[2]
}

/// `J(u × v)`, orthogonal to both `u` and `v` for the Lorentz form.
#[inline]
pub fn cross(u: &Vec3, v: &Vec3) -> Vec3 {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        -(u[0] * v[1] - u[1] * v[0]),
    ]
}

#[inline]
pub fn add(u: &Vec3, v: &Vec3) -> Vec3 {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

#[inline]
pub fn sub(u: &Vec3, v: &Vec3) -> Vec3 {
    [u[0] - v[0], u[1] - v[1], u[2] - v[2]]
}

#[inline]
pub fn scale(u: &Vec3, s: f64) -> Vec3 {
    [u[0] * s, u[1] * s, u[2] * s]
}

/// `a·u + b·v`.
#[inline]
pub fn lin(a: f64, u: &Vec3, b: f64, v: &Vec3) -> Vec3 {
    [a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]]
}

fn max_abs(u: &Vec3) -> f64 {
    u.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Numerical tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    /// Validity tolerance, relative to the squared size of the coordinates.
    pub tol: f64,
    /// Half-width of the band around `cosh L = 1` treated as ambiguous.
    pub band: f64,
    /// Re-orthonormalize a product after this many compositions.
    pub reortho_period: u32,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self { tol: 1e-10, band: 1e-9, reortho_period: 32 }
    }
}

/// A point on the upper sheet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint(pub Vec3);

impl HPoint {
    pub const ORIGIN: HPoint = HPoint([0.0, 0.0, 1.0]);

    /// Checked constructor.
    pub fn new(v: Vec3, cfg: &GeometryConfig) -> Result<Self> {
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::Input("non-finite coordinates".into()));
        }
        let q = dot(&v, &v);
        if v[2] <= 0.0 || (q + 1.0).abs() > cfg.tol * v[2] * v[2].max(1.0) {
            return Err(Error::Input(format!("not on the upper sheet: <p,p> = {q}, z = {}", v[2])));
        }
        Ok(HPoint(v))
    }

    /// Rescale a future timelike vector onto the sheet.
    pub fn normalize(v: Vec3) -> Result<Self> {
        let q = dot(&v, &v);
        if !(q < 0.0) {
            return Err(Error::Input("vector is not timelike".into()));
        }
        let s = (-q).sqrt();
        let s = if v[2] < 0.0 { -s } else { s };
        Ok(HPoint(scale(&v, 1.0 / s)))
    }

    pub fn coords(&self) -> Vec3 {
        self.0
    }
}

/// Unit spacelike vector, the polar of a geodesic line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polar(pub Vec3);

impl Polar {
    pub fn new(v: Vec3, cfg: &GeometryConfig) -> Result<Self> {
        let q = dot(&v, &v);
        let s = max_abs(&v).max(1.0);
        if !(q > 0.0) || (q - 1.0).abs() > cfg.tol * s * s {
            return Err(Error::Input(format!("not a unit spacelike vector: <e,e> = {q}")));
        }
        Ok(Polar(v))
    }

    /// Rescale a spacelike vector to unit length.
    pub fn normalize(v: Vec3) -> Result<Self> {
        let q = dot(&v, &v);
        if !(q > 0.0) {
            return Err(Error::Input("vector is not spacelike".into()));
        }
        Ok(Polar(scale(&v, 1.0 / q.sqrt())))
    }
}

/// Hyperbolic distance.
pub fn dist(p: &Vec3, q: &Vec3) -> f64 {
    let c = -dot(p, q);
    if c < 2.0 {
        // 4 sinh²(d/2) = <p−q, p−q>, stable for nearby points
        let w = sub(p, q);
        2.0 * (dot(&w, &w).max(0.0).sqrt() / 2.0).asinh()
    } else {
        c.acosh()
    }
}

/// Distance from a point to the line with unit polar `e`.
pub fn dist_to_line(p: &Vec3, e: &Vec3) -> f64 {
    dot(p, e).abs().asinh()
}

/// Element of O⁺(2,1), stored as a 3×3 matrix acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub m: [[f64; 3]; 3],
    #[serde(skip)]
    ops: u32,
}

impl Default for Isometry {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], ops: 0 };

    pub fn from_matrix(m: [[f64; 3]; 3]) -> Self {
        Isometry { m, ops: 0 }
    }

    #[inline]
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// Image of the origin.
    #[inline]
    pub fn center(&self) -> Vec3 {
        [self.m[0][2], self.m[1][2], self.m[2][2]]
    }

    /// `self · other` with the default re-orthonormalization period.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        self.compose_with(other, GeometryConfig::default().reortho_period)
    }

    pub fn compose_with(&self, other: &Isometry, period: u32) -> Isometry {
        let a = &self.m;
        let b = &other.m;
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        let mut out = Isometry { m, ops: self.ops + other.ops + 1 };
        if out.ops >= period {
            out.reorthonormalize();
        }
        out
    }

    /// `self · R_e` where `R_e` reflects in the line with polar `e`.
    pub fn then_reflect(&self, e: &Vec3) -> Isometry {
        // M(x − 2<x,e>e) = Mx − 2 (Me)(Je)ᵀx
        let me = self.apply(e);
        let je = [e[0], e[1], -e[2]];
        let mut m = self.m;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x -= 2.0 * me[i] * je[j];
            }
        }
        let mut out = Isometry { m, ops: self.ops + 1 };
        if out.ops >= GeometryConfig::default().reortho_period {
            out.reorthonormalize();
        }
        out
    }

    /// Inverse via `J Mᵀ J`.
    pub fn inverse(&self) -> Isometry {
        let m = &self.m;
        let s = [1.0, 1.0, -1.0];
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = s[i] * m[j][i] * s[j];
            }
        }
        Isometry { m: r, ops: self.ops }
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    fn column(&self, j: usize) -> Vec3 {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }

    fn set_column(&mut self, j: usize, v: &Vec3) {
        for i in 0..3 {
            self.m[i][j] = v[i];
        }
    }

    /// Gram–Schmidt on the columns against the Lorentz form.
    ///
    /// Left alone once entries pass `1e5`: the Lorentz products then cancel
    /// below machine precision, while the raw product keeps its relative accuracy.
    pub fn reorthonormalize(&mut self) {
        self.ops = 0;
        if self.m.iter().flatten().any(|x| x.abs() > 1e5) {
            return;
        }
        let mut t = self.column(2);
        t = scale(&t, 1.0 / (-dot(&t, &t)).sqrt());
        let mut x = self.column(0);
        x = lin(1.0, &x, dot(&x, &t), &t);
        x = scale(&x, 1.0 / dot(&x, &x).sqrt());
        let mut y = self.column(1);
        y = lin(1.0, &y, dot(&y, &t), &t);
        y = lin(1.0, &y, -dot(&y, &x), &x);
        y = scale(&y, 1.0 / dot(&y, &y).sqrt());
        self.set_column(0, &x);
        self.set_column(1, &y);
        self.set_column(2, &t);
        self.ops = 0;
    }

    /// Largest entry of `MᵀJM − J`, scaled by the squared entry size.
    pub fn lorentz_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        let mut size = 1.0f64;
        for i in 0..3 {
            for j in 0..3 {
                size = size.max(self.m[i][j].abs());
                let g = dot(&self.column(i), &self.column(j));
                let want = if i != j { 0.0 } else if i == 2 { -1.0 } else { 1.0 };
                worst = worst.max((g - want).abs());
            }
        }
        worst / (size * size)
    }
}

/// Reflection in the line with unit polar `e`.
pub fn reflection(e: &Vec3) -> Isometry {
    Isometry::IDENTITY.then_reflect(e)
}

/// Dynamical type of an isometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    Elliptic,
    Hyperbolic { translation: f64 },
    /// Inside the ambiguity band with no timelike fixed vector.
    Degenerate,
}

/// `cosh` of the translation length read off the trace.
fn cosh_translation(m: &Isometry) -> (f64, bool) {
    let preserving = m.det() > 0.0;
    let tr = m.trace();
    let x = if preserving { (tr - 1.0) / 2.0 } else { (tr + 1.0) / 2.0 };
    (x, preserving)
}

fn kernel(rows: [[f64; 3]; 3]) -> Option<Vec3> {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut best: Option<Vec3> = None;
    let mut best_n = 0.0;
    for (i, j) in pairs {
        let a = rows[i];
        let b = rows[j];
        let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let n = c.iter().map(|x| x * x).sum::<f64>();
        if n > best_n {
            best_n = n;
            best = Some(c);
        }
    }
    best
}

/// Classify `m` as elliptic, hyperbolic or ambiguous.
pub fn classify(m: &Isometry, cfg: &GeometryConfig) -> Classification {
    let (x, preserving) = cosh_translation(m);
    if x > 1.0 + cfg.band {
        return Classification::Hyperbolic { translation: x.acosh() };
    }
    let scale_m = m.m.iter().flatten().fold(1.0f64, |s, v| s.max(v.abs()));
    if preserving {
        let mut r = m.m;
        for (i, row) in r.iter_mut().enumerate() {
            row[i] -= 1.0;
        }
        let zero = r.iter().flatten().all(|v| v.abs() <= cfg.tol * scale_m);
        if zero {
            return Classification::Elliptic;
        }
        match kernel(r) {
            Some(v) if dot(&v, &v) < 0.0 => Classification::Elliptic,
            _ => Classification::Degenerate,
        }
    } else {
        let mut r = m.m;
        for (i, row) in r.iter_mut().enumerate() {
            row[i] += 1.0;
        }
        match kernel(r) {
            Some(v) if dot(&v, &v) > 0.0 && (x - 1.0).abs() <= cfg.band => Classification::Elliptic,
            _ => Classification::Degenerate,
        }
    }
}

/// Translation length `log ρ(M)` of a hyperbolic isometry.
pub fn translation_length(m: &Isometry, cfg: &GeometryConfig) -> Result<f64> {
    match classify(m, cfg) {
        Classification::Hyperbolic { translation } => Ok(translation),
        Classification::Elliptic => Err(Error::Domain("elliptic isometry: translation length 0, no axis".into())),
        Classification::Degenerate => Err(Error::Degenerate("spectral radius inside the ambiguity band".into())),
    }
}

/// Eigenvector of a hyperbolic `m` for its largest eigenvalue `λ = e^L`.
fn attracting(m: &Isometry, lambda: f64, preserving: bool) -> Vec3 {
    // any column of (M − μ₁)(M − μ₂) lies on the λ-eigenline
    let mu1 = if preserving { 1.0 } else { -1.0 };
    let mu2 = 1.0 / lambda;
    let mut a = m.m;
    let mut b = m.m;
    for i in 0..3 {
        a[i][i] -= mu1;
        b[i][i] -= mu2;
    }
    let p = Isometry::from_matrix(a).compose_with(&Isometry::from_matrix(b), u32::MAX);
    let mut best = [0.0; 3];
    let mut best_n = -1.0;
    for j in 0..3 {
        let c = p.column(j);
        let n = c.iter().map(|x| x * x).sum::<f64>();
        if n > best_n {
            best_n = n;
            best = c;
        }
    }
    if best[2] < 0.0 {
        best = scale(&best, -1.0);
    }
    let s = best[2];
    scale(&best, 1.0 / s)
}

/// Oriented, parametrized geodesic line `γ(t) = cosh t·base + sinh t·dir`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub base: Vec3,
    pub dir: Vec3,
    pub polar: Vec3,
}

impl Geodesic {
    /// Line through lightlike endpoints `minus → plus`, based at the foot of the origin.
    pub fn from_endpoints(minus: &Vec3, plus: &Vec3) -> Result<Self> {
        let q = -2.0 * dot(plus, minus);
        if !(q > 0.0) {
            return Err(Error::Degenerate("coincident ideal endpoints".into()));
        }
        let s = 1.0 / q.sqrt();
        let base = scale(&add(plus, minus), s);
        let dir = scale(&sub(plus, minus), s);
        Ok(Geodesic::from_frame(base, dir).recentered())
    }

    /// From a point on the line and a unit tangent at it.
    pub fn from_frame(base: Vec3, dir: Vec3) -> Self {
        let polar = cross(&base, &dir);
        let n = dot(&polar, &polar).sqrt();
        Geodesic { base, dir, polar: scale(&polar, 1.0 / n) }
    }

    /// Line through two distinct points, oriented from `p` to `q`.
    pub fn through(p: &Vec3, q: &Vec3) -> Result<Self> {
        let d = dist(p, q);
        if d <= 0.0 {
            return Err(Error::Degenerate("coincident points".into()));
        }
        let dir = scale(&lin(1.0, q, -d.cosh(), p), 1.0 / d.sinh());
        Ok(Geodesic::from_frame(*p, dir))
    }

    /// The line with polar `e`, based at the foot of the origin.
    pub fn from_polar(e: &Vec3) -> Self {
        let t = -dot(&HPoint::ORIGIN.0, e);
        let base = lin(1.0, &HPoint::ORIGIN.0, t, e);
        let base = scale(&base, 1.0 / (-dot(&base, &base)).sqrt());
        let dir = cross(e, &base);
        let dir = scale(&dir, 1.0 / dot(&dir, &dir).sqrt());
        Geodesic { base, dir, polar: *e }
    }

    #[inline]
    pub fn point(&self, t: f64) -> Vec3 {
        lin(t.cosh(), &self.base, t.sinh(), &self.dir)
    }

    /// Unit tangent at `γ(t)`.
    pub fn tangent(&self, t: f64) -> Vec3 {
        lin(t.sinh(), &self.base, t.cosh(), &self.dir)
    }

    /// Parameter of the orthogonal projection of `x` onto the line.
    pub fn param(&self, x: &Vec3) -> f64 {
        let plus = add(&self.base, &self.dir);
        let minus = sub(&self.base, &self.dir);
        let bp = -dot(x, &minus);
        let bm = -dot(x, &plus);
        0.5 * (bp / bm).ln()
    }

    /// Attracting ideal endpoint (lightlike, unnormalized).
    pub fn plus(&self) -> Vec3 {
        add(&self.base, &self.dir)
    }

    pub fn minus(&self) -> Vec3 {
        sub(&self.base, &self.dir)
    }

    pub fn transform(&self, m: &Isometry) -> Geodesic {
        Geodesic { base: m.apply(&self.base), dir: m.apply(&self.dir), polar: m.apply(&self.polar) }
    }

    /// Same line, re-based at the foot of the origin.
    pub fn recentered(&self) -> Geodesic {
        let t = self.param(&HPoint::ORIGIN.0);
        self.shifted(t)
    }

    /// Same line with parameter origin moved to `γ(t)`.
    pub fn shifted(&self, t: f64) -> Geodesic {
        Geodesic { base: self.point(t), dir: self.tangent(t), polar: self.polar }
    }

    /// Whether `other` is the same unoriented line.
    pub fn same_line(&self, other: &Geodesic, tol: f64) -> bool {
        let s = max_abs(&other.base).max(max_abs(&other.dir)).max(1.0);
        dot(&other.base, &self.polar).abs() <= tol * s && dot(&other.dir, &self.polar).abs() <= tol * s
    }
}

/// Axis of a hyperbolic isometry, oriented in the direction of translation.
pub fn axis(m: &Isometry, cfg: &GeometryConfig) -> Result<Geodesic> {
    let l = translation_length(m, cfg)?;
    let preserving = m.det() > 0.0;
    let lambda = l.exp();
    let plus = attracting(m, lambda, preserving);
    let minus = attracting(&m.inverse(), lambda, preserving);
    Geodesic::from_endpoints(&minus, &plus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boost(t: f64) -> Isometry {
        Isometry::from_matrix([[t.cosh(), 0.0, t.sinh()], [0.0, 1.0, 0.0], [t.sinh(), 0.0, t.cosh()]])
    }

    #[test]
    fn boost_has_expected_translation_and_axis() {
        let cfg = GeometryConfig::default();
        let m = boost(2.5);
        let l = translation_length(&m, &cfg).unwrap();
        assert!((l - 2.5).abs() < 1e-12);
        let ax = axis(&m, &cfg).unwrap();
        // the axis is the x-axis through the origin
        assert!(dist(&ax.base, &HPoint::ORIGIN.0) < 1e-9);
        let moved = m.apply(&ax.point(0.3));
        assert!(dist(&moved, &ax.point(2.8)) < 1e-9);
    }

    #[test]
    fn distance_matches_both_formulas() {
        let p = HPoint::ORIGIN.0;
        for &d in &[1e-8, 0.3, 1.0, 5.0, 20.0] {
            let q = boost(d).apply(&p);
            assert!((dist(&p, &q) - d).abs() < 1e-9 * d.max(1.0));
        }
    }

    #[test]
    fn rotation_is_elliptic() {
        let th: f64 = 0.7;
        let m = Isometry::from_matrix([[th.cos(), -th.sin(), 0.0], [th.sin(), th.cos(), 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(classify(&m, &GeometryConfig::default()), Classification::Elliptic);
        assert!(translation_length(&m, &GeometryConfig::default()).is_err());
    }

    #[test]
    fn point_validation_is_relative() {
        let cfg = GeometryConfig::default();
        let far = boost(11.0).apply(&HPoint::ORIGIN.0);
        assert!(HPoint::new(far, &cfg).is_ok());
        assert!(HPoint::new([0.0, 0.0, 2.0], &cfg).is_err());
    }
}
