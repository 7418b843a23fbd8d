//! The quasi-isometry between the Davis complex and H², checked numerically.
//!
//! Chamber centers satisfy `c·d_X − 4c ≤ d_H ≤ d·d_X + 2b`. The lower bound
//! comes from cutting a geodesic at the altitudes of the pentagons it crosses
//! and bounding each piece by its crossing type.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{ClassCensus, Metric};
use crate::coxeter::Word;
use crate::davis::Ball;
use crate::error::{Error, Result};
use crate::geometry::{dist, dot, Geodesic, HPoint, Isometry, Vec3};
use crate::tiling::{lengths, locate, pentagon};

/// Closed-form pentagon lengths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthTable {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub two_g: f64,
    pub lambda: f64,
}

pub fn length_table() -> LengthTable {
    let l = lengths();
    LengthTable { k: l.k, a: l.a, b: l.b, c: l.c, d: l.d, e: l.e, f: l.f, g: l.g, two_g: 2.0 * l.g, lambda: l.lambda }
}

/// The same lengths measured on the explicit pentagon.
pub fn measured_lengths() -> LengthTable {
    let p = pentagon();
    let o = HPoint::ORIGIN.0;
    let (m, v) = (&p.midpoints, &p.vertices);
    let a = dist(&m[0], &v[0]);
    let b = dist(&o, &m[0]);
    let c = dist(&m[0], &m[1]);
    let d = dist(&m[0], &m[2]);
    // right angle at v₀ between half of side 0 and all of side 1
    let e = dist(&m[0], &v[1]);
    let f = dist(&v[4], &v[1]);
    // legs of length 4a along sides 4 and 1, perpendicular to side 0 at its ends
    let leg = |from: &Vec3, toward: &Vec3| Geodesic::through(from, toward).expect("distinct vertices").point(4.0 * a);
    let two_g = dist(&leg(&v[4], &v[3]), &leg(&v[0], &v[1]));
    LengthTable { k: lengths().k, a, b, c, d, e, f, g: two_g / 2.0, two_g, lambda: d / c }
}

/// `cosh 2g` against `−sinh² 4a + cosh² 4a·cosh 2a`.
pub fn fenchel_defect() -> f64 {
    let l = lengths();
    let rhs = -(4.0 * l.a).sinh().powi(2) + (4.0 * l.a).cosh().powi(2) * (2.0 * l.a).cosh();
    ((2.0 * l.g).cosh() - rhs).abs()
}

/// `cosh 2a` against the golden ratio.
pub fn golden_defect() -> f64 {
    ((2.0 * lengths().a).cosh() - (1.0 + 5f64.sqrt()) / 2.0).abs()
}

/// Right angles, edge lengths and closure of the tiling over a ball of chambers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TilingCertificate {
    pub radius: u32,
    pub chambers: usize,
    pub right_angle_defect: f64,
    pub edge_defect: f64,
    pub dual_edge_defect: f64,
    pub closure_defect: f64,
}

impl TilingCertificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.right_angle_defect <= tol
            && self.edge_defect <= tol
            && self.dual_edge_defect <= tol
            && self.closure_defect <= tol
    }
}

fn matrix_defect(m: &Isometry, n: &Isometry) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..3 {
        for c in 0..3 {
            worst = worst.max((m.m[r][c] - n.m[r][c]).abs());
        }
    }
    worst
}

/// Double-double number `hi + lo`.
#[derive(Clone, Copy, Debug, Default)]
struct Dd(f64, f64);

impl Dd {
    fn add(self, o: Dd) -> Dd {
        let s = self.0 + o.0;
        let v = s - self.0;
        let e = (self.0 - (s - v)) + (o.0 - v) + self.1 + o.1;
        let hi = s + e;
        Dd(hi, e - (hi - s))
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        let hi = p + e;
        Dd(hi, e - (hi - p))
    }

    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    fn div(self, o: Dd) -> Dd {
        let q = self.0 / o.0;
        let r = self.add(o.mul(Dd(q, 0.0)).neg());
        Dd(q, 0.0).add(Dd(r.0 / o.0, 0.0))
    }
}

type DdVec = [Dd; 3];

fn dd_vec(v: &Vec3) -> DdVec {
    [Dd(v[0], 0.0), Dd(v[1], 0.0), Dd(v[2], 0.0)]
}

fn dd_dot(u: &DdVec, v: &DdVec) -> Dd {
    u[0].mul(v[0]).add(u[1].mul(v[1])).add(u[2].mul(v[2]).neg())
}

/// `g·v` for the chamber word `g`, one reflection at a time.
fn dd_image(word: &[u8], v: &Vec3) -> DdVec {
    let p = pentagon();
    let mut x = dd_vec(v);
    for &s in word.iter().rev() {
        let e = dd_vec(&p.polars[s as usize]);
        let k = dd_dot(&x, &e).div(dd_dot(&e, &e));
        let k = k.add(k).neg();
        for i in 0..3 {
            x[i] = x[i].add(k.mul(e[i]));
        }
    }
    x
}

// Distance from the Lorentz product, which is accurate here.
fn dd_dist(u: &DdVec, v: &DdVec) -> f64 {
    (-dd_dot(u, v).0).max(1.0).acosh()
}

/// Certificate over all chambers of `ball`.
///
/// Images are taken in double-double arithmetic along each chamber's word,
/// so the defects do not carry the cancellation of products of large vectors.
pub fn tiling_certificate(ball: &Ball) -> TilingCertificate {
    let p = pentagon();
    let l = lengths();
    let origin = [0.0, 0.0, 1.0];
    let centers: Vec<DdVec> = (0..ball.len()).into_par_iter().map(|i| dd_image(ball.word(i as u32).letters(), &origin)).collect();
    let per: Vec<(f64, f64, f64)> = (0..ball.len())
        .into_par_iter()
        .map(|i| {
            let word = ball.word(i as u32);
            let polars: Vec<DdVec> = p.polars.iter().map(|e| dd_image(word.letters(), e)).collect();
            let vertices: Vec<DdVec> = p.vertices.iter().map(|v| dd_image(word.letters(), v)).collect();
            let (mut ra, mut ed, mut du) = (0.0f64, 0.0f64, 0.0f64);
            for s in 0..5 {
                let t = (s + 1) % 5;
                ra = ra.max(dd_dot(&polars[s], &polars[t]).0.abs());
                ed = ed.max((dd_dist(&vertices[(s + 4) % 5], &vertices[s]) - 2.0 * l.a).abs());
                let j = ball.neighbors[i][s];
                if j != crate::davis::NONE {
                    du = du.max((dd_dist(&centers[i], &centers[j as usize]) - 2.0 * l.b).abs());
                }
            }
            (ra, ed, du)
        })
        .collect();
    let fold = |f: fn(&(f64, f64, f64)) -> f64| per.iter().map(f).fold(0.0, f64::max);
    let mut closure = 0.0f64;
    let mut product = Isometry::IDENTITY;
    for s in 0..5 {
        let t = (s + 1) % 5;
        let rot = p.reflections[s].compose(&p.reflections[t]);
        closure = closure.max(matrix_defect(&rot.compose(&rot), &Isometry::IDENTITY));
        product = product.compose(&rot);
    }
    closure = closure.max(matrix_defect(&product, &Isometry::IDENTITY));
    TilingCertificate {
        radius: ball.radius,
        chambers: ball.len(),
        right_angle_defect: fold(|x| x.0),
        edge_defect: fold(|x| x.1),
        dual_edge_defect: fold(|x| x.2),
        closure_defect: closure,
    }
}

/// Additive constants of the two-sided comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedConfig {
    pub eps_lower: f64,
    pub eps_upper: f64,
}

impl Default for TwoSidedConfig {
    fn default() -> Self {
        let l = lengths();
        TwoSidedConfig { eps_lower: 4.0 * l.c, eps_upper: 2.0 * l.b }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoSidedReport {
    pub radius: u32,
    pub chambers: usize,
    pub pairs: u64,
    pub config: TwoSidedConfig,
    pub lower_violations: u64,
    pub upper_violations: u64,
    /// Extremes of `d_H / d_X` over pairs with `d_X > 0`.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `(d_X, pairs, min d_H, max d_H)`.
    pub by_distance: Vec<(u32, u64, f64, f64)>,
}

impl TwoSidedReport {
    pub fn violations(&self) -> u64 {
        self.lower_violations + self.upper_violations
    }
}

#[derive(Clone)]
struct Buckets {
    count: Vec<u64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    lower: u64,
    upper: u64,
}

impl Buckets {
    fn new(n: usize) -> Self {
        Buckets { count: vec![0; n], lo: vec![f64::INFINITY; n], hi: vec![f64::NEG_INFINITY; n], lower: 0, upper: 0 }
    }

    fn merge(mut self, o: Buckets) -> Buckets {
        for k in 0..self.count.len() {
            self.count[k] += o.count[k];
            self.lo[k] = self.lo[k].min(o.lo[k]);
            self.hi[k] = self.hi[k].max(o.hi[k]);
        }
        self.lower += o.lower;
        self.upper += o.upper;
        self
    }
}

/// Every unordered pair of chambers in the ball, including each chamber with itself.
pub fn verify_two_sided(ball: &Ball, cfg: &TwoSidedConfig) -> TwoSidedReport {
    let l = lengths();
    let n = ball.len();
    let top = 2 * ball.radius as usize + 1;
    let tol = 1e-9;
    // compare -<p,q> = cosh d_H against per-distance thresholds
    let lo_cosh: Vec<f64> =
        (0..top).map(|k| ((l.c * k as f64 - cfg.eps_lower).max(0.0) - tol).max(0.0).cosh()).collect();
    let hi_cosh: Vec<f64> = (0..top).map(|k| (l.d * k as f64 + cfg.eps_upper + tol).cosh()).collect();
    let centers: Vec<Vec3> = (0..n).map(|i| ball.center(i as u32)).collect();
    let sizes: Vec<u8> = (0..n).map(|i| ball.inversions(i as u32).len() as u8).collect();
    let width = ball.radius as usize;
    let inv = ball.padded_inversions(width.max(1), u32::MAX);
    let w = width.max(1);
    let b = (0..n)
        .into_par_iter()
        .fold(
            || Buckets::new(top),
            |mut acc, i| {
                let pi = &centers[i];
                let ai = &inv[i * w..i * w + sizes[i] as usize];
                for j in i..n {
                    let bj = &inv[j * w..j * w + sizes[j] as usize];
                    let mut common = 0usize;
                    let (mut x, mut y) = (0, 0);
                    while x < ai.len() && y < bj.len() {
                        let (u, v) = (ai[x], bj[y]);
                        common += (u == v) as usize;
                        x += (u <= v) as usize;
                        y += (v <= u) as usize;
                    }
                    let k = ai.len() + bj.len() - 2 * common;
                    let pj = &centers[j];
                    let ch = (pi[2] * pj[2] - pi[0] * pj[0] - pi[1] * pj[1]).max(1.0);
                    acc.count[k] += 1;
                    if ch < acc.lo[k] {
                        acc.lo[k] = ch;
                    }
                    if ch > acc.hi[k] {
                        acc.hi[k] = ch;
                    }
                    if ch < lo_cosh[k] {
                        acc.lower += 1;
                    }
                    if ch > hi_cosh[k] {
                        acc.upper += 1;
                    }
                }
                acc
            },
        )
        .reduce(|| Buckets::new(top), Buckets::merge);
    let mut by_distance = Vec::new();
    let (mut min_ratio, mut max_ratio) = (f64::INFINITY, 0.0f64);
    for k in 0..top {
        if b.count[k] == 0 {
            continue;
        }
        let (lo, hi) = (b.lo[k].acosh(), b.hi[k].acosh());
        if k > 0 {
            min_ratio = min_ratio.min(lo / k as f64);
            max_ratio = max_ratio.max(hi / k as f64);
        }
        by_distance.push((k as u32, b.count[k], lo, hi));
    }
    TwoSidedReport {
        radius: ball.radius,
        chambers: n,
        pairs: b.count.iter().sum(),
        config: *cfg,
        lower_violations: b.lower,
        upper_violations: b.upper,
        min_ratio,
        max_ratio,
        by_distance,
    }
}

/// Extremes of `len_hyp / len_cube` over a cube census.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sharpness {
    pub n_max: f64,
    pub classes: usize,
    pub sup_ratio: f64,
    pub sup_witness: Word,
    pub inf_ratio: f64,
    pub inf_witness: Word,
    /// `sup / inf`, an estimate of `λ = d / c`.
    pub lambda_hat: f64,
}

pub fn sharpness(census: &ClassCensus) -> Result<Sharpness> {
    if census.metric != Metric::Cube {
        return Err(Error::Input("sharpness needs a census bounded in the cube metric".into()));
    }
    let mut sup = (f64::NEG_INFINITY, Word::default());
    let mut inf = (f64::INFINITY, Word::default());
    for c in &census.classes {
        let r = c.len_hyp / c.len_cube as f64;
        if r > sup.0 {
            sup = (r, c.rep.clone());
        }
        if r < inf.0 {
            inf = (r, c.rep.clone());
        }
    }
    if census.classes.is_empty() {
        return Err(Error::Input("empty census".into()));
    }
    Ok(Sharpness {
        n_max: census.bound,
        classes: census.classes.len(),
        sup_ratio: sup.0,
        sup_witness: sup.1,
        inf_ratio: inf.0,
        inf_witness: inf.1,
        lambda_hat: sup.0 / inf.0,
    })
}

/// Position of a side relative to the shared side `k`: `(side − k) mod 5`.
///
/// 1 and 4 are the adjacent sides, 2 and 3 the far ones.
pub fn relative_side(side: u8, shared: u8) -> u8 {
    (side + 5 - shared) % 5
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CrossingType {
    I,
    II,
    III,
    IV,
    V,
}

impl CrossingType {
    pub const ALL: [CrossingType; 5] = [CrossingType::I, CrossingType::II, CrossingType::III, CrossingType::IV, CrossingType::V];

    /// Infimal length between the two altitudes.
    pub fn infimum(self) -> f64 {
        let l = lengths();
        match self {
            CrossingType::I => l.a,
            CrossingType::II => 2.0 * l.a,
            CrossingType::III => l.d,
            CrossingType::IV => l.f / 2.0,
            CrossingType::V => l.c,
        }
    }
}

/// Type of a crossing entering `P` through relative side `x` and leaving `P′` through relative side `y`.
///
/// `P′` is the mirror image of `P` in the shared side, so `x` and `y` are
/// measured in mirrored frames; equal adjacent positions lie on one line and
/// cannot both be crossed.
pub fn crossing_type(x: u8, y: u8) -> Option<CrossingType> {
    use CrossingType::*;
    let t = match (x, y) {
        (1, 4) | (4, 1) => V,
        (2, 1) | (1, 2) | (3, 4) | (4, 3) => I,
        (2, 4) | (4, 2) | (3, 1) | (1, 3) => IV,
        (2, 2) | (3, 3) => II,
        (2, 3) | (3, 2) => III,
        _ => return None,
    };
    Some(t)
}

/// A geodesic passing through one chamber.
#[derive(Clone, Debug)]
pub struct Passage {
    pub word: Vec<u8>,
    pub iso: Isometry,
    pub entry: Option<u8>,
    pub exit: Option<u8>,
    pub t_in: f64,
    pub t_out: f64,
}

fn side_crossing(gamma: &Geodesic, e: &Vec3) -> Option<(f64, bool)> {
    let alpha = dot(&gamma.base, e);
    let beta = dot(&gamma.dir, e);
    if beta.abs() <= alpha.abs() {
        return None;
    }
    let t = (-alpha / beta).atanh();
    // <γ(t), e> increases through zero when leaving the half-plane
    let leaving = alpha * t.sinh() + beta * t.cosh() > 0.0;
    Some((t, leaving))
}

/// Chambers crossed by `γ` on `[t0, t1]`, in order.
///
/// Errors with `Degenerate` when the line passes within `1e-9` of a tiling vertex.
pub fn trace(gamma: &Geodesic, t0: f64, t1: f64) -> Result<Vec<Passage>> {
    let p = pentagon();
    let (w, m) = locate(&gamma.point(t0));
    let mut word = crate::coxeter::normal_form(&w);
    let mut iso = m;
    let mut entry = None;
    let mut t = t0;
    let mut out = Vec::new();
    for _ in 0..100_000 {
        let world: [Vec3; 5] = std::array::from_fn(|s| iso.apply(&p.polars[s]));
        let mut exits: Vec<(f64, u8)> = (0..5u8)
            .filter(|&s| Some(s) != entry)
            .filter_map(|s| {
                let (ts, leaving) = side_crossing(gamma, &world[s as usize])?;
                (leaving && ts > t - 1e-12).then_some((ts, s))
            })
            .collect();
        exits.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let Some(&(te, s)) = exits.first() else {
            return Err(Error::Invariant("line does not leave its chamber".into()));
        };
        if exits.len() > 1 && exits[1].0 - te < 1e-9 && te < t1 {
            return Err(Error::Degenerate("line passes through a tiling vertex".into()));
        }
        if te >= t1 {
            out.push(Passage { word, iso, entry, exit: None, t_in: t, t_out: t1 });
            return Ok(out);
        }
        out.push(Passage { word: word.clone(), iso, entry, exit: Some(s), t_in: t, t_out: te });
        crate::coxeter::push_letter(&mut word, s);
        iso = iso.then_reflect(&p.polars[s as usize]);
        entry = Some(s);
        t = te;
    }
    Err(Error::Budget { what: "trace exceeded 100000 chambers".into(), needed: 0 })
}

fn altitude_polar(iso: &Isometry, x: u8, y: u8) -> Vec3 {
    let p = pentagon();
    let local = match (y + 5 - x) % 5 {
        1 => p.vertex_axis(x as usize),
        4 => p.vertex_axis(y as usize),
        2 => p.side_axis(((x + 1) % 5) as usize),
        _ => p.side_axis(((y + 1) % 5) as usize),
    };
    iso.apply(&local)
}

fn crossing_param(gamma: &Geodesic, e: &Vec3) -> Option<f64> {
    let alpha = dot(&gamma.base, e);
    let beta = dot(&gamma.dir, e);
    (beta.abs() > alpha.abs()).then(|| (-alpha / beta).atanh())
}

/// Segment between the altitudes of two consecutive chambers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub chambers: (Word, Word),
    pub shared: u8,
    pub entry: u8,
    pub exit: u8,
    pub kind: CrossingType,
    /// Parameters of the two altitude crossings.
    pub span: (f64, f64),
    pub length: f64,
    pub perturbed: bool,
}

/// Crossing records along the interior of a traced geodesic.
pub fn crossings(gamma: &Geodesic, passages: &[Passage], perturbed: bool) -> Vec<CrossingRecord> {
    let mut out = Vec::new();
    for w in passages.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        let (Some(x), Some(k), Some(y)) = (p.entry, p.exit, q.exit) else { continue };
        let Some(kind) = crossing_type(relative_side(x, k), relative_side(y, k)) else { continue };
        let (Some(s0), Some(s1)) = (
            crossing_param(gamma, &altitude_polar(&p.iso, x, k)),
            crossing_param(gamma, &altitude_polar(&q.iso, k, y)),
        ) else {
            continue;
        };
        out.push(CrossingRecord {
            chambers: (Word::from_raw(p.word.clone()), Word::from_raw(q.word.clone())),
            shared: k,
            entry: x,
            exit: y,
            kind,
            span: (s0, s1),
            length: s1 - s0,
            perturbed,
        });
    }
    out
}

/// Trace `γ` on `[t0, t1]`, nudging it by `1e-7` when it meets a tiling vertex.
pub fn classify_line(gamma: &Geodesic, t0: f64, t1: f64) -> Result<Vec<CrossingRecord>> {
    let mut g = *gamma;
    for attempt in 0..8 {
        match trace(&g, t0, t1) {
            Ok(ps) => return Ok(crossings(&g, &ps, attempt > 0)),
            Err(Error::Degenerate(_)) => {
                let th = 1e-7 * (attempt + 1) as f64;
                let rot = Isometry::from_matrix([[th.cos(), -th.sin(), 0.0], [th.sin(), th.cos(), 0.0], [0.0, 0.0, 1.0]]);
                g = g.transform(&rot);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate("line stays on tiling vertices after perturbation".into()))
}

/// A random line through the disk of radius `r` about the origin.
pub fn random_line(rng: &mut ChaCha8Rng, r: f64) -> Geodesic {
    let rho = r * rng.gen::<f64>().sqrt();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let psi = rng.gen_range(0.0..std::f64::consts::TAU);
    let base = [rho.sinh() * phi.cos(), rho.sinh() * phi.sin(), rho.cosh()];
    // unit tangent orthogonal to base: rotate a horizontal unit vector into T_base
    let h = [psi.cos(), psi.sin(), 0.0];
    let lam = dot(&h, &base);
    let dir = crate::geometry::lin(1.0, &h, lam, &base);
    let n = dot(&dir, &dir).sqrt();
    Geodesic::from_frame(base, crate::geometry::scale(&dir, 1.0 / n))
}

/// Smallest observed length per crossing type.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeMinimum {
    pub kind: CrossingType,
    pub samples: u64,
    pub observed: f64,
    pub infimum: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClaimsReport {
    /// `min(3a, g) − 2c`.
    pub pair_margin: f64,
    /// `2e − 3c`.
    pub triple_margin: f64,
    pub seed: u64,
    pub lines: u64,
    pub minima: Vec<TypeMinimum>,
    /// Largest shortfall below an infimum over all sampled segments.
    pub worst_undercut: f64,
    /// Observed minimum of `len γᵢ + len γⱼ` for type I next to type II or IV.
    pub pair_observed: f64,
    pub pair_samples: u64,
    /// Observed minimum over I, III, I triples.
    pub triple_observed: f64,
    pub triple_samples: u64,
}

impl ClaimsReport {
    pub fn holds(&self, tol: f64) -> bool {
        let l = lengths();
        self.pair_margin > 0.0
            && self.triple_margin > 0.0
            && self.worst_undercut <= tol
            && self.pair_observed >= (3.0 * l.a).min(l.g) - tol
            && self.triple_observed >= 2.0 * l.e - tol
    }
}

/// Arithmetic of the length claims, stress-tested on random geodesics until every type has `per_type` samples.
pub fn claims_check(per_type: u64, seed: u64) -> Result<ClaimsReport> {
    let l = lengths();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = [0u64; 5];
    let mut best = [f64::INFINITY; 5];
    let mut undercut = 0.0f64;
    let (mut pair, mut pair_n) = (f64::INFINITY, 0u64);
    let (mut triple, mut triple_n) = (f64::INFINITY, 0u64);
    let mut lines = 0u64;
    while count.iter().any(|&c| c < per_type) {
        if lines > 10_000_000 {
            return Err(Error::Budget { what: "claims sampling did not reach every type".into(), needed: 0 });
        }
        lines += 1;
        let g = random_line(&mut rng, 1.5);
        let recs = classify_line(&g, -6.0, 6.0)?;
        for r in &recs {
            let i = r.kind as usize;
            count[i] += 1;
            best[i] = best[i].min(r.length);
            undercut = undercut.max(r.kind.infimum() - r.length);
        }
        for w in recs.windows(2) {
            let (x, y) = (w[0].kind, w[1].kind);
            let one = (x == CrossingType::I) as u8 + (y == CrossingType::I) as u8;
            let other = if x == CrossingType::I { y } else { x };
            if one == 1 && matches!(other, CrossingType::II | CrossingType::IV) {
                pair = pair.min(w[0].length + w[1].length);
                pair_n += 1;
            }
        }
        for w in recs.windows(3) {
            if w[0].kind == CrossingType::I && w[1].kind == CrossingType::III && w[2].kind == CrossingType::I {
                triple = triple.min(w[0].length + w[1].length + w[2].length);
                triple_n += 1;
            }
        }
    }
    let minima = CrossingType::ALL
        .iter()
        .map(|&k| TypeMinimum { kind: k, samples: count[k as usize], observed: best[k as usize], infimum: k.infimum() })
        .collect();
    Ok(ClaimsReport {
        pair_margin: (3.0 * l.a).min(l.g) - 2.0 * l.c,
        triple_margin: 2.0 * l.e - 3.0 * l.c,
        seed,
        lines,
        minima,
        worst_undercut: undercut,
        pair_observed: pair,
        pair_samples: pair_n,
        triple_observed: triple,
        triple_samples: triple_n,
    })
}

/// Raw `(x, y, length)` triples by relative entry and exit sides, for checking the type table.
pub fn raw_minima(lines: u64, seed: u64) -> Result<Vec<((u8, u8), u64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = std::collections::BTreeMap::new();
    for _ in 0..lines {
        let g = random_line(&mut rng, 1.5);
        let ps = trace(&g, -6.0, 6.0)?;
        for w in ps.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            let (Some(x), Some(k), Some(y)) = (p.entry, p.exit, q.exit) else { continue };
            let (Some(s0), Some(s1)) = (
                crossing_param(&g, &altitude_polar(&p.iso, x, k)),
                crossing_param(&g, &altitude_polar(&q.iso, k, y)),
            ) else {
                continue;
            };
            let e = table.entry((relative_side(x, k), relative_side(y, k))).or_insert((0u64, f64::INFINITY));
            e.0 += 1;
            e.1 = e.1.min(s1 - s0);
        }
    }
    Ok(table.into_iter().map(|(k, (n, m))| (k, n, m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davis::Budget;

    #[test]
    fn double_double_images_match_chamber_centers() {
        let ball = Ball::new(4, &Budget::default()).unwrap();
        for i in 0..ball.len() as u32 {
            let x = dd_image(ball.word(i).letters(), &[0.0, 0.0, 1.0]);
            let c = ball.center(i);
            for k in 0..3 {
                assert!((x[k].0 - c[k]).abs() < 1e-9 * (1.0 + c[k].abs()));
            }
        }
    }

    #[test]
    fn certificate_holds_at_radius_four() {
        let ball = Ball::new(4, &Budget::default()).unwrap();
        let cert = tiling_certificate(&ball);
        assert!(cert.holds(1e-12), "{cert:?}");
    }
}
