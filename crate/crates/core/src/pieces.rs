//! Loose pieces between axes, and between axes and walls.
//!
//! For a line `L′` the set `{t : d(γ(t), L′) ≤ J}` along an axis `γ` is a
//! single interval with a closed form, so pieces are computed exactly. The
//! maximal piece between two classes is found by enumerating every lift of
//! the second axis that comes within `J` of a fundamental domain of the first.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{canonical, ClassCensus, ConjClass};
use crate::coxeter::{self, central_letter, inverse, isometry_of, multiply, pack, push_letter, Word};
use crate::davis::periodic_gallery;
use crate::error::{Error, Result};
use crate::geometry::{axis, dist, dot, Geodesic, GeometryConfig, Isometry, Vec3};
use crate::tiling::{lengths, locate, pentagon};

/// Hull thickness of combinatorial axes in the Davis complex.
pub const HULL_THICKNESS: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceConfig {
    /// Looseness for cone pieces.
    pub j: f64,
    /// Looseness for wall pieces.
    pub kappa: f64,
    pub tol: f64,
}

impl Default for PieceConfig {
    fn default() -> Self {
        let two_delta = 2.0 * lengths().delta;
        PieceConfig { j: two_delta, kappa: two_delta, tol: 1e-9 }
    }
}

/// Looseness for cubical pieces, three times the hull thickness.
pub fn j_cubical() -> u32 {
    3 * HULL_THICKNESS
}

/// Axis of a hyperbolic class, parametrized from the foot of the origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxisLine {
    pub geodesic: Geodesic,
    pub carrier: Word,
    pub period: f64,
}

impl AxisLine {
    pub fn of(w: &Word) -> Result<Self> {
        let m = isometry_of(w.letters());
        let cfg = GeometryConfig::default();
        let period = crate::geometry::translation_length(&m, &cfg)?;
        let geodesic = axis(&m, &cfg)?;
        Ok(AxisLine { geodesic, carrier: w.clone(), period })
    }
}

/// Sub-interval of `[t₀, t₁]` on a line, with nearest-point data on the other line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub t0: f64,
    pub t1: f64,
    /// Parameters, on the other line, of the feet of `γ(t₀)` and `γ(t₁)`.
    pub companion: (f64, f64),
    /// Minimum distance within `tol` of the looseness: the interval is nearly a point.
    pub boundary: bool,
}

impl Piece {
    pub fn diameter(&self) -> f64 {
        self.t1 - self.t0
    }
}

/// `{t : d(γ(t), L′) ≤ j}` for the line `L′` with polar `e`.
///
/// Errors on lines sharing an ideal endpoint (`Degenerate`) or coinciding with `γ` (`Excluded`).
pub fn near_interval(gamma: &Geodesic, e: &Vec3, j: f64, tol: f64) -> Result<Option<(f64, f64, bool)>> {
    let alpha = dot(&gamma.base, e);
    let beta = dot(&gamma.dir, e);
    let size = alpha.abs().max(beta.abs());
    if size <= tol {
        return Err(Error::Excluded("the lines coincide".into()));
    }
    let s = j.sinh();
    let gap = alpha.abs() - beta.abs();
    if gap.abs() <= tol * size.max(1.0) {
        return Err(Error::Degenerate("asymptotic lines".into()));
    }
    if gap < 0.0 {
        // crossing: f(t) = ±R sinh(t − t*)
        let r = (beta * beta - alpha * alpha).sqrt();
        let tc = (-alpha / beta).atanh();
        let w = (s / r).asinh();
        Ok(Some((tc - w, tc + w, false)))
    } else {
        // disjoint: f(t) = ±R cosh(t − t*)
        let r = (alpha * alpha - beta * beta).sqrt();
        if r > s * (1.0 + tol) {
            return Ok(None);
        }
        let boundary = (r - s).abs() <= tol * s;
        let tc = (-beta / alpha).atanh();
        let w = (s / r).max(1.0).acosh();
        Ok(Some((tc - w, tc + w, boundary)))
    }
}

/// Maximal `j`-loose piece of `gamma` relative to `other`.
pub fn cone_piece(gamma: &Geodesic, other: &Geodesic, j: f64, tol: f64) -> Result<Option<Piece>> {
    let Some((t0, t1, boundary)) = near_interval(gamma, &other.polar, j, tol)? else {
        return Ok(None);
    };
    let c0 = other.param(&gamma.point(t0));
    let c1 = other.param(&gamma.point(t1));
    Ok(Some(Piece { t0, t1, companion: (c0, c1), boundary }))
}

/// Maximal `kappa`-loose piece of `gamma` relative to the wall line with polar `e`.
///
/// An axis lying on the wall line is a degenerate input.
pub fn wall_piece(gamma: &Geodesic, e: &Vec3, kappa: f64, tol: f64) -> Result<Option<Piece>> {
    cone_piece(gamma, &Geodesic::from_polar(e), kappa, tol).map_err(|err| match err {
        Error::Excluded(_) => Error::Degenerate("the axis lies on the wall".into()),
        other => other,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Cone,
    Wall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserved,
    Reversed,
}

/// Overlap of a piece `s ⊂ A` with `h⁻¹` of its companion, and whether `h` preserves the orientation.
///
/// `translate` must be `h·A` carrying the parametrization `t ↦ h·A(t)`.
pub fn overlap_orientation(piece: &Piece) -> (f64, Orientation) {
    let (c0, c1) = piece.companion;
    let lo = c0.min(c1).max(piece.t0);
    let hi = c0.max(c1).min(piece.t1);
    let orient = if c0 <= c1 { Orientation::Preserved } else { Orientation::Reversed };
    ((hi - lo).max(0.0), orient)
}

/// A maximal piece with its provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoosePieceReport {
    pub kind: PieceKind,
    pub j: f64,
    pub pair: (Word, Word),
    /// Translate `h` with the piece taken between `A` and `h·A′`.
    pub translate: Word,
    pub segment: (f64, f64),
    pub segment_points: [Vec3; 2],
    pub companion: (f64, f64),
    pub diameter: f64,
    pub overlap: Option<f64>,
    pub orientation: Option<Orientation>,
    pub flags: Vec<String>,
}

fn report(
    a: &AxisLine,
    b_rep: &Word,
    h: Word,
    piece: &Piece,
    same_axis: bool,
    j: f64,
    tol: f64,
) -> LoosePieceReport {
    let mut flags = Vec::new();
    if piece.boundary {
        flags.push("boundary-ambiguous".to_string());
    }
    let (overlap, orientation) = if same_axis && piece.diameter() > 2.0 * j + tol {
        let (o, r) = overlap_orientation(piece);
        (Some(o), Some(r))
    } else {
        (None, None)
    };
    LoosePieceReport {
        kind: PieceKind::Cone,
        j,
        pair: (a.carrier.clone(), b_rep.clone()),
        translate: h,
        segment: (piece.t0, piece.t1),
        segment_points: [a.geodesic.point(piece.t0), a.geodesic.point(piece.t1)],
        companion: piece.companion,
        diameter: piece.diameter(),
        overlap,
        orientation,
        flags,
    }
}

/// Largest piece between `axis(g)` and translates `h·axis(g′)` for `h` in a ball of chambers.
pub fn max_piece_census(g: &ConjClass, g2: &ConjClass, j: f64, window_radius: u32) -> Result<Option<LoosePieceReport>> {
    if window_radius > 10 {
        return Err(Error::Budget { what: format!("translate window of radius {window_radius}"), needed: 10 });
    }
    let tol = PieceConfig::default().tol;
    let a = AxisLine::of(&g.rep)?;
    let b = AxisLine::of(&g2.rep)?;
    let same = g.rep == g2.rep;
    let mut best: Option<(f64, Word, Piece)> = None;
    coxeter::walk_tree(window_radius as usize, |w, m| {
        let line = b.geodesic.transform(m);
        if line.same_line(&a.geodesic, 1e-9) {
            if !same {
                best = Some((f64::INFINITY, Word::from_raw(w.to_vec()), Piece {
                    t0: f64::NEG_INFINITY,
                    t1: f64::INFINITY,
                    companion: (f64::NEG_INFINITY, f64::INFINITY),
                    boundary: false,
                }));
            }
            return true;
        }
        if let Ok(Some(p)) = cone_piece(&a.geodesic, &line, j, tol) {
            if best.as_ref().map_or(true, |(d, _, _)| p.diameter() > *d) {
                best = Some((p.diameter(), Word::from_raw(w.to_vec()), p));
            }
        }
        true
    });
    Ok(best.map(|(_, h, p)| report(&a, &g2.rep, h, &p, same, j, tol)))
}

/// Largest overlap of a reversing self-piece, over classes and translates in a ball.
///
/// With `infinite_order_only`, translates of finite order are skipped.
pub fn reversing_overlap_cap(classes: &[ConjClass], window_radius: u32, j: f64, infinite_order_only: bool) -> Result<f64> {
    let tol = PieceConfig::default().tol;
    let mut translates: Vec<(Vec<u8>, Isometry)> = Vec::new();
    coxeter::walk_tree(window_radius as usize, |w, m| {
        let finite = w.is_empty() || {
            let c = canonical(w);
            c.len() <= 2 && (c.len() < 2 || coxeter::commute(c[0], c[1]))
        };
        if !(infinite_order_only && finite) {
            translates.push((w.to_vec(), *m));
        }
        true
    });
    let caps: Vec<f64> = classes
        .par_iter()
        .map(|c| {
            let Ok(a) = AxisLine::of(&c.rep) else { return 0.0 };
            let mut cap = 0.0f64;
            for (_, m) in &translates {
                let line = a.geodesic.transform(m);
                if line.same_line(&a.geodesic, 1e-9) {
                    continue;
                }
                if let Ok(Some(p)) = cone_piece(&a.geodesic, &line, j, tol) {
                    if p.diameter() > 2.0 * j + tol {
                        let (o, r) = overlap_orientation(&p);
                        if r == Orientation::Reversed {
                            cap = cap.max(o);
                        }
                    }
                }
            }
            cap
        })
        .collect();
    Ok(caps.into_iter().fold(0.0, f64::max))
}

/// A chamber near an axis.
#[derive(Clone, Debug)]
pub struct NearChamber {
    pub word: Vec<u8>,
    pub iso: Isometry,
    /// Distance from the chamber center to the fundamental segment.
    pub dist: f64,
}

/// An axis with the chambers around one fundamental domain `A[0, L]`.
#[derive(Clone, Debug)]
pub struct AxisData {
    pub class: ConjClass,
    pub axis: AxisLine,
    /// Chambers whose centers lie within `reach` of the fundamental segment.
    pub region: Vec<NearChamber>,
    pub reach: f64,
}

/// Distance from `x` to the segment `γ[0, l]`.
pub fn dist_to_segment(gamma: &Geodesic, l: f64, x: &Vec3) -> f64 {
    let t = gamma.param(x).clamp(0.0, l);
    dist(x, &gamma.point(t))
}

/// Chambers whose centers lie within `reach` of `γ[0, l]`, found by a gallery search.
pub fn chambers_near_segment(gamma: &Geodesic, l: f64, reach: f64, max_chambers: usize) -> Result<Vec<NearChamber>> {
    let rv = lengths().circumradius;
    let pent = pentagon();
    let (w0, m0) = locate(&gamma.point(l / 2.0));
    let w0 = coxeter::normal_form(&w0);
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(w0.clone());
    queue.push_back((w0, m0));
    while let Some((w, m)) = queue.pop_front() {
        let d = dist_to_segment(gamma, l, &m.center());
        if d <= reach {
            out.push(NearChamber { word: w.clone(), iso: m, dist: d });
            if out.len() > max_chambers {
                return Err(Error::Budget { what: format!("more than {max_chambers} chambers near an axis"), needed: 0 });
            }
        }
        for s in 0..5u8 {
            let mut t = w.clone();
            push_letter(&mut t, s);
            if seen.contains(&t) {
                continue;
            }
            let mt = m.then_reflect(&pent.polars[s as usize]);
            if dist_to_segment(gamma, l, &mt.center()) <= reach + rv {
                seen.insert(t.clone());
                queue.push_back((t, mt));
            }
        }
    }
    out.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
    Ok(out)
}

impl AxisData {
    pub fn new(class: &ConjClass, reach: f64) -> Result<Self> {
        let axis = AxisLine::of(&class.rep)?;
        let region = chambers_near_segment(&axis.geodesic, axis.period, reach, 200_000)?;
        Ok(AxisData { class: class.clone(), axis, region, reach })
    }

    /// Chambers whose centers lie within `r` of the fundamental segment.
    pub fn within(&self, r: f64) -> impl Iterator<Item = &NearChamber> {
        self.region.iter().filter(move |c| c.dist <= r + 1e-12)
    }
}

/// Largest cone piece between the axis of `a` and any lift of the axis of `b`.
///
/// A lift `h·B` within `j` of `A(t)`, `0 ≤ t ≤ L`, passes through a chamber
/// `u` with center within `j + r_v` of `A[0, L]`; translating by a power of
/// `b` puts `u⁻¹·h·B`'s point in a chamber `f` meeting `B[0, L′]`, so
/// `h·B = u·f⁻¹·B` and the pairs `(u, f)` enumerate every such lift.
pub fn max_cone_piece(a: &AxisData, b: &AxisData, cfg: &PieceConfig) -> Result<Option<LoosePieceReport>> {
    let rv = lengths().circumradius;
    let need = cfg.j + rv;
    if a.reach + 1e-12 < need || b.reach + 1e-12 < rv + 1e-9 {
        return Err(Error::Input("axis neighbourhoods too small for this looseness".into()));
    }
    let same = a.class.rep == b.class.rep;
    let frames: Vec<(&NearChamber, Geodesic)> = b
        .within(rv + 1e-9)
        .map(|f| (f, b.axis.geodesic.transform(&f.iso.inverse())))
        .collect();
    let mut best: Option<(f64, Vec<u8>, Vec<u8>, Piece)> = None;
    let mut coincident: Option<(Vec<u8>, Vec<u8>)> = None;
    for u in a.within(need) {
        for (f, local) in &frames {
            let line = local.transform(&u.iso);
            if line.same_line(&a.axis.geodesic, 1e-9) {
                if !same && coincident.is_none() {
                    coincident = Some((u.word.clone(), f.word.clone()));
                }
                continue;
            }
            let p = match cone_piece(&a.axis.geodesic, &line, cfg.j, cfg.tol) {
                Ok(Some(p)) => p,
                Ok(None) => continue,
                Err(Error::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            };
            let better = match &best {
                None => true,
                Some((d, bu, bf, _)) => {
                    p.diameter() > d + 1e-12
                        || ((p.diameter() - d).abs() <= 1e-12 && (&u.word, &f.word) < (bu, bf))
                }
            };
            if better {
                best = Some((p.diameter(), u.word.clone(), f.word.clone(), p));
            }
        }
    }
    if let Some((u, f)) = coincident {
        let h = multiply(&u, &inverse(&f));
        let mut r = LoosePieceReport {
            kind: PieceKind::Cone,
            j: cfg.j,
            pair: (a.class.rep.clone(), b.class.rep.clone()),
            translate: Word::from_raw(h),
            segment: (f64::NEG_INFINITY, f64::INFINITY),
            segment_points: [a.axis.geodesic.point(0.0), a.axis.geodesic.point(a.axis.period)],
            companion: (f64::NEG_INFINITY, f64::INFINITY),
            diameter: f64::INFINITY,
            overlap: None,
            orientation: None,
            flags: vec!["coincident-axes".into()],
        };
        r.flags.sort();
        return Ok(Some(r));
    }
    Ok(best.map(|(_, u, f, p)| {
        let h = Word::from_raw(multiply(&u, &inverse(&f)));
        report(&a.axis, &b.class.rep, h, &p, same, cfg.j, cfg.tol)
    }))
}

/// A wall piece with the wall it was measured against.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WallPieceReport {
    pub kind: PieceKind,
    pub kappa: f64,
    pub class: Word,
    /// Reflection in the wall, in normal form.
    pub wall: Word,
    pub segment: (f64, f64),
    pub diameter: f64,
    pub flags: Vec<String>,
}

/// Largest `kappa`-loose wall piece along the axis of `a`, over every wall of the tiling.
pub fn max_wall_piece(a: &AxisData, kappa: f64, tol: f64) -> Result<Option<WallPieceReport>> {
    let rv = lengths().circumradius;
    if a.reach + 1e-12 < kappa + rv {
        return Err(Error::Input("axis neighbourhood too small for this looseness".into()));
    }
    let pent = pentagon();
    let mut best: Option<WallPieceReport> = None;
    let mut seen: HashSet<u128> = HashSet::new();
    for u in a.within(kappa + rv) {
        for s in 0..5u8 {
            let wall = crate::davis::wall_of(&u.word, s);
            if wall.len() > 42 || !seen.insert(pack(&wall)) {
                continue;
            }
            let e = u.iso.apply(&pent.polars[s as usize]);
            let line = Geodesic::from_polar(&e);
            if line.same_line(&a.axis.geodesic, 1e-9) {
                return Ok(Some(WallPieceReport {
                    kind: PieceKind::Wall,
                    kappa,
                    class: a.class.rep.clone(),
                    wall: Word::from_raw(wall),
                    segment: (f64::NEG_INFINITY, f64::INFINITY),
                    diameter: f64::INFINITY,
                    flags: vec!["axis-on-wall".into()],
                }));
            }
            let p = match near_interval(&a.axis.geodesic, &e, kappa, tol) {
                Ok(Some((t0, t1, boundary))) => (t0, t1, boundary),
                Ok(None) | Err(Error::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            };
            let d = p.1 - p.0;
            if best.as_ref().map_or(true, |b| d > b.diameter + 1e-12) {
                best = Some(WallPieceReport {
                    kind: PieceKind::Wall,
                    kappa,
                    class: a.class.rep.clone(),
                    wall: Word::from_raw(wall),
                    segment: (p.0, p.1),
                    diameter: d,
                    flags: if p.2 { vec!["boundary-ambiguous".into()] } else { Vec::new() },
                });
            }
        }
    }
    Ok(best)
}

/// Empirical survival `S(x) = P(D ≥ x)` on a grid.
pub fn survival_curve(diameters: &[f64], step: f64) -> Vec<(f64, f64)> {
    let mut d: Vec<f64> = diameters.to_vec();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = d.len() as f64;
    let top = d.last().copied().unwrap_or(0.0);
    let mut out = Vec::new();
    let mut x = 0.0;
    while x <= top + step {
        let below = d.partition_point(|&v| v < x);
        out.push((x, (d.len() - below) as f64 / n));
        x += step;
    }
    out
}

/// Tail of a piece-size distribution and its log-linear decay rate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayReport {
    pub pairs: usize,
    pub survival: Vec<(f64, f64)>,
    /// Range of `x` used for the fit.
    pub window: (f64, f64),
    pub slope: f64,
    pub monotone: bool,
    pub diameters: Vec<f64>,
}

/// Upper survival probability bounding the straight section.
pub const DECAY_UPPER: f64 = 0.5;
/// Minimum surviving samples for a grid point to enter the fit.
pub const DECAY_MIN_SURVIVORS: f64 = 20.0;

/// Largest cone piece of `census.classes[i]` against `census.classes[j]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairPiece {
    pub pair: (usize, usize),
    pub classes: (Word, Word),
    pub report: Option<LoosePieceReport>,
}

impl PairPiece {
    pub fn diameter(&self) -> f64 {
        self.report.as_ref().map_or(0.0, |r| r.diameter)
    }
}

/// Pairs of census classes drawn uniformly with replacement, with their largest cone pieces.
pub fn sample_pairs(census: &ClassCensus, pairs: usize, seed: u64, cfg: &PieceConfig) -> Result<Vec<PairPiece>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = &census.classes;
    if classes.is_empty() {
        return Err(Error::Input("empty census".into()));
    }
    let picks: Vec<(usize, usize)> = (0..pairs)
        .map(|_| {
            let i = rng.gen_range(0..classes.len());
            let j = rng.gen_range(0..classes.len());
            (i, j)
        })
        .collect();
    let reach = cfg.j + lengths().circumradius + 1e-9;
    let mut needed: Vec<usize> = picks.iter().flat_map(|&(i, j)| [i, j]).collect();
    needed.sort_unstable();
    needed.dedup();
    let data: Vec<AxisData> =
        needed.par_iter().map(|&i| AxisData::new(&classes[i], reach)).collect::<Result<Vec<_>>>()?;
    let pos = |i: usize| needed.binary_search(&i).unwrap();
    picks
        .par_iter()
        .map(|&(i, j)| {
            Ok(PairPiece {
                pair: (i, j),
                classes: (classes[i].rep.clone(), classes[j].rep.clone()),
                report: max_cone_piece(&data[pos(i)], &data[pos(j)], cfg)?,
            })
        })
        .collect()
}

/// Sample pairs of classes and fit the decay of the largest cone piece of each.
pub fn piece_decay(census: &ClassCensus, pairs: usize, seed: u64, cfg: &PieceConfig) -> Result<DecayReport> {
    let diameters: Vec<f64> = sample_pairs(census, pairs, seed, cfg)?.iter().map(PairPiece::diameter).collect();
    decay_of(diameters)
}

/// Survival curve and straight-section slope of a sample of piece diameters.
pub fn decay_of(diameters: Vec<f64>) -> Result<DecayReport> {
    let pairs = diameters.len();
    let finite: Vec<f64> = diameters.iter().copied().filter(|d| d.is_finite()).collect();
    let survival = survival_curve(&finite, 0.25);
    let n = finite.len() as f64;
    let section: Vec<(f64, f64)> = survival
        .iter()
        .filter(|(_, s)| *s <= DECAY_UPPER && s * n >= DECAY_MIN_SURVIVORS)
        .map(|&(x, s)| (x, s.ln()))
        .collect();
    let (slope, window) = if section.len() >= 3 {
        let k = section.len() as f64;
        let mx = section.iter().map(|p| p.0).sum::<f64>() / k;
        let my = section.iter().map(|p| p.1).sum::<f64>() / k;
        let sxx: f64 = section.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = section.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxy / sxx, (section[0].0, section[section.len() - 1].0))
    } else {
        (f64::NAN, (f64::NAN, f64::NAN))
    };
    let monotone = survival.windows(2).all(|w| w[1].1 <= w[0].1)
        && section.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(DecayReport { pairs, survival, window, slope, monotone, diameters })
}

/// Chambers of the combinatorial axis of `rep` over `2·periods + 1` periods, centered at the identity chamber.
pub fn combinatorial_axis(rep: &Word, periods: usize) -> Vec<Word> {
    let mut w = rep.letters().to_vec();
    if let Some(x) = central_letter(&w) {
        w.retain(|&y| y != x);
    }
    let start = inverse(&crate::conjugacy::power(&w, periods as u32));
    periodic_gallery(&w, &start, (2 * periods + 1) * w.len() + 1)
}

/// Largest cubical `j`-loose piece between combinatorial axes of `g` and translates `h·axis(g′)`, `h` in a ball.
///
/// Diameters are gallery lengths within the window.
pub fn cubical_piece_window(g: &ConjClass, g2: &ConjClass, j: u32, window_radius: u32, periods: usize) -> Result<u32> {
    if window_radius > 6 {
        return Err(Error::Budget { what: format!("cubical translate window of radius {window_radius}"), needed: 6 });
    }
    let a = combinatorial_axis(&g.rep, periods);
    let b = combinatorial_axis(&g2.rep, periods);
    let geo_a = AxisLine::of(&g.rep)?.geodesic;
    let geo_b = AxisLine::of(&g2.rep)?.geodesic;
    let a_inv: Vec<Vec<u8>> = a.iter().map(|x| inverse(x.letters())).collect();
    let mut translates: Vec<(Vec<u8>, Isometry)> = Vec::new();
    coxeter::walk_tree(window_radius as usize, |w, m| {
        translates.push((w.to_vec(), *m));
        true
    });
    let best = translates
        .par_iter()
        .map(|(h, m)| {
            if geo_b.transform(m).same_line(&geo_a, 1e-9) {
                return 0u32;
            }
            let hb: Vec<Vec<u8>> = b.iter().map(|x| multiply(h, x.letters())).collect();
            let mut first: Option<usize> = None;
            let mut last = 0usize;
            for (i, ai) in a_inv.iter().enumerate() {
                let near = hb.iter().any(|x| {
                    let mut t = ai.clone();
                    for &s in x {
                        push_letter(&mut t, s);
                    }
                    t.len() as u32 <= j
                });
                if near {
                    first.get_or_insert(i);
                    last = i;
                }
            }
            first.map_or(0, |f| (last - f) as u32)
        })
        .max()
        .unwrap_or(0);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::conj_min;

    fn class(s: &str) -> ConjClass {
        conj_min(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn perpendicular_crossing_gives_two_j() {
        let g = Geodesic::from_frame([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
        let h = Geodesic::from_frame([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]);
        let p = cone_piece(&g, &h, 1.0, 1e-12).unwrap().unwrap();
        assert!((p.t0 + 1.0).abs() < 1e-12 && (p.t1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oblique_crossing_matches_closed_form() {
        let th: f64 = 0.4;
        let g = Geodesic::from_frame([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
        let h = Geodesic::from_frame([0.0, 0.0, 1.0], [th.cos(), th.sin(), 0.0]);
        let j = 1.3;
        let p = cone_piece(&g, &h, j, 1e-12).unwrap().unwrap();
        let want = 2.0 * (j.sinh() / th.sin()).asinh();
        assert!((p.diameter() - want).abs() < 1e-10);
    }

    #[test]
    fn identical_lines_are_excluded() {
        let g = Geodesic::from_frame([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
        assert!(matches!(cone_piece(&g, &g, 1.0, 1e-9), Err(Error::Excluded(_))));
    }

    #[test]
    fn axis_on_wall_is_degenerate() {
        let a = AxisLine::of(&"02".parse().unwrap()).unwrap();
        let e = pentagon().polars[1];
        assert!(matches!(wall_piece(&a.geodesic, &e, 0.5, 1e-9), Err(Error::Degenerate(_))));
    }

    #[test]
    fn complete_enumeration_matches_wide_ball_scan() {
        let cfg = PieceConfig::default();
        let reach = cfg.j + lengths().circumradius + 1e-9;
        for (x, y) in [("02", "02"), ("02", "0213"), ("01234", "024")] {
            let (cx, cy) = (class(x), class(y));
            let a = AxisData::new(&cx, reach).unwrap();
            let b = AxisData::new(&cy, reach).unwrap();
            let full = max_cone_piece(&a, &b, &cfg).unwrap().map_or(0.0, |r| r.diameter);
            let scan = max_piece_census(&cx, &cy, cfg.j, 8).unwrap().map_or(0.0, |r| r.diameter);
            assert!((full - scan).abs() < 1e-9, "{x} {y}: {full} vs {scan}");
        }
    }
}
