//! Small-cancellation verdicts for quotients by finitely many conjugacy classes.
//!
//! A relator is the quasi-circle of a hyperbolic class `g`: its axis modulo
//! `⟨g⟩`. Cone pieces between relators and wall pieces are measured in H²
//! and compared with `α` times the hyperbolic systole.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{primitive_root, ClassCensus, ConjClass};
use crate::coxeter::{pack, Word};
use crate::davis::wall_of;
use crate::error::{Error, Result};
use crate::geometry::{dot, Geodesic};
use crate::pieces::{cubical_piece_window, j_cubical, max_cone_piece, max_wall_piece, near_interval, AxisData, PieceConfig};
use crate::tiling::{lengths, pentagon};

/// Thresholds reported alongside every verdict.
pub const THRESHOLDS: [(&str, f64); 3] = [("1/20", 1.0 / 20.0), ("1/14", 1.0 / 14.0), ("1/12", 1.0 / 12.0)];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Presentation {
    pub relators: Vec<ConjClass>,
    pub alpha: f64,
}

impl Presentation {
    /// Rejects empty, elliptic or repeated relators and `α ∉ (0, 1)`.
    pub fn new(relators: Vec<ConjClass>, alpha: f64) -> Result<Self> {
        if relators.is_empty() {
            return Err(Error::Input("a presentation needs at least one relator".into()));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Input(format!("alpha {alpha} outside (0, 1)")));
        }
        if let Some(c) = relators.iter().find(|c| !c.is_hyperbolic()) {
            return Err(Error::Domain(format!("relator {} is elliptic", c.rep)));
        }
        let mut seen = HashSet::new();
        for c in &relators {
            if !seen.insert(c.rep.clone()) {
                return Err(Error::Degenerate(format!("relator class {} appears twice", c.rep)));
            }
        }
        Ok(Presentation { relators, alpha })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Systole {
    pub cube: f64,
    pub hyp: f64,
    /// Primitive root of the class and the power it is raised to.
    pub root: Word,
    pub power: u32,
    pub non_primitive: bool,
}

pub fn systole(c: &ConjClass) -> Result<Systole> {
    if !c.is_hyperbolic() {
        return Err(Error::Domain(format!("class {} is elliptic and has no systole", c.rep)));
    }
    match primitive_root(c)? {
        Some((root, n)) if n > 1 => {
            Ok(Systole { cube: root.len_cube as f64, hyp: root.len_hyp, root: root.rep, power: n, non_primitive: true })
        }
        _ => Ok(Systole { cube: c.len_cube as f64, hyp: c.len_hyp, root: c.rep.clone(), power: 1, non_primitive: false }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Satisfied,
    Violated,
    Unknown,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeCheck {
    pub pair: (usize, usize),
    pub classes: (Word, Word),
    pub diameter: f64,
    pub bound: f64,
    pub translate: Option<Word>,
    /// Largest cubical piece in a finite window, in edges, with its bound.
    pub cubical: Option<(u32, f64)>,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WallCheck {
    pub relator: usize,
    pub class: Word,
    pub wall: Option<Word>,
    pub diameter: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CarrierCheck {
    pub relator: usize,
    pub diameter: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Antipodal wall pairs along one period of an axis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WallspaceReport {
    pub class: Word,
    pub alpha: f64,
    /// Walls crossing `A[0, L)`.
    pub crossings: usize,
    pub doubled: bool,
    /// `8α·systole`.
    pub required_gap: f64,
    pub min_gap: f64,
    pub min_margin: f64,
    pub holds: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub satisfied: bool,
    pub alpha: f64,
    /// Whether the pieces also satisfy `C′(τ)` for each reported threshold.
    pub thresholds: Vec<(String, bool)>,
    pub systoles: Vec<Systole>,
    pub worst_cone: Option<ConeCheck>,
    pub worst_wall: Option<WallCheck>,
    pub cone: Vec<ConeCheck>,
    pub walls: Vec<WallCheck>,
    pub carrier: Vec<CarrierCheck>,
    pub wallspace: Vec<WallspaceReport>,
    pub unchecked: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictConfig {
    pub pieces: PieceConfig,
    /// Ordered pairs beyond this leave the verdict unknown.
    pub max_pairs: usize,
    /// Translate radius for the cubical corroboration, or none to skip it.
    pub cubical_window: Option<u32>,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig { pieces: PieceConfig::default(), max_pairs: 4096, cubical_window: Some(2) }
    }
}

/// Walls crossing `A[0, L)`, sorted by crossing parameter, as `(t, polar, reflection)`.
pub fn axis_crossings(data: &AxisData) -> Vec<(f64, [f64; 3], Vec<u8>)> {
    let rv = lengths().circumradius;
    let pent = pentagon();
    let g = &data.axis.geodesic;
    let l = data.axis.period;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for ch in data.within(rv + 1e-9) {
        for s in 0..5u8 {
            let wall = wall_of(&ch.word, s);
            if !seen.insert(pack(&wall)) {
                continue;
            }
            let e = ch.iso.apply(&pent.polars[s as usize]);
            let (alpha, beta) = (dot(&g.base, &e), dot(&g.dir, &e));
            if beta.abs() <= alpha.abs() {
                continue;
            }
            let t = (-alpha / beta).atanh();
            if t >= -1e-9 && t < l - 1e-9 {
                out.push((t.max(0.0), e, wall));
            }
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.2.cmp(&b.2)));
    out
}

fn line_gap(e1: &[f64; 3], e2: &[f64; 3]) -> f64 {
    let x = dot(e1, e2).abs();
    if x > 1.0 {
        x.acosh()
    } else {
        0.0
    }
}

fn wallspace_from(data: &AxisData, systole_hyp: f64, alpha: f64) -> WallspaceReport {
    let walls = axis_crossings(data);
    let m = walls.len();
    let required = 8.0 * alpha * systole_hyp;
    let mut notes = Vec::new();
    let doubled = m % 2 == 1;
    if doubled {
        notes.push(format!("{m} crossings per period; doubled to {}", 2 * m));
    }
    let shift = data.class.isometry();
    let mut min_gap = f64::INFINITY;
    if m >= 2 {
        // after doubling, copy 2i faces copy 2i + m, which lies in crossing i + ⌊m/2⌋ (odd m) or i + m/2
        let offsets: Vec<usize> = if doubled { vec![(m - 1) / 2, (m + 1) / 2] } else { vec![m / 2] };
        for i in 0..m {
            for &o in &offsets {
                let j = i + o;
                let ej = if j < m { walls[j].1 } else { shift.apply(&walls[j - m].1) };
                min_gap = min_gap.min(line_gap(&walls[i].1, &ej));
            }
        }
    } else {
        notes.push("fewer than two walls cross a period".into());
        min_gap = 0.0;
    }
    let margin = min_gap - required;
    WallspaceReport {
        class: data.class.rep.clone(),
        alpha,
        crossings: m,
        doubled,
        required_gap: required,
        min_gap,
        min_margin: margin,
        holds: margin > 1e-9,
        notes,
    }
}

/// Antipodal-pair premises for the wallspace on one relator.
pub fn wallspace_premises(c: &ConjClass, alpha: f64) -> Result<WallspaceReport> {
    let s = systole(c)?;
    let data = AxisData::new(c, lengths().circumradius + 1e-9)?;
    let mut r = wallspace_from(&data, s.hyp, alpha);
    if s.non_primitive {
        r.notes.push(format!("non-primitive; systole of the root {}", s.root));
    }
    Ok(r)
}

/// Carrier diameter: the longest chord of a crossing wall inside `N_{2r_v}(axis)`.
fn carrier_diameter(data: &AxisData) -> f64 {
    let reach = 2.0 * lengths().circumradius;
    let axis_polar = data.axis.geodesic.polar;
    axis_crossings(data)
        .iter()
        .filter_map(|(_, e, _)| {
            let wall = Geodesic::from_polar(e);
            near_interval(&wall, &axis_polar, reach, 1e-9).ok().flatten().map(|(a, b, _)| b - a)
        })
        .fold(0.0, f64::max)
}

/// `C′(α)` verdict with piece diameters measured in H².
pub fn cprime_verdict(p: &Presentation, cfg: &VerdictConfig) -> Result<Verdict> {
    let n = p.relators.len();
    let pc = &cfg.pieces;
    let rv = lengths().circumradius;
    let systoles: Vec<Systole> = p.relators.iter().map(systole).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    if pairs.len() > cfg.max_pairs {
        return Ok(Verdict {
            status: Status::Unknown,
            satisfied: false,
            alpha: p.alpha,
            thresholds: Vec::new(),
            systoles,
            worst_cone: None,
            worst_wall: None,
            cone: Vec::new(),
            walls: Vec::new(),
            carrier: Vec::new(),
            wallspace: Vec::new(),
            unchecked: pairs,
        });
    }
    let reach = pc.j.max(pc.kappa) + rv + 1e-9;
    let data: Vec<AxisData> = p.relators.par_iter().map(|c| AxisData::new(c, reach)).collect::<Result<_>>()?;
    let cone: Vec<ConeCheck> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let r = max_cone_piece(&data[i], &data[j], pc)?;
            let bound = p.alpha * systoles[i].hyp;
            let cubical = match cfg.cubical_window {
                Some(w) => Some((
                    cubical_piece_window(&p.relators[i], &p.relators[j], j_cubical(), w, 2)?,
                    p.alpha * systoles[i].cube,
                )),
                None => None,
            };
            Ok(ConeCheck {
                pair: (i, j),
                classes: (p.relators[i].rep.clone(), p.relators[j].rep.clone()),
                diameter: r.as_ref().map_or(0.0, |r| r.diameter),
                bound,
                translate: r.as_ref().map(|r| r.translate.clone()),
                cubical,
                flags: r.map(|r| r.flags).unwrap_or_default(),
            })
        })
        .collect::<Result<_>>()?;
    let walls: Vec<WallCheck> = data
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let r = max_wall_piece(d, pc.kappa, pc.tol)?;
            Ok(WallCheck {
                relator: i,
                class: p.relators[i].rep.clone(),
                wall: r.as_ref().map(|r| r.wall.clone()),
                diameter: r.map_or(0.0, |r| r.diameter),
                bound: p.alpha * systoles[i].hyp,
            })
        })
        .collect::<Result<_>>()?;
    let carrier = data
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let diameter = carrier_diameter(d);
            let bound = p.alpha * systoles[i].hyp;
            CarrierCheck { relator: i, diameter, bound, holds: diameter < bound }
        })
        .collect();
    let wallspace = data.iter().zip(&systoles).map(|(d, s)| wallspace_from(d, s.hyp, p.alpha)).collect();
    let holds_at = |alpha: f64| {
        cone.iter().all(|c| c.diameter < alpha * systoles[c.pair.0].hyp)
            && walls.iter().all(|w| w.diameter < alpha * systoles[w.relator].hyp)
    };
    let satisfied = cone.iter().all(|c| c.diameter < c.bound) && walls.iter().all(|w| w.diameter < w.bound);
    let excess = |d: f64, b: f64| if d.is_infinite() { f64::INFINITY } else { d - b };
    let worst_cone = cone
        .iter()
        .max_by(|a, b| excess(a.diameter, a.bound).partial_cmp(&excess(b.diameter, b.bound)).unwrap())
        .cloned();
    let worst_wall = walls
        .iter()
        .max_by(|a, b| excess(a.diameter, a.bound).partial_cmp(&excess(b.diameter, b.bound)).unwrap())
        .cloned();
    Ok(Verdict {
        status: if satisfied { Status::Satisfied } else { Status::Violated },
        satisfied,
        alpha: p.alpha,
        thresholds: THRESHOLDS.iter().map(|(name, t)| (name.to_string(), holds_at(*t))).collect(),
        systoles,
        worst_cone,
        worst_wall,
        cone,
        walls,
        carrier,
        wallspace,
        unchecked: Vec::new(),
    })
}

/// Verdicts for every single-relator presentation in a census.
pub fn single_relator_census(census: &ClassCensus, alpha: f64, cfg: &VerdictConfig) -> Result<Vec<Verdict>> {
    census
        .classes
        .par_iter()
        .map(|c| cprime_verdict(&Presentation::new(vec![c.clone()], alpha)?, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::conj_min;

    fn class(s: &str) -> ConjClass {
        conj_min(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn systole_of_translation_and_its_square() {
        let a = lengths().a;
        let s = systole(&class("02")).unwrap();
        assert_eq!(s.cube, 2.0);
        assert!((s.hyp - 4.0 * a).abs() < 1e-9);
        let sq = systole(&class("0202")).unwrap();
        assert!(sq.non_primitive && sq.power == 2);
        assert!((sq.hyp - 4.0 * a).abs() < 1e-9);
    }

    #[test]
    fn duplicates_and_elliptics_are_rejected() {
        assert!(matches!(Presentation::new(vec![class("02"), class("20")], 0.05), Err(Error::Degenerate(_))));
        assert!(matches!(Presentation::new(vec![class("01")], 0.05), Err(Error::Domain(_))));
        assert!(Presentation::new(vec![class("02")], 1.0).is_err());
    }

    #[test]
    fn translation_wallspace_margins() {
        let a = lengths().a;
        let r = wallspace_premises(&class("02"), 1.0 / 20.0).unwrap();
        assert_eq!(r.crossings, 2);
        assert!((r.min_gap - 2.0 * a).abs() < 1e-9);
        assert!(r.holds);
        let r = wallspace_premises(&class("02"), 0.4).unwrap();
        assert!(!r.holds);
    }
}
