//! Growth functions of the group, its conjugacy classes and a wall stabilizer.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::conjugacy::{ClassCensus, Metric};
use crate::coxeter::{growth_series, pack, push_letter, sphere_sizes};
use crate::error::{Error, Result};
use crate::geometry::{dist, HPoint, Isometry};
use crate::tiling::{lengths, pentagon};

/// Bucket width for hyperbolic radii.
pub const HYP_STEP: f64 = 0.25;
/// Largest combinatorial radius for group and class counts.
pub const MAX_CUBE: f64 = 14.0;
/// Largest hyperbolic radius for group and class counts.
pub const MAX_HYP: f64 = 12.0;
/// The stabilizer grows linearly, so it is affordable much further out.
pub const MAX_STABILIZER: f64 = 400.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subject {
    Group,
    Conjugacy,
    PrimitiveConjugacy,
    WallStabilizer,
}

impl std::str::FromStr for Subject {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(Subject::Group),
            "conjugacy" => Ok(Subject::Conjugacy),
            "primitive-conjugacy" => Ok(Subject::PrimitiveConjugacy),
            "wall-stabilizer" => Ok(Subject::WallStabilizer),
            _ => Err(Error::Input(format!("unknown growth subject {s:?}"))),
        }
    }
}

/// Cumulative counts `f(n) = #{x : len(x) ≤ n}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthTable {
    pub subject: Subject,
    pub metric: Metric,
    pub rows: Vec<(f64, u64)>,
}

impl GrowthTable {
    pub fn count_at(&self, n: f64) -> Option<u64> {
        self.rows.iter().find(|(r, _)| (r - n).abs() < 1e-9).map(|&(_, c)| c)
    }

    pub fn n_max(&self) -> f64 {
        self.rows.last().map(|r| r.0).unwrap_or(0.0)
    }

    pub fn to_csv(&self) -> String {
        let subject = serde_json::to_value(self.subject).unwrap();
        let metric = serde_json::to_value(self.metric).unwrap();
        let mut s = String::from("subject,metric,n,count\n");
        for (n, c) in &self.rows {
            s.push_str(&format!("{},{},{},{}\n", subject.as_str().unwrap(), metric.as_str().unwrap(), n, c));
        }
        s
    }
}

/// Least-squares exponent with its sandwich constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentFit {
    pub b_hat: f64,
    /// `min f(n)·e^{−b̂n}` over the window.
    pub a_hat: f64,
    /// `max f(n)·e^{−b̂n}` over the window.
    pub b_sandwich: f64,
    pub window: (f64, f64),
    pub residual: f64,
}

fn grid(n_max: f64, metric: Metric) -> Vec<f64> {
    match metric {
        Metric::Cube => (0..=n_max.floor() as u32).map(f64::from).collect(),
        Metric::Hyp => (0..=(n_max / HYP_STEP + 1e-9).floor() as u32).map(|k| k as f64 * HYP_STEP).collect(),
    }
}

fn cumulative(mut lengths: Vec<f64>, points: &[f64]) -> Vec<(f64, u64)> {
    lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.iter().map(|&r| (r, lengths.partition_point(|&x| x <= r + 1e-9) as u64)).collect()
}

/// Distances `d(o, g·o)` of every `g` with `d(o, g·o) ≤ r`.
///
/// Breadth-first search through chambers whose centers lie within
/// `r + circumradius`: the chambers met by the segment from `o` to `g·o` all
/// qualify, so every target is reached.
pub fn hyperbolic_ball(r: f64) -> Vec<f64> {
    let pent = pentagon();
    let reach = r + lengths().circumradius + 1e-9;
    let o = HPoint::ORIGIN.0;
    let mut seen: HashSet<u128> = HashSet::new();
    let mut queue: VecDeque<(Vec<u8>, Isometry)> = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(pack(&[]));
    queue.push_back((Vec::new(), Isometry::IDENTITY));
    while let Some((w, m)) = queue.pop_front() {
        let d = dist(&o, &m.center());
        if d <= r + 1e-9 {
            out.push(d);
        }
        for s in 0..5u8 {
            let mut t = w.clone();
            if !push_letter(&mut t, s) {
                continue;
            }
            let key = pack(&t);
            if seen.contains(&key) {
                continue;
            }
            let mt = m.then_reflect(&pent.polars[s as usize]);
            if dist(&o, &mt.center()) <= reach {
                seen.insert(key);
                queue.push_back((t, mt));
            }
        }
    }
    out
}

/// Elements of the stabilizer `⟨s0⟩ × ⟨s1, s4⟩` of the wall of `s0`, up to word length `n`.
pub fn wall_stabilizer(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for m in 0..=n {
        let mut dihedral: Vec<Vec<u8>> = Vec::new();
        if m == 0 {
            dihedral.push(Vec::new());
        } else {
            for first in [1u8, 4] {
                let w: Vec<u8> = (0..m).map(|k| if k % 2 == 0 { first } else { 5 - first }).collect();
                dihedral.push(w);
            }
        }
        for d in dihedral {
            out.push(crate::coxeter::normal_form(&d));
            if m < n {
                let mut t = vec![0u8];
                t.extend_from_slice(&d);
                out.push(crate::coxeter::normal_form(&t));
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Group, class and stabilizer counts, with the class census shared between calls.
#[derive(Default)]
pub struct GrowthLab {
    census: Vec<ClassCensus>,
}

impl GrowthLab {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reuse or build a census covering `bound` in `metric`.
    pub fn census(&mut self, metric: Metric, bound: f64) -> Result<&ClassCensus> {
        if let Some(i) = self.census.iter().position(|c| c.metric == metric && c.bound >= bound - 1e-9) {
            return Ok(&self.census[i]);
        }
        let c = ClassCensus::build(metric, bound)?;
        self.census.push(c);
        Ok(self.census.last().unwrap())
    }

    pub fn insert_census(&mut self, census: ClassCensus) {
        self.census.push(census);
    }

    pub fn growth(&mut self, subject: Subject, metric: Metric, n_max: f64) -> Result<GrowthTable> {
        if !(n_max >= 0.0) {
            return Err(Error::Input("negative radius".into()));
        }
        let limit = match (subject, metric) {
            (Subject::WallStabilizer, _) => MAX_STABILIZER,
            (_, Metric::Cube) => MAX_CUBE,
            (_, Metric::Hyp) => MAX_HYP,
        };
        if n_max > limit + 1e-9 {
            return Err(Error::Budget {
                what: format!("growth of {subject:?} to {n_max} exceeds the budget {limit}"),
                needed: limit as u32,
            });
        }
        let points = grid(n_max, metric);
        let rows = match (subject, metric) {
            (Subject::Group, Metric::Cube) => {
                let n = n_max.floor() as usize;
                let spheres = if n <= 15 { sphere_sizes(n) } else { growth_series(n) };
                let mut total = 0;
                spheres.iter().enumerate().map(|(k, c)| {
                    total += c;
                    (k as f64, total)
                }).collect()
            }
            (Subject::Group, Metric::Hyp) => cumulative(hyperbolic_ball(n_max), &points),
            (Subject::Conjugacy | Subject::PrimitiveConjugacy, _) => {
                let census = self.census(metric, n_max)?;
                let lens: Vec<f64> = census
                    .classes
                    .iter()
                    .filter(|c| subject == Subject::Conjugacy || c.primitive == Some(true))
                    .map(|c| c.len(metric))
                    .collect();
                cumulative(lens, &points)
            }
            (Subject::WallStabilizer, Metric::Cube) => {
                let lens = wall_stabilizer(n_max.floor() as usize).iter().map(|w| w.len() as f64).collect();
                cumulative(lens, &points)
            }
            (Subject::WallStabilizer, Metric::Hyp) => {
                // d(o, h·o) ≥ c·ℓ(h) − 4c bounds the word length needed
                let l = lengths();
                let n = ((n_max + 4.0 * l.c) / l.c).ceil() as usize + 1;
                let o = HPoint::ORIGIN.0;
                let lens = wall_stabilizer(n)
                    .iter()
                    .map(|w| dist(&o, &crate::coxeter::isometry_of(w).center()))
                    .collect();
                cumulative(lens, &points)
            }
        };
        Ok(GrowthTable { subject, metric, rows })
    }
}

/// Upper half of the computed range, the default fitting window.
pub fn default_window(table: &GrowthTable) -> (f64, f64) {
    let top = table.n_max();
    let lo = match table.metric {
        Metric::Cube => (top / 2.0).ceil(),
        Metric::Hyp => ((top / 2.0) / HYP_STEP).ceil() * HYP_STEP,
    };
    (lo, top)
}

/// Least-squares slope of `log f(n)` over the window.
pub fn fit_exponent(table: &GrowthTable, window: (f64, f64)) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter(|(n, c)| *n >= window.0 - 1e-9 && *n <= window.1 + 1e-9 && *c > 0)
        .map(|&(n, c)| (n, (c as f64).ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::Input(format!("only {} usable rows in the fitting window", pts.len())));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b_hat = sxy / sxx;
    let icpt = my - b_hat * mx;
    let residual = (pts.iter().map(|p| (p.1 - icpt - b_hat * p.0).powi(2)).sum::<f64>() / k).sqrt();
    let scaled: Vec<f64> = pts.iter().map(|p| (p.1 - b_hat * p.0).exp()).collect();
    let a_hat = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let b_sandwich = scaled.iter().cloned().fold(0.0, f64::max);
    Ok(ExponentFit { b_hat, a_hat, b_sandwich, window, residual })
}

/// Smallest window start, stepping up from the bottom of the table, after
/// which the sandwich ratio `B̂/Â` over `[start, top]` changes by less than 5%
/// per step.
pub fn stable_window_start(table: &GrowthTable) -> Option<f64> {
    let top = table.n_max();
    let step = match table.metric {
        Metric::Cube => 1.0,
        Metric::Hyp => 4.0 * HYP_STEP,
    };
    let ratio = |lo: f64| fit_exponent(table, (lo, top)).ok().map(|f| f.b_sandwich / f.a_hat);
    let starts: Vec<f64> = (1..).map(|k| k as f64 * step).take_while(|&lo| lo <= top).collect();
    let ratios: Vec<Option<f64>> = starts.iter().map(|&lo| ratio(lo)).collect();
    (0..starts.len()).find(|&i| {
        let tail: Vec<f64> = ratios[i..].iter().map_while(|r| *r).collect();
        tail.len() >= 2 && tail.windows(2).all(|w| (w[1] - w[0]).abs() <= 0.05 * w[0])
    })
    .map(|i| starts[i])
}

/// Fraction of hyperbolic classes of length `≤ n` that are proper powers.
pub fn nonprimitive_fraction(census: &ClassCensus, n: f64) -> Result<f64> {
    if n > census.bound + 1e-9 {
        return Err(Error::Scope(format!("census only reaches {}", census.bound)));
    }
    let upto = census.up_to(n);
    if upto.is_empty() {
        return Ok(0.0);
    }
    let np = upto.iter().filter(|c| c.primitive == Some(false)).count();
    Ok(np as f64 / upto.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_counts() {
        let mut lab = GrowthLab::new();
        let t = lab.growth(Subject::Group, Metric::Cube, 2.0).unwrap();
        assert_eq!(t.rows, vec![(0.0, 1), (1.0, 6), (2.0, 21)]);
        assert!(lab.growth(Subject::Group, Metric::Cube, 15.0).is_err());
    }

    #[test]
    fn no_hyperbolic_class_has_length_zero() {
        let mut lab = GrowthLab::new();
        let t = lab.growth(Subject::Conjugacy, Metric::Hyp, 0.0).unwrap();
        assert_eq!(t.rows, vec![(0.0, 0)]);
    }

    #[test]
    fn stabilizer_is_linear() {
        let st = wall_stabilizer(10);
        assert_eq!(st.iter().filter(|w| w.len() <= 10).count(), 40);
    }

    #[test]
    fn hyperbolic_ball_small_radius() {
        // the five neighbours sit at distance 2b
        let d = hyperbolic_ball(2.0 * lengths().b + 1e-6);
        assert_eq!(d.len(), 6);
    }
}
