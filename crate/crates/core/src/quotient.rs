//! Random quotients: `k = ⌊e^{c·ℓ}⌋` classes drawn uniformly from those of length at most `ℓ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{ClassCensus, ConjClass, Metric};
use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::growth::{default_window, fit_exponent, GrowthLab, Subject, MAX_CUBE, MAX_HYP, MAX_STABILIZER};
use crate::presentation::{cprime_verdict, Presentation, Status, VerdictConfig};
use crate::tiling::lengths;

/// `⌊e^{c·ℓ}⌋`, at least 1.
pub fn density_k(c: f64, ell: f64) -> u64 {
    ((c * ell).exp().floor() as u64).max(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub ell: f64,
    pub c: f64,
    pub metric: Metric,
    pub b_hat: f64,
    pub a_hat: f64,
    pub lambda: f64,
    pub k: u64,
}

impl DensityParams {
    pub fn new(ell: f64, c: f64, metric: Metric, b_hat: f64, a_hat: f64) -> Result<Self> {
        if !(c > 0.0) || !(ell >= 0.0) {
            return Err(Error::Input(format!("need c > 0 and ell ≥ 0, got c = {c}, ell = {ell}")));
        }
        Ok(DensityParams { ell, c, metric, b_hat, a_hat, lambda: lengths().lambda, k: density_k(c, ell) })
    }

    /// Density thresholds `(c₁*, c₂*)` below which the small-cancellation argument applies.
    pub fn thresholds(&self) -> (f64, f64) {
        match self.metric {
            Metric::Cube => ((self.b_hat - self.a_hat) / 20.0, self.b_hat / 41.0),
            Metric::Hyp => (
                (self.b_hat - self.a_hat) / (20.0 * self.lambda),
                self.b_hat / (40.0 * self.lambda + 1.0),
            ),
        }
    }
}

/// Fitted group exponent `b̂` and wall-stabilizer exponent `â` at the largest affordable radii.
pub fn growth_constants(metric: Metric) -> Result<(f64, f64)> {
    let mut lab = GrowthLab::new();
    let top = match metric {
        Metric::Cube => MAX_CUBE,
        Metric::Hyp => MAX_HYP,
    };
    let g = lab.growth(Subject::Group, metric, top)?;
    let s = lab.growth(Subject::WallStabilizer, metric, MAX_STABILIZER)?;
    Ok((fit_exponent(&g, default_window(&g))?.b_hat, fit_exponent(&s, default_window(&s))?.b_hat))
}

/// Hyperbolic classes of length at most `ℓ`, indexed for sampling.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassIndex {
    pub metric: Metric,
    pub ell: f64,
    pub classes: Vec<ConjClass>,
    pub elliptic_excluded: usize,
}

pub fn enumerate_classes(ell: f64, metric: Metric) -> Result<ClassIndex> {
    let cap = match metric {
        Metric::Cube => MAX_CUBE,
        Metric::Hyp => MAX_HYP,
    };
    if ell > cap + 1e-9 {
        return Err(Error::Budget { what: format!("class census to length {ell}"), needed: cap as u32 });
    }
    if ell < 1.0 - 1e-9 && metric == Metric::Cube || ell <= 0.0 {
        return Ok(ClassIndex { metric, ell, classes: Vec::new(), elliptic_excluded: 0 });
    }
    let census = ClassCensus::build(metric, ell)?;
    Ok(from_census(&census, ell))
}

/// Restrict an existing census.
pub fn from_census(census: &ClassCensus, ell: f64) -> ClassIndex {
    ClassIndex {
        metric: census.metric,
        ell,
        classes: census.up_to(ell).into_iter().cloned().collect(),
        elliptic_excluded: census.elliptic,
    }
}

/// One sampled presentation and its verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleRun {
    pub seed: u64,
    pub trial: u64,
    pub params: DensityParams,
    pub classes: Vec<Word>,
    pub status: Status,
    pub duplicates: bool,
    pub worst_cone: Option<(f64, f64)>,
    pub worst_wall: Option<(f64, f64)>,
    pub systole_min: f64,
    pub primitive: Vec<bool>,
    /// Relators carrying a wall piece of diameter at least `α·systole`.
    pub long_wall_pieces: usize,
}

/// Random stream for one trial of one experiment cell.
pub fn trial_rng(seed: u64, cell: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ cell.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(trial);
    rng
}

/// `k` indices drawn uniformly with replacement from `0..n`.
pub fn draw(n: usize, k: u64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..k).map(|_| rng.gen_range(0..n)).collect()
}

/// Draw `k` classes uniformly with replacement and judge `C′(α)`.
///
/// Repeated draws make the presentation degenerate, which counts as a violation.
pub fn sample(index: &ClassIndex, params: &DensityParams, alpha: f64, rng: &mut ChaCha8Rng, cfg: &VerdictConfig) -> Result<SampleRun> {
    if index.classes.is_empty() {
        return Err(Error::Input(format!("no hyperbolic classes of length ≤ {}", index.ell)));
    }
    let picks = draw(index.classes.len(), params.k, rng);
    let classes: Vec<ConjClass> = picks.iter().map(|&i| index.classes[i].clone()).collect();
    let mut sorted = picks.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let duplicates = sorted.len() < picks.len();
    let systole_min = classes.iter().map(|c| c.len(index.metric)).fold(f64::INFINITY, f64::min);
    let primitive = classes.iter().map(|c| c.primitive != Some(false)).collect();
    let mut run = SampleRun {
        seed: 0,
        trial: 0,
        params: params.clone(),
        classes: classes.iter().map(|c| c.rep.clone()).collect(),
        status: Status::Violated,
        duplicates,
        worst_cone: None,
        worst_wall: None,
        systole_min,
        primitive,
        long_wall_pieces: 0,
    };
    if duplicates {
        return Ok(run);
    }
    let v = cprime_verdict(&Presentation::new(classes, alpha)?, cfg)?;
    run.status = v.status;
    run.worst_cone = v.worst_cone.map(|c| (c.diameter, c.bound));
    run.worst_wall = v.worst_wall.map(|w| (w.diameter, w.bound));
    run.long_wall_pieces = v.walls.iter().filter(|w| w.diameter >= w.bound).count();
    Ok(run)
}

/// `trials` independent samples, identical for any worker count.
pub fn sample_runs(index: &ClassIndex, params: &DensityParams, alpha: f64, trials: u64, seed: u64, cell: u64, cfg: &VerdictConfig) -> Result<Vec<SampleRun>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, cell, t);
            let mut run = sample(index, params, alpha, &mut rng, cfg)?;
            run.seed = seed;
            run.trial = t;
            Ok(run)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub ell: f64,
    pub c: f64,
    pub k: u64,
    pub trials: u64,
    pub satisfied: u64,
    pub violated: u64,
    pub unknown: u64,
    pub primitive_fraction: f64,
    /// Runs whose shortest relator has length at least `(1 − q)ℓ`, `q = α/(α + 2)`.
    pub systole_fraction: f64,
    /// Relators with a wall piece of diameter at least `α·systole`, per relator drawn.
    pub wall_piece_frequency: f64,
}

impl ThresholdRow {
    pub fn success_fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.satisfied as f64 / self.trials as f64
        }
    }
}

pub fn summarize(ell: f64, c: f64, k: u64, alpha: f64, runs: &[SampleRun]) -> ThresholdRow {
    let count = |s: Status| runs.iter().filter(|r| r.status == s).count() as u64;
    let q = alpha / (alpha + 2.0);
    let drawn: usize = runs.iter().map(|r| r.primitive.len()).sum();
    let prim: usize = runs.iter().map(|r| r.primitive.iter().filter(|&&p| p).count()).sum();
    let walls: usize = runs.iter().map(|r| r.long_wall_pieces).sum();
    let frac = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    ThresholdRow {
        ell,
        c,
        k,
        trials: runs.len() as u64,
        satisfied: count(Status::Satisfied),
        violated: count(Status::Violated),
        unknown: count(Status::Unknown),
        primitive_fraction: frac(prim, drawn),
        systole_fraction: frac(runs.iter().filter(|r| r.systole_min >= (1.0 - q) * ell - 1e-9).count(), runs.len()),
        wall_piece_frequency: frac(walls, drawn),
    }
}

/// Success fractions over a grid of lengths and densities.
pub fn threshold_experiment(
    census: &ClassCensus,
    ell_grid: &[f64],
    c_grid: &[f64],
    alpha: f64,
    trials: u64,
    seed: u64,
    cfg: &VerdictConfig,
) -> Result<Vec<ThresholdRow>> {
    let mut rows = Vec::new();
    if trials == 0 {
        return Ok(rows);
    }
    let (b_hat, a_hat) = growth_constants(census.metric)?;
    for (ci, &c) in c_grid.iter().enumerate() {
        for (li, &ell) in ell_grid.iter().enumerate() {
            if ell > census.bound + 1e-9 {
                return Err(Error::Scope(format!("census reaches {} but the grid asks for {ell}", census.bound)));
            }
            let index = from_census(census, ell);
            let params = DensityParams::new(ell, c, census.metric, b_hat, a_hat)?;
            let cell = (ci * ell_grid.len() + li) as u64;
            let runs = sample_runs(&index, &params, alpha, trials, seed, cell, cfg)?;
            rows.push(summarize(ell, c, params.k, alpha, &runs));
        }
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[ThresholdRow]) -> String {
    let mut s = String::from(
        "ell,c,k,trials,satisfied,violated,unknown,primitive_fraction,systole_fraction,wall_piece_frequency\n",
    );
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.ell,
            r.c,
            r.k,
            r.trials,
            r.satisfied,
            r.violated,
            r.unknown,
            r.primitive_fraction,
            r.systole_fraction,
            r.wall_piece_frequency
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_values() {
        let c = 1.0 / 63.51;
        let ks: Vec<u64> = [20.0, 63.0, 127.0, 200.0].iter().map(|&l| density_k(c, l)).collect();
        assert_eq!(ks, vec![1, 2, 7, 23]);
    }

    #[test]
    fn zero_length_census_is_empty() {
        assert!(enumerate_classes(0.0, Metric::Cube).unwrap().classes.is_empty());
        assert!(enumerate_classes(0.0, Metric::Hyp).unwrap().classes.is_empty());
        assert!(enumerate_classes(13.0, Metric::Hyp).is_err());
    }

    #[test]
    fn same_stream_same_run() {
        let idx = enumerate_classes(4.0, Metric::Cube).unwrap();
        let p = DensityParams::new(4.0, 0.2, Metric::Cube, 0.0, 0.0).unwrap();
        let cfg = VerdictConfig { cubical_window: None, ..Default::default() };
        let a = sample(&idx, &p, 0.05, &mut trial_rng(9, 0, 3), &cfg).unwrap();
        let b = sample(&idx, &p, 0.05, &mut trial_rng(9, 0, 3), &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
