//! Conjugacy classes: minimal representatives, translation lengths, primitivity.
//!
//! In a right-angled Coxeter group two cyclically reduced words are
//! conjugate exactly when they differ by cyclic shifts and commutations, so
//! the minimal-length conjugates of an element form a finite set reachable
//! from any one of them by conjugating with descents.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::coxeter::{
    central_letter, commute, conjugation_shortening, isometry_of, left_descents, normal_form, pack, right_descents,
    walk_tree, Word,
};
use crate::error::{Error, Result};
use crate::geometry::{translation_length, GeometryConfig, Isometry};
use crate::tiling::lengths;

/// Metric in which lengths are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Word metric, i.e. the combinatorial metric of the Davis complex.
    Cube,
    /// Hyperbolic metric of H².
    Hyp,
}

impl std::str::FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cube" => Ok(Metric::Cube),
            "hyp" => Ok(Metric::Hyp),
            _ => Err(Error::Input(format!("unknown metric {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Elliptic,
    Hyperbolic,
}

/// A nontrivial conjugacy class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjClass {
    /// ShortLex-least minimal-length representative.
    pub rep: Word,
    /// Translation length on the Davis complex (stable word length) for
    /// hyperbolic classes; minimal length for elliptic ones.
    pub len_cube: u32,
    /// Translation length on H²; zero for elliptic classes.
    pub len_hyp: f64,
    /// `None` until decided.
    pub primitive: Option<bool>,
    /// Word length of `rep`.
    pub min_len: u32,
    pub kind: ClassKind,
}

impl ConjClass {
    pub fn is_hyperbolic(&self) -> bool {
        self.kind == ClassKind::Hyperbolic
    }

    pub fn len(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Cube => self.len_cube as f64,
            Metric::Hyp => self.len_hyp,
        }
    }

    pub fn isometry(&self) -> Isometry {
        isometry_of(self.rep.letters())
    }
}

/// Shorten by conjugation until no letter cancels from both ends.
pub fn cyclic_reduction(nf: &[u8]) -> Vec<u8> {
    let mut w = normal_form(nf);
    while let Some(x) = conjugation_shortening(&w) {
        let mut t = Vec::with_capacity(w.len() + 2);
        t.push(x);
        t.extend_from_slice(&w);
        t.push(x);
        w = normal_form(&t);
    }
    w
}

fn conj_by(x: u8, w: &[u8]) -> Vec<u8> {
    let mut t = Vec::with_capacity(w.len() + 2);
    t.push(x);
    t.extend_from_slice(w);
    t.push(x);
    normal_form(&t)
}

/// All minimal-length conjugates of `nf`, ShortLex-sorted.
pub fn minimal_conjugates(nf: &[u8]) -> Vec<Vec<u8>> {
    let mut start = cyclic_reduction(nf);
    'restart: loop {
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut stack = vec![start.clone()];
        seen.insert(start.clone());
        while let Some(w) = stack.pop() {
            let moves = left_descents(&w) | right_descents(&w);
            for x in 0..5u8 {
                if moves & (1 << x) == 0 {
                    continue;
                }
                let y = conj_by(x, &w);
                if y.len() < w.len() {
                    start = cyclic_reduction(&y);
                    continue 'restart;
                }
                if y.len() == w.len() && !seen.contains(&y) {
                    seen.insert(y.clone());
                    stack.push(y);
                }
            }
        }
        let mut out: Vec<Vec<u8>> = seen.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        return out;
    }
}

/// Canonical representative of the conjugacy class of `nf`.
pub fn canonical(nf: &[u8]) -> Vec<u8> {
    minimal_conjugates(nf).swap_remove(0)
}

/// Pairwise commuting distinct letters: a finite-order element.
fn spherical(w: &[u8]) -> bool {
    match w {
        [] | [_] => true,
        [x, y] => x != y && commute(*x, *y),
        _ => false,
    }
}

fn class_from_rep(rep: Vec<u8>, cfg: &GeometryConfig) -> Result<ConjClass> {
    if rep.is_empty() {
        return Err(Error::Excluded("identity has no conjugacy class representative".into()));
    }
    let min_len = rep.len() as u32;
    if spherical(&rep) {
        return Ok(ConjClass {
            rep: Word::from_raw(rep),
            len_cube: min_len,
            len_hyp: 0.0,
            primitive: None,
            min_len,
            kind: ClassKind::Elliptic,
        });
    }
    let len_hyp = translation_length(&isometry_of(&rep), cfg)?;
    let len_cube = min_len - u32::from(central_letter(&rep).is_some());
    Ok(ConjClass { rep: Word::from_raw(rep), len_cube, len_hyp, primitive: None, min_len, kind: ClassKind::Hyperbolic })
}

/// Minimal-length conjugacy class representative of `w`.
pub fn conj_min(w: &Word) -> Result<ConjClass> {
    class_from_rep(canonical(w.letters()), &GeometryConfig::default())
}

/// Normal form of `wⁿ`.
pub fn power(nf: &[u8], n: u32) -> Vec<u8> {
    let mut t = Vec::with_capacity(nf.len() * n as usize);
    for _ in 0..n {
        t.extend_from_slice(nf);
    }
    normal_form(&t)
}

/// Stable word length `lim ℓ(wⁿ)/n`, computed from a high power.
pub fn stable_length_by_powers(nf: &[u8], n: u32) -> f64 {
    power(nf, n).len() as f64 / n as f64
}

/// Find a class `c′` and `n ≥ 2` with `rep(c′)ⁿ` conjugate to `rep(c)`.
///
/// Every element of the appropriate word length is tried, so this is an
/// exhaustive search rather than a lookup in a census.
pub fn primitive_root(c: &ConjClass) -> Result<Option<(ConjClass, u32)>> {
    if !c.is_hyperbolic() {
        return Err(Error::Domain("primitivity is defined for hyperbolic classes".into()));
    }
    let target = c.rep.letters().to_vec();
    let l = c.len_cube;
    let mut found: Option<(Vec<u8>, u32)> = None;
    for n in (2..=l).rev() {
        if l % n != 0 {
            continue;
        }
        let m = (l / n) as usize;
        let mut hit: Option<Vec<u8>> = None;
        walk_tree(m + 1, |w, _| {
            if hit.is_some() {
                return false;
            }
            if w.len() >= 2 && !spherical(w) && conjugation_shortening(w).is_none() {
                let stable = w.len() - usize::from(central_letter(w).is_some());
                if stable == m && canonical(&power(w, n)) == target {
                    hit = Some(canonical(w));
                }
            }
            true
        });
        if let Some(r) = hit {
            found = Some((r, n));
            break;
        }
    }
    match found {
        Some((r, n)) => Ok(Some((class_from_rep(r, &GeometryConfig::default())?, n))),
        None => Ok(None),
    }
}

/// Whether `c` is not a proper power, by exhaustive root search.
pub fn is_primitive(c: &ConjClass) -> Result<bool> {
    Ok(primitive_root(c)?.is_none())
}

/// All hyperbolic classes up to a length bound, with primitivity decided.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassCensus {
    pub metric: Metric,
    pub bound: f64,
    /// Sorted by length in `metric`, then by representative.
    pub classes: Vec<ConjClass>,
    /// Nontrivial finite-order classes, excluded from `classes`.
    pub elliptic: usize,
}

impl ClassCensus {
    /// Enumerate every hyperbolic class of length `≤ bound`.
    pub fn build(metric: Metric, bound: f64) -> Result<Self> {
        let cfg = GeometryConfig::default();
        let l = lengths();
        let max_len = match metric {
            Metric::Cube => bound.floor() as usize + 1,
            Metric::Hyp => (bound / l.c + 1e-9).floor() as usize + 1,
        };
        if max_len > 40 {
            return Err(Error::Budget { what: format!("class census to length {bound}"), needed: max_len as u32 });
        }
        let mut seen: HashSet<u128> = HashSet::new();
        let mut classes: Vec<ConjClass> = Vec::new();
        let mut failure: Option<Error> = None;
        walk_tree(max_len, |w, m| {
            if w.len() < 2 || spherical(w) || conjugation_shortening(w).is_some() {
                return true;
            }
            let stable = (w.len() - usize::from(central_letter(w).is_some())) as f64;
            let keep = match metric {
                Metric::Cube => stable <= bound,
                Metric::Hyp => {
                    let tr = m.trace();
                    let x = if m.det() > 0.0 { (tr - 1.0) / 2.0 } else { (tr + 1.0) / 2.0 };
                    x.max(1.0).acosh() <= bound + 1e-9
                }
            };
            if !keep || seen.contains(&pack(w)) {
                return true;
            }
            let members = minimal_conjugates(w);
            for v in &members {
                seen.insert(pack(v));
            }
            match class_from_rep(members[0].clone(), &cfg) {
                Ok(c) => {
                    if c.len(metric) <= bound + 1e-9 {
                        classes.push(c)
                    }
                }
                Err(e) => failure = Some(e),
            }
            true
        });
        if let Some(e) = failure {
            return Err(e);
        }
        sort_classes(&mut classes, metric);
        let mut census = ClassCensus { metric, bound, classes, elliptic: 10 };
        census.sieve_primitivity();
        Ok(census)
    }

    /// Mark every class that is a proper power of another class in the census.
    fn sieve_primitivity(&mut self) {
        let index: HashMap<Vec<u8>, usize> =
            self.classes.iter().enumerate().map(|(i, c)| (c.rep.letters().to_vec(), i)).collect();
        let mut primitive = vec![true; self.classes.len()];
        for c in &self.classes {
            let mut n = 2u32;
            while c.len(self.metric) * n as f64 <= self.bound + 1e-9 {
                let p = canonical(&power(c.rep.letters(), n));
                if let Some(&j) = index.get(&p) {
                    primitive[j] = false;
                }
                n += 1;
            }
        }
        for (c, p) in self.classes.iter_mut().zip(primitive) {
            c.primitive = Some(p);
        }
    }

    /// Classes of length at most `ell`.
    pub fn up_to(&self, ell: f64) -> Vec<&ConjClass> {
        self.classes.iter().filter(|c| c.len(self.metric) <= ell + 1e-9).collect()
    }
}

pub fn sort_classes(classes: &mut [ConjClass], metric: Metric) {
    classes.sort_by(|a, b| {
        a.len(metric).partial_cmp(&b.len(metric)).unwrap().then_with(|| a.rep.cmp(&b.rep))
    });
}

/// The ten nontrivial finite-order classes: reflections and right-angle rotations.
pub fn elliptic_classes() -> Vec<ConjClass> {
    let cfg = GeometryConfig::default();
    let mut out = Vec::new();
    for i in 0..5u8 {
        out.push(class_from_rep(vec![i], &cfg).expect("reflection"));
    }
    for i in 0..5u8 {
        let j = (i + 1) % 5;
        out.push(class_from_rep(normal_form(&[i, j]), &cfg).expect("rotation"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(s: &str) -> ConjClass {
        conj_min(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn cyclic_shift_then_cancel() {
        let c = class("0120");
        assert_eq!(c.rep.to_string(), "12");
        assert_eq!(c.kind, ClassKind::Elliptic);
        assert_eq!(c.len_cube, 2);
    }

    #[test]
    fn translation_class() {
        let c = class("02");
        assert_eq!(c.len_cube, 2);
        assert!((c.len_hyp - 4.0 * lengths().a).abs() < 1e-9);
    }

    #[test]
    fn glide_along_a_wall_has_stable_length_two() {
        let c = class("102");
        assert_eq!(c.min_len, 3);
        assert_eq!(c.len_cube, 2);
        assert_eq!(stable_length_by_powers(c.rep.letters(), 8), 2.0);
        assert!((c.len_hyp - 4.0 * lengths().a).abs() < 1e-9);
    }

    #[test]
    fn identity_is_excluded() {
        assert!(matches!(conj_min(&Word::default()), Err(Error::Excluded(_))));
    }

    #[test]
    fn square_is_not_primitive() {
        let c = class("0202");
        let (root, n) = primitive_root(&c).unwrap().unwrap();
        assert_eq!(n, 2);
        assert_eq!(root.len_cube, 2);
        assert!(is_primitive(&class("02")).unwrap());
    }

    #[test]
    fn length_two_census() {
        let census = ClassCensus::build(Metric::Cube, 2.0).unwrap();
        let reps: Vec<String> = census.classes.iter().map(|c| c.rep.to_string()).collect();
        // five translations along side lines and five glides along them
        assert_eq!(census.classes.len(), 10, "{reps:?}");
        assert_eq!(census.classes.iter().filter(|c| c.min_len == 2).count(), 5);
    }
}
