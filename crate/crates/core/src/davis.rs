//! The Davis complex: chambers, walls, balls and the combinatorial metric.
//!
//! Chambers are group elements; walls are reflections `u·s·u⁻¹`. The
//! combinatorial distance between chambers counts the walls separating them,
//! so `d(g, h) = |Inv(g) Δ Inv(h)|` where `Inv(g)` is the set of walls
//! crossed on the way from the identity chamber to `g`.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coxeter::{self, growth_series, inverse, normal_form, pack, push_letter, quotient, Word};
use crate::error::{Error, Result};
use crate::geometry::{Isometry, Vec3};
use crate::tiling::pentagon;

/// On-disk format version of the ball cache.
pub const CACHE_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"PLBALL\0\0";
pub const NONE: u32 = u32::MAX;

/// A wall, named by its reflection in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Wall {
    pub reflection: Word,
}

/// Normal form of the reflection in side `s` of chamber `u`.
pub fn wall_of(u: &[u8], s: u8) -> Vec<u8> {
    let mut t = u.to_vec();
    t.push(s);
    t.extend(u.iter().rev());
    normal_form(&t)
}

/// Combinatorial distance between two chambers given by words.
pub fn cube_dist_words(u: &[u8], v: &[u8]) -> usize {
    quotient(u, v).len()
}

/// Limits on enumeration sizes.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Budget {
    pub max_chambers: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_chambers: 4_000_000 }
    }
}

/// Number of chambers within combinatorial distance `r` of the identity.
pub fn ball_size(r: u32) -> u64 {
    growth_series(r as usize).iter().sum()
}

/// All chambers within combinatorial distance `radius` of the identity.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: u32,
    /// ShortLex order; index 0 is the identity.
    pub words: Vec<Vec<u8>>,
    pub isometries: Vec<Isometry>,
    /// `neighbors[i][s]` is the chamber across side `s`, or `NONE` outside the ball.
    pub neighbors: Vec<[u32; 5]>,
    index: HashMap<u128, u32>,
    wall_index: HashMap<u128, u32>,
    walls: Vec<Vec<u8>>,
    inv_start: Vec<u32>,
    inv: Vec<u32>,
}

impl Ball {
    pub fn new(radius: u32, budget: &Budget) -> Result<Self> {
        let size = ball_size(radius);
        if size > budget.max_chambers || radius > 20 {
            let mut fits = 0;
            while ball_size(fits + 1) <= budget.max_chambers && fits < 20 {
                fits += 1;
            }
            return Err(Error::Budget { what: format!("ball of radius {radius} has {size} chambers"), needed: fits });
        }
        Ok(Self::from_words(radius, coxeter::ball(radius as usize)))
    }

    /// Rebuild derived data from the ShortLex list of chambers.
    pub fn from_words(radius: u32, words: Vec<Vec<u8>>) -> Self {
        let pent = pentagon();
        let n = words.len();
        let mut index = HashMap::with_capacity(n);
        for (i, w) in words.iter().enumerate() {
            index.insert(pack(w), i as u32);
        }
        let mut isometries = Vec::with_capacity(n);
        let mut wall_index: HashMap<u128, u32> = HashMap::new();
        let mut walls: Vec<Vec<u8>> = Vec::new();
        let mut inv_start = Vec::with_capacity(n + 1);
        let mut inv: Vec<u32> = Vec::new();
        inv_start.push(0);
        for (i, w) in words.iter().enumerate() {
            if i == 0 {
                isometries.push(Isometry::IDENTITY);
                inv_start.push(0);
                continue;
            }
            let parent = &w[..w.len() - 1];
            let s = w[w.len() - 1];
            let p = index[&pack(parent)] as usize;
            isometries.push(isometries[p].then_reflect(&pent.polars[s as usize]));
            let key = wall_of(parent, s);
            let next_id = walls.len() as u32;
            let id = *wall_index.entry(pack(&key)).or_insert_with(|| {
                walls.push(key.clone());
                next_id
            });
            let ps = inv_start[p] as usize;
            let pe = inv_start[p + 1] as usize;
            let mut set: Vec<u32> = inv[ps..pe].to_vec();
            let at = set.partition_point(|&x| x < id);
            set.insert(at, id);
            inv.extend_from_slice(&set);
            inv_start.push(inv.len() as u32);
        }
        let neighbors = words
            .iter()
            .map(|w| {
                std::array::from_fn(|s| {
                    let mut t = w.clone();
                    push_letter(&mut t, s as u8);
                    index.get(&pack(&t)).copied().unwrap_or(NONE)
                })
            })
            .collect();
        Ball { radius, words, isometries, neighbors, index, wall_index, walls, inv_start, inv }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &[u8]) -> Option<u32> {
        self.index.get(&pack(w)).copied()
    }

    pub fn word(&self, i: u32) -> Word {
        Word::from_raw(self.words[i as usize].clone())
    }

    pub fn center(&self, i: u32) -> Vec3 {
        self.isometries[i as usize].center()
    }

    /// Sorted wall ids of `Inv(i)`.
    pub fn inversions(&self, i: u32) -> &[u32] {
        &self.inv[self.inv_start[i as usize] as usize..self.inv_start[i as usize + 1] as usize]
    }

    pub fn wall(&self, id: u32) -> Wall {
        Wall { reflection: Word::from_raw(self.walls[id as usize].clone()) }
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    /// Combinatorial distance between chambers of the ball.
    pub fn cube_dist(&self, i: u32, j: u32) -> usize {
        let a = self.inversions(i);
        let b = self.inversions(j);
        a.len() + b.len() - 2 * common(a, b)
    }

    /// Inversion sets padded to `width` slots, for branch-free comparisons.
    pub fn padded_inversions(&self, width: usize, pad: u32) -> Vec<u32> {
        let mut out = vec![pad; self.len() * width];
        for i in 0..self.len() {
            let s = self.inversions(i as u32);
            out[i * width..i * width + s.len()].copy_from_slice(s);
        }
        out
    }

    fn lookup(&self, w: &Word) -> Result<u32> {
        self.index_of(w.letters())
            .ok_or_else(|| Error::Scope(format!("chamber {w:?} lies outside the ball of radius {}", self.radius)))
    }

    /// Median of three chambers: the chamber on the majority side of every wall.
    pub fn median(&self, a: &Word, b: &Word, c: &Word) -> Result<Word> {
        let ia = self.lookup(a)?;
        let ib = self.lookup(b)?;
        let ic = self.lookup(c)?;
        let sets = [self.inversions(ia), self.inversions(ib), self.inversions(ic)];
        let mut all: Vec<u32> = sets.iter().flat_map(|s| s.iter().copied()).collect();
        all.sort_unstable();
        let mut target = BTreeSet::new();
        let mut k = 0;
        while k < all.len() {
            let mut j = k;
            while j < all.len() && all[j] == all[k] {
                j += 1;
            }
            if j - k >= 2 {
                target.insert(all[k]);
            }
            k = j;
        }
        let mut cur: u32 = 0;
        while self.inversions(cur).len() < target.len() {
            let w = &self.words[cur as usize];
            let mut moved = false;
            for s in 0..5u8 {
                let key = pack(&wall_of(w, s));
                let Some(&id) = self.wall_index.get(&key) else { continue };
                if target.contains(&id) && self.inversions(cur).binary_search(&id).is_err() {
                    let nb = self.neighbors[cur as usize][s as usize];
                    if nb == NONE {
                        return Err(Error::Scope("median lies outside the ball".into()));
                    }
                    cur = nb;
                    moved = true;
                    break;
                }
            }
            if !moved {
                return Err(Error::Invariant("median walk got stuck".into()));
            }
        }
        Ok(self.word(cur))
    }

    /// Closure of a set of chambers under medians of triples.
    pub fn median_closure(&self, set: &[Word]) -> Result<Vec<Word>> {
        let mut cur: BTreeSet<Word> = set.iter().cloned().collect();
        loop {
            let items: Vec<Word> = cur.iter().cloned().collect();
            let mut grew = false;
            for i in 0..items.len() {
                for j in i + 1..items.len() {
                    for k in j + 1..items.len() {
                        let m = self.median(&items[i], &items[j], &items[k])?;
                        grew |= cur.insert(m);
                    }
                }
            }
            if !grew {
                return Ok(cur.into_iter().collect());
            }
        }
    }

    /// Binary cache bytes: header, ShortLex chamber list, SHA-256 trailer.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        out.extend_from_slice(&self.radius.to_le_bytes());
        out.extend_from_slice(&(self.words.len() as u64).to_le_bytes());
        for w in &self.words {
            out.push(w.len() as u8);
            out.extend_from_slice(w);
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Cache(m.to_string());
        if bytes.len() < 24 + 32 || &bytes[..8] != MAGIC {
            return Err(bad("not a ball cache file"));
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(bad("checksum mismatch"));
        }
        let version = u32::from_le_bytes(body[8..12].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(bad(&format!("cache version {version}, expected {CACHE_VERSION}")));
        }
        let radius = u32::from_le_bytes(body[12..16].try_into().unwrap());
        let count = u64::from_le_bytes(body[16..24].try_into().unwrap());
        if count != ball_size(radius) {
            return Err(bad("chamber count does not match radius"));
        }
        let mut words = Vec::with_capacity(count as usize);
        let mut p = 24;
        for _ in 0..count {
            let n = *body.get(p).ok_or_else(|| bad("truncated"))? as usize;
            let w = body.get(p + 1..p + 1 + n).ok_or_else(|| bad("truncated"))?.to_vec();
            if w.iter().any(|&x| x >= 5) || w.len() > radius as usize {
                return Err(bad("corrupt chamber word"));
            }
            words.push(w);
            p += 1 + n;
        }
        if p != body.len() {
            return Err(bad("trailing bytes"));
        }
        Ok(Ball::from_words(radius, words))
    }

    /// CSV of sphere and ball sizes.
    pub fn summary_csv(&self) -> String {
        let mut sphere = vec![0u64; self.radius as usize + 1];
        for w in &self.words {
            sphere[w.len()] += 1;
        }
        let mut s = String::from("radius,n,sphere,ball\n");
        let mut total = 0;
        for (n, c) in sphere.iter().enumerate() {
            total += c;
            s.push_str(&format!("{},{},{},{}\n", self.radius, n, c, total));
        }
        s
    }
}

fn common(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Cache file locations for a radius.
pub fn cache_paths(dir: &Path, radius: u32) -> (PathBuf, PathBuf) {
    (
        dir.join(format!("ball-r{radius}-v{CACHE_VERSION}.bin")),
        dir.join(format!("ball-r{radius}-v{CACHE_VERSION}.csv")),
    )
}

/// Load a cached ball, or build and store it.
pub fn cached_ball(dir: &Path, radius: u32, budget: &Budget) -> Result<(Ball, bool)> {
    let (bin, csv) = cache_paths(dir, radius);
    if bin.exists() {
        let ball = Ball::from_bytes(&fs::read(&bin)?)?;
        if ball.radius == radius {
            return Ok((ball, true));
        }
        return Err(Error::Cache("radius mismatch".into()));
    }
    let ball = Ball::new(radius, budget)?;
    fs::create_dir_all(dir)?;
    let tmp = bin.with_extension("tmp");
    fs::File::create(&tmp)?.write_all(&ball.to_bytes())?;
    fs::rename(&tmp, &bin)?;
    fs::write(csv, ball.summary_csv())?;
    Ok((ball, false))
}

/// Combinatorial convex hull of a geodesic gallery, with its thickness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Hull {
    pub chambers: Vec<Word>,
    /// Largest distance from a hull chamber to the gallery.
    pub thickness: u32,
}

/// Hull of a geodesic gallery: every chamber on some geodesic between its ends.
///
/// Chambers of the hull correspond to order ideals of the heap of the
/// gallery's word, and the distance to the `k`-th gallery chamber is the
/// size of the symmetric difference with the first `k` heap elements.
pub fn hull_window(gallery: &[Word]) -> Result<Hull> {
    if gallery.is_empty() {
        return Err(Error::Input("empty gallery".into()));
    }
    let mut letters = Vec::with_capacity(gallery.len());
    for pair in gallery.windows(2) {
        let q = quotient(pair[0].letters(), pair[1].letters());
        if q.len() != 1 {
            return Err(Error::Input("consecutive chambers are not adjacent".into()));
        }
        letters.push(q[0]);
    }
    let n = letters.len();
    if n > 127 {
        return Err(Error::Budget { what: "gallery longer than 127 steps".into(), needed: 127 });
    }
    if quotient(gallery[0].letters(), gallery[n].letters()).len() != n {
        return Err(Error::Input("gallery is not geodesic".into()));
    }
    let mut preds = vec![0u128; n];
    for j in 0..n {
        for i in 0..j {
            if letters[i] == letters[j] || !coxeter::commute(letters[i], letters[j]) {
                preds[j] |= 1 << i;
            }
        }
    }
    let mut seen: BTreeSet<u128> = BTreeSet::new();
    let mut stack = vec![0u128];
    seen.insert(0);
    while let Some(ideal) = stack.pop() {
        for j in 0..n {
            if ideal & (1 << j) == 0 && preds[j] & !ideal == 0 {
                let next = ideal | (1 << j);
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    let mut thickness = 0;
    let mut chambers = Vec::with_capacity(seen.len());
    for &ideal in &seen {
        let d = (0..=n)
            .map(|k| {
                let prefix = if k == 128 { u128::MAX } else { (1u128 << k) - 1 };
                (ideal ^ prefix).count_ones()
            })
            .min()
            .unwrap();
        thickness = thickness.max(d);
        let mut w = gallery[0].letters().to_vec();
        for (j, &x) in letters.iter().enumerate() {
            if ideal & (1 << j) != 0 {
                push_letter(&mut w, x);
            }
        }
        chambers.push(Word::from_raw(w));
    }
    chambers.sort();
    Ok(Hull { chambers, thickness })
}

/// Gallery through `count` consecutive chambers of the periodic path of `word`, starting at `start`.
pub fn periodic_gallery(word: &[u8], start: &[u8], count: usize) -> Vec<Word> {
    let mut cur = start.to_vec();
    let mut out = vec![Word::from_raw(cur.clone())];
    for k in 0..count.saturating_sub(1) {
        push_letter(&mut cur, word[k % word.len()]);
        out.push(Word::from_raw(cur.clone()));
    }
    out
}

/// Chamber `g⁻¹` convenience for callers holding words.
pub fn inverse_word(w: &Word) -> Word {
    Word::from_raw(inverse(w.letters()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_two_has_21_chambers() {
        let b = Ball::new(2, &Budget::default()).unwrap();
        assert_eq!(b.len(), 21);
        assert_eq!(b.neighbors[0].iter().filter(|&&x| x != NONE).count(), 5);
    }

    #[test]
    fn distances_agree_with_word_lengths() {
        let b = Ball::new(4, &Budget::default()).unwrap();
        for i in (0..b.len() as u32).step_by(7) {
            for j in (0..b.len() as u32).step_by(5) {
                assert_eq!(b.cube_dist(i, j), cube_dist_words(&b.words[i as usize], &b.words[j as usize]));
            }
        }
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let b = Ball::new(3, &Budget::default()).unwrap();
        let bytes = b.to_bytes();
        let back = Ball::from_bytes(&bytes).unwrap();
        assert_eq!(back.to_bytes(), bytes);
        let mut bad = bytes.clone();
        bad[30] ^= 1;
        assert!(matches!(Ball::from_bytes(&bad), Err(Error::Cache(_))));
    }

    #[test]
    fn hull_of_commuting_square() {
        // e → s0 → s0s1: the hull also contains s1
        let g: Vec<Word> = ["", "0", "01"].iter().map(|s| s.parse().unwrap()).collect();
        let h = hull_window(&g).unwrap();
        assert_eq!(h.chambers.len(), 4);
        assert_eq!(h.thickness, 1);
    }
}
