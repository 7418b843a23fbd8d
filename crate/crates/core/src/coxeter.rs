//! The right-angled Coxeter group of the pentagon.
//!
//! Generators `s0..s4` are reflections in the sides of `P₀`; `sᵢ` and `sⱼ`
//! commute exactly when the sides are adjacent (`|i − j| ≡ ±1 mod 5`).
//! Elements are stored as ShortLex normal forms: the lexicographically
//! least reduced word.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{HPoint, Isometry};
use crate::tiling::pentagon;

pub const RANK: u8 = 5;

/// Whether `sᵢ` and `sⱼ` commute (for `i ≠ j`).
#[inline]
pub fn commute(i: u8, j: u8) -> bool {
    let d = (i + 5 - j) % 5;
    d == 1 || d == 4
}

/// Letters that do not commute with `x`, including `x` itself.
#[inline]
fn blockers(x: u8) -> u8 {
    (1 << x) | (1 << ((x + 2) % 5)) | (1 << ((x + 3) % 5))
}

/// A word in the generators. Ordered ShortLex.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(&x) = letters.iter().find(|&&x| x >= RANK) {
            return Err(Error::Input(format!("letter {x} out of range")));
        }
        Ok(Word(letters))
    }

    /// Caller guarantees letters are in range.
    pub fn from_raw(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Normal form of the element this word represents.
    pub fn normalized(&self) -> Word {
        Word(normal_form(&self.0))
    }

    pub fn is_normal(&self) -> bool {
        normal_form(&self.0) == self.0
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "e")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Digit strings such as `"0214"`; `""` and `"e"` are the identity.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word(Vec::new()));
        }
        let mut v = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch.to_digit(10) {
                Some(d) if d < RANK as u32 => v.push(d as u8),
                _ => return Err(Error::Input(format!("invalid letter {ch:?} in word {s:?}"))),
            }
        }
        Ok(Word(v))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Replace the normal form `nf` by that of `nf·s`. Returns whether the length grew.
pub fn push_letter(nf: &mut Vec<u8>, s: u8) -> bool {
    let n = nf.len();
    let mut k = n;
    while k > 0 {
        let x = nf[k - 1];
        if x == s {
            nf.remove(k - 1);
            return false;
        }
        if !commute(x, s) {
            break;
        }
        k -= 1;
    }
    // s may slide left through the commuting suffix; park it before the first larger letter
    let pos = (k..n).find(|&i| nf[i] > s).unwrap_or(n);
    nf.insert(pos, s);
    true
}

/// ShortLex normal form of an arbitrary word.
pub fn normal_form(letters: &[u8]) -> Vec<u8> {
    let mut nf = Vec::with_capacity(letters.len());
    for &s in letters {
        push_letter(&mut nf, s);
    }
    nf
}

/// Whether `nf ++ [s]` is again a normal form (a child in the normal-form tree).
#[inline]
pub fn extends(nf: &[u8], s: u8) -> bool {
    for &x in nf.iter().rev() {
        if x == s {
            return false;
        }
        if !commute(x, s) {
            return true;
        }
        if x > s {
            return false;
        }
    }
    true
}

/// Bitmask of left descents.
pub fn left_descents(w: &[u8]) -> u8 {
    let mut blocked = 0u8;
    let mut out = 0u8;
    for &x in w {
        if blocked & (1 << x) == 0 {
            out |= 1 << x;
        }
        blocked |= blockers(x);
        if blocked == 0b11111 {
            break;
        }
    }
    out
}

/// Bitmask of right descents.
pub fn right_descents(w: &[u8]) -> u8 {
    let mut blocked = 0u8;
    let mut out = 0u8;
    for &x in w.iter().rev() {
        if blocked & (1 << x) == 0 {
            out |= 1 << x;
        }
        blocked |= blockers(x);
        if blocked == 0b11111 {
            break;
        }
    }
    out
}

/// Positions of the left-movable first occurrence and right-movable last occurrence of each letter.
fn descent_positions(w: &[u8]) -> ([Option<usize>; 5], [Option<usize>; 5]) {
    let mut first = [None; 5];
    let mut last = [None; 5];
    let mut blocked = 0u8;
    for (i, &x) in w.iter().enumerate() {
        if blocked & (1 << x) == 0 {
            first[x as usize] = Some(i);
        }
        blocked |= blockers(x);
    }
    blocked = 0;
    for (i, &x) in w.iter().enumerate().rev() {
        if blocked & (1 << x) == 0 {
            last[x as usize] = Some(i);
        }
        blocked |= blockers(x);
    }
    (first, last)
}

/// A letter `x` with `w = x·v·x` reduced, if any.
pub fn conjugation_shortening(w: &[u8]) -> Option<u8> {
    let (first, last) = descent_positions(w);
    (0..5u8).find(|&x| matches!((first[x as usize], last[x as usize]), (Some(i), Some(j)) if i != j))
}

/// No letter can be cancelled from both ends at once.
pub fn is_cyclically_reduced(w: &[u8]) -> bool {
    conjugation_shortening(w).is_none()
}

/// A letter occurring once and commuting with every other letter of `w`.
pub fn central_letter(w: &[u8]) -> Option<u8> {
    let (first, last) = descent_positions(w);
    (0..5u8).find(|&x| matches!((first[x as usize], last[x as usize]), (Some(i), Some(j)) if i == j))
        .filter(|_| w.len() > 1)
}

/// Normal form of the inverse.
pub fn inverse(nf: &[u8]) -> Vec<u8> {
    let rev: Vec<u8> = nf.iter().rev().copied().collect();
    normal_form(&rev)
}

/// Normal form of `a·b`.
pub fn multiply(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut nf = a.to_vec();
    for &s in b {
        push_letter(&mut nf, s);
    }
    nf
}

/// Normal form of `u⁻¹·v`.
pub fn quotient(u: &[u8], v: &[u8]) -> Vec<u8> {
    let mut nf = inverse(u);
    for &s in v {
        push_letter(&mut nf, s);
    }
    nf
}

/// Product of the side reflections along a word.
pub fn isometry_of(letters: &[u8]) -> Isometry {
    let pent = pentagon();
    letters.iter().fold(Isometry::IDENTITY, |m, &s| m.then_reflect(&pent.polars[s as usize]))
}

/// Pack a normal form of length ≤ 42 into a hashable integer.
#[inline]
pub fn pack(nf: &[u8]) -> u128 {
    debug_assert!(nf.len() <= 42);
    nf.iter().fold(0u128, |acc, &x| (acc << 3) | (x as u128 + 1))
}

pub fn unpack(mut key: u128) -> Vec<u8> {
    let mut v = Vec::new();
    while key != 0 {
        v.push((key & 7) as u8 - 1);
        key >>= 3;
    }
    v.reverse();
    v
}

/// A group element in normal form, with its isometry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    pub word: Word,
    #[serde(skip)]
    pub iso: Isometry,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
    }
}

impl Eq for GroupElement {}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { word: Word::default(), iso: Isometry::IDENTITY }
    }

    /// Element represented by any word.
    pub fn new(w: &Word) -> Self {
        Self::from_normal(normal_form(w.letters()))
    }

    /// Caller guarantees `nf` is a normal form.
    pub fn from_normal(nf: Vec<u8>) -> Self {
        let iso = isometry_of(&nf);
        GroupElement { word: Word(nf), iso }
    }

    pub fn generator(i: u8) -> Result<Self> {
        Ok(Self::new(&Word::new(vec![i])?))
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        Self::from_normal(multiply(self.word.letters(), other.word.letters()))
    }

    pub fn inverse(&self) -> GroupElement {
        Self::from_normal(inverse(self.word.letters()))
    }

    /// Image of the origin, the center of the chamber `g·P₀`.
    pub fn center(&self) -> HPoint {
        HPoint(self.iso.center())
    }
}

/// Depth-first walk of the normal-form tree up to `max_len`, with isometries.
///
/// The callback returns whether to descend below the visited node.
pub fn walk_tree(max_len: usize, mut visit: impl FnMut(&[u8], &Isometry) -> bool) {
    let pent = pentagon();
    let mut word: Vec<u8> = Vec::with_capacity(max_len);
    let mut mats: Vec<Isometry> = vec![Isometry::IDENTITY];
    let mut next: Vec<u8> = vec![0];
    if !visit(&word, &mats[0]) || max_len == 0 {
        return;
    }
    while let Some(s) = next.last_mut() {
        if *s >= RANK {
            next.pop();
            mats.pop();
            word.pop();
            continue;
        }
        let letter = *s;
        *s += 1;
        if !extends(&word, letter) {
            continue;
        }
        let m = mats.last().unwrap().then_reflect(&pent.polars[letter as usize]);
        word.push(letter);
        let descend = visit(&word, &m);
        if descend && word.len() < max_len {
            mats.push(m);
            next.push(0);
        } else {
            word.pop();
        }
    }
}

/// Depth-first walk of the normal-form tree up to `max_len`, words only.
pub fn walk_words(max_len: usize, mut visit: impl FnMut(&[u8]) -> bool) {
    let mut word: Vec<u8> = Vec::with_capacity(max_len);
    let mut next: Vec<u8> = vec![0];
    if !visit(&word) || max_len == 0 {
        return;
    }
    while let Some(s) = next.last_mut() {
        if *s >= RANK {
            next.pop();
            word.pop();
            continue;
        }
        let letter = *s;
        *s += 1;
        if !extends(&word, letter) {
            continue;
        }
        word.push(letter);
        if visit(&word) && word.len() < max_len {
            next.push(0);
        } else {
            word.pop();
        }
    }
}

/// Sphere sizes `|S(0)|..=|S(n)|` by counting the normal-form tree.
pub fn sphere_sizes(n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n + 1];
    walk_words(n, |w| {
        out[w.len()] += 1;
        true
    });
    out
}

/// ShortLex-sorted normal forms of length exactly `n`.
pub fn sphere(n: usize) -> Vec<Vec<u8>> {
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for w in &layer {
            for s in 0..RANK {
                if extends(w, s) {
                    let mut t = w.clone();
                    t.push(s);
                    next.push(t);
                }
            }
        }
        layer = next;
    }
    layer
}

/// ShortLex-sorted normal forms of length at most `n`.
pub fn ball(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for w in &layer {
            for s in 0..RANK {
                if extends(w, s) {
                    let mut t = w.clone();
                    t.push(s);
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Coefficients of `(1 + t)² / (1 − 3t + t²)` up to `tⁿ`.
pub fn growth_series(n: usize) -> Vec<u64> {
    let num = [1i64, 2, 1];
    let mut c: Vec<i64> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut v = *num.get(k).unwrap_or(&0);
        if k >= 1 {
            v += 3 * c[k - 1];
        }
        if k >= 2 {
            v -= c[k - 2];
        }
        c.push(v);
    }
    c.into_iter().map(|x| x as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_graph_is_a_pentagon() {
        for i in 0..5u8 {
            let partners: Vec<u8> = (0..5).filter(|&j| j != i && commute(i, j)).collect();
            assert_eq!(partners.len(), 2);
        }
        assert!(commute(0, 4) && commute(0, 1) && !commute(0, 2));
    }

    #[test]
    fn small_normal_forms() {
        assert_eq!(normal_form(&[1, 0]), vec![0, 1]);
        assert_eq!(normal_form(&[2, 0]), vec![2, 0]);
        assert_eq!(normal_form(&[0, 1, 0]), vec![1]);
        assert_eq!(normal_form(&[0, 2, 0, 2]), vec![0, 2, 0, 2]);
        assert_eq!(normal_form(&[4, 1, 0]), vec![0, 4, 1]);
    }

    #[test]
    fn sphere_sizes_match_series() {
        let counted = sphere_sizes(15);
        assert_eq!(counted, growth_series(15));
        assert_eq!(counted[..6], [1, 5, 15, 40, 105, 275]);
        for n in 0..8 {
            assert_eq!(sphere(n).len() as u64, counted[n]);
        }
    }

    #[test]
    fn word_round_trip() {
        let w: Word = "0214".parse().unwrap();
        assert_eq!(w.to_string(), "0214");
        assert!("05".parse::<Word>().is_err());
        assert!("".parse::<Word>().unwrap().is_empty());
    }

    #[test]
    fn pack_round_trip() {
        for w in ball(4) {
            assert_eq!(unpack(pack(&w)), w);
        }
    }
}
