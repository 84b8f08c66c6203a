//! Unit-speed lines in a cover, coded by bi-infinite side words.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{Cover, CoverPatch, CoverVertex, GraphPoint, GroupElement, Length, MetricGraph, SideId};
use crate::symbolic::shift::{Presentation, ShiftSpace};

/// A bi-infinite side word: `left^∞ · core · right^∞` with `core[0]` at index `start`.
/// An empty period leaves that side undefined (a windowed word).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BiWord {
    pub left: Vec<SideId>,
    pub core: Vec<SideId>,
    pub right: Vec<SideId>,
    pub start: i64,
}

impl BiWord {
    pub fn new(left: Vec<SideId>, core: Vec<SideId>, right: Vec<SideId>, start: i64) -> Self {
        BiWord { left, core, right, start }
    }

    pub fn periodic(period: Vec<SideId>) -> Self {
        BiWord { left: period.clone(), core: Vec::new(), right: period, start: 0 }
    }

    pub fn windowed(core: Vec<SideId>, start: i64) -> Self {
        BiWord { left: Vec::new(), core, right: Vec::new(), start }
    }

    /// The side traversed between positions `i` and `i + 1`.
    pub fn symbol(&self, i: i64) -> Option<SideId> {
        let end = self.start + self.core.len() as i64;
        if i < self.start {
            let p = self.left.len() as i64;
            (p > 0).then(|| self.left[(i - self.start).rem_euclid(p) as usize])
        } else if i < end {
            Some(self.core[(i - self.start) as usize])
        } else {
            let p = self.right.len() as i64;
            (p > 0).then(|| self.right[(i - end).rem_euclid(p) as usize])
        }
    }

    /// Smallest `p` with `symbol(i + p) = symbol(i)` for all `i`, if any.
    pub fn period(&self) -> Option<usize> {
        let p = self.right.len();
        if p == 0 || !self.left.len().is_multiple_of(p) && !p.is_multiple_of(self.left.len()) {
            return None;
        }
        let lo = self.start - 2 * (self.left.len().max(p) as i64);
        let hi = self.start + self.core.len() as i64 + 2 * p as i64;
        (1..=p)
            .filter(|q| p.is_multiple_of(*q))
            .find(|&q| (lo..hi).all(|i| self.symbol(i) == self.symbol(i + q as i64)))
    }

    /// Re-index so that old position `by` becomes position 0.
    pub fn reindexed(&self, by: i64) -> Self {
        let mut w = self.clone();
        w.start -= by;
        if w.core.is_empty() && !w.right.is_empty() && w.left == w.right {
            // keep purely periodic words in a canonical phase
            let p = w.right.len() as i64;
            let k = w.start.rem_euclid(p) as usize;
            w.right.rotate_right(k);
            w.left = w.right.clone();
            w.start = 0;
        }
        w
    }
}

/// A unit-speed line `γ` with `γ(s)` the point at position `position + s` along
/// `word`, where position 0 is the vertex `anchor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeodesicPath {
    pub anchor: CoverVertex,
    pub word: BiWord,
    pub position: Length,
}

impl GeodesicPath {
    pub fn new(cover: &Cover, anchor: CoverVertex, word: BiWord, position: Length) -> Result<Self> {
        let base = cover.base();
        if !base.has_unit_lengths() {
            return Err(Error::NonUnitLengths);
        }
        check_word(base, &word, anchor.base as usize)?;
        Ok(GeodesicPath { anchor, word, position })
    }

    /// The periodic line through `anchor` repeating `period`, with `γ(0) = anchor`.
    pub fn periodic(cover: &Cover, anchor: CoverVertex, period: Vec<SideId>) -> Result<Self> {
        GeodesicPath::new(cover, anchor, BiWord::periodic(period), Length::zero())
    }

    /// Offset of `γ(0)` past the vertex at `floor(position)`, in `[0, 1)`.
    pub fn offset(&self) -> Length {
        self.position - self.position.floor()
    }

    pub fn flow_shift(&self, t: Length) -> Self {
        GeodesicPath { position: self.position + t, ..self.clone() }
    }

    pub fn translate(&self, cover: &Cover, g: &GroupElement) -> Self {
        GeodesicPath { anchor: cover.translate(g, &self.anchor), ..self.clone() }
    }

    /// The same line with the anchor moved to `floor(position)` and the word re-indexed.
    pub fn rebased(&self, cover: &Cover) -> Result<Self> {
        let k = self.position.floor().to_integer();
        Ok(GeodesicPath {
            anchor: self.vertex_at(cover, k)?,
            word: self.word.reindexed(k),
            position: self.offset(),
        })
    }

    fn symbol(&self, i: i64) -> Result<SideId> {
        self.word
            .symbol(i)
            .ok_or(Error::HorizonTooShort(i as f64))
    }

    /// The vertex at integer position `k`.
    pub fn vertex_at(&self, cover: &Cover, k: i64) -> Result<CoverVertex> {
        let mut v = self.anchor.clone();
        if k >= 0 {
            for i in 0..k {
                v = cover.step(&v, self.symbol(i)?);
            }
        } else {
            for i in (k..0).rev() {
                v = cover.step(&v, self.symbol(i)?.reverse());
            }
        }
        Ok(v)
    }

    /// Vertices at positions `lo..=hi`.
    pub fn vertices(&self, cover: &Cover, lo: i64, hi: i64) -> Result<Vec<CoverVertex>> {
        let mut out = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        if hi < lo {
            return Ok(out);
        }
        let mut v = self.vertex_at(cover, lo)?;
        out.push(v.clone());
        for i in lo..hi {
            v = cover.step(&v, self.symbol(i)?);
            out.push(v.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, cover: &Cover, s: Length) -> Result<GraphPoint> {
        let p = self.position + s;
        let k = p.floor().to_integer();
        let v = self.vertex_at(cover, k)?;
        let frac = p - p.floor();
        if frac.is_zero() {
            Ok(GraphPoint::Vertex(v))
        } else {
            GraphPoint::on_edge(cover, v, self.symbol(k)?, frac)
        }
    }

    /// No immediate backtracking on positions `lo..hi`.
    pub fn is_locally_geodesic(&self, lo: i64, hi: i64) -> Result<bool> {
        for i in lo..hi - 1 {
            if self.symbol(i + 1)? == self.symbol(i)?.reverse() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the segment between positions `lo` and `hi` realizes the distance
    /// between its endpoints, hence is geodesic on every subsegment.
    pub fn is_geodesic_on(&self, patch: &CoverPatch, lo: i64, hi: i64) -> Result<bool> {
        let cover = patch.cover();
        let a = self.vertex_at(cover, lo)?;
        let b = self.vertex_at(cover, hi)?;
        let d = if cover.has_word_metric() {
            cover.vertex_distance(&a, &b, Length::from_integer(hi - lo))?
        } else {
            patch.distance(&GraphPoint::Vertex(a), &GraphPoint::Vertex(b))?
        };
        Ok(d == Length::from_integer(hi - lo))
    }
}

fn check_word(base: &MetricGraph, word: &BiWord, anchor_base: usize) -> Result<()> {
    let span = word.left.len().max(word.right.len()) as i64 + 1;
    let lo = word.start.min(0) - span;
    let hi = (word.start + word.core.len() as i64).max(0) + span;
    let mut prev: Option<SideId> = None;
    for i in lo..hi {
        let cur = word.symbol(i);
        if let (Some(a), Some(b)) = (prev, cur) {
            if base.head(a) != base.tail(b) {
                return Err(Error::MalformedWord(format!("sides do not join at position {i}")));
            }
        }
        prev = cur;
    }
    let at_anchor = word.symbol(0).map(|s| base.tail(s)).or_else(|| word.symbol(-1).map(|s| base.head(s)));
    match at_anchor {
        Some(v) if v != anchor_base => Err(Error::MalformedWord("word does not pass through the anchor".into())),
        None => Err(Error::MalformedWord("word is undefined at the anchor".into())),
        _ => Ok(()),
    }
}

/// Extends a finite admissible word of a de Bruijn shift to an eventually periodic
/// bi-infinite word, following the first admissible continuation on each side.
/// The word occupies positions `start..start + word.len()`.
pub fn extend_word(shift: &ShiftSpace, word: &[u32], start: i64) -> Result<BiWord> {
    let Presentation::DeBruijn { window } = *shift.presentation() else {
        return Err(Error::InvalidParameter("extension needs a window presentation".into()));
    };
    if word.is_empty() {
        return Err(Error::MalformedWord(String::new()));
    }
    let (right_pre, right) = continue_right(shift, window, word)?;
    let alphabet = shift.alphabet();
    let mirrored: Vec<u32> = word.iter().rev().map(|&s| alphabet.inverse(s)).collect();
    let (left_pre, left) = continue_right(shift, window, &mirrored)?;
    let flip = |w: &[u32]| -> Vec<SideId> { w.iter().rev().map(|&s| SideId(alphabet.inverse(s))).collect() };
    let mut core = flip(&left_pre);
    let core_start = start - core.len() as i64;
    core.extend(word.iter().map(|&s| SideId(s)));
    core.extend(right_pre.iter().map(|&s| SideId(s)));
    Ok(BiWord::new(flip(&left), core, right.iter().map(|&s| SideId(s)).collect(), core_start))
}

/// Follows first transitions from the state at the end of `word` until a state repeats.
/// Returns the symbols before the cycle and the cycle itself.
fn continue_right(shift: &ShiftSpace, window: usize, word: &[u32]) -> Result<(Vec<u32>, Vec<u32>)> {
    let states = shift.states();
    let mut pre: Vec<u32> = Vec::new();
    let state = if word.len() >= window {
        let tail = &word[word.len() - window..];
        states
            .binary_search_by(|s| s.as_slice().cmp(tail))
            .map_err(|_| Error::Inadmissible(shift.render(word)))?
    } else {
        // first state ending with the word; its extra prefix is dropped since it lies left of the word
        let i = states
            .iter()
            .position(|s| s.ends_with(word))
            .ok_or_else(|| Error::Inadmissible(shift.render(word)))?;
        i
    };
    if !shift.is_admissible(word) {
        return Err(Error::Inadmissible(shift.render(word)));
    }
    let mut seen = vec![usize::MAX; states.len()];
    let mut cur = state;
    loop {
        if seen[cur] != usize::MAX {
            let cycle = pre.split_off(seen[cur]);
            return Ok((pre, cycle));
        }
        seen[cur] = pre.len();
        let &(next, sym) = shift
            .transitions(cur)
            .first()
            .ok_or(Error::EmptyShift)?;
        pre.push(sym);
        cur = next as usize;
    }
}
