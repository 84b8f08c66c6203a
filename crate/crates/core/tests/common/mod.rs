#![allow(dead_code)]

use geolab::flow::{extend_word, GeodesicPath};
use geolab::lab::examples::{build_example, ExampleName};
use geolab::space::{Cover, GroupElement, Length, SideId, Symbol};
use geolab::symbolic::{local_geodesic_shift, ShiftSpace};
use proptest::prelude::*;

pub fn tree(l: usize) -> (Cover, ShiftSpace) {
    let cover = build_example(&ExampleName::Tree(l)).unwrap().cover;
    let shift = local_geodesic_shift(cover.base()).unwrap();
    (cover, shift)
}

/// Non-backtracking side word from choices: the first picks any side, later ones skip the reversal.
pub fn side_word(cover: &Cover, choices: &[u8]) -> Vec<u32> {
    let sides: Vec<SideId> = cover.base().sides().collect();
    let mut out: Vec<SideId> = Vec::new();
    for &c in choices {
        let allowed: Vec<SideId> = sides
            .iter()
            .copied()
            .filter(|s| out.last().is_none_or(|l| *s != l.reverse()))
            .collect();
        out.push(allowed[c as usize % allowed.len()]);
    }
    out.into_iter().map(|s| s.0).collect()
}

/// Reduced group element from choices over `2·rank` symbols.
pub fn element(rank: usize, choices: &[u8]) -> GroupElement {
    let mut word: Vec<Symbol> = Vec::new();
    for &c in choices {
        let s = Symbol::generator(c as usize % rank);
        let s = if c as usize / rank % 2 == 1 { s.inverse() } else { s };
        if word.last().is_some_and(|l| l.inverse() == s) {
            word.pop();
        } else {
            word.push(s);
        }
    }
    GroupElement::from_word(&word)
}

#[derive(Clone, Debug)]
pub struct LineSeed {
    pub word: Vec<u8>,
    pub start: i64,
    pub deck: Vec<u8>,
    pub quarter: i64,
}

pub fn line_seed(max_deck: usize) -> impl Strategy<Value = LineSeed> {
    (
        prop::collection::vec(any::<u8>(), 3..7),
        -2i64..=0,
        prop::collection::vec(any::<u8>(), 0..=max_deck),
        0i64..4,
    )
        .prop_map(|(word, start, deck, quarter)| LineSeed { word, start, deck, quarter })
}

/// A line coded by a random admissible word, moved by a deck element and flowed by a quarter step.
pub fn line(cover: &Cover, shift: &ShiftSpace, seed: &LineSeed) -> GeodesicPath {
    let w = side_word(cover, &seed.word);
    let word = extend_word(shift, &w, seed.start).unwrap();
    let anchor = cover.basepoint();
    let path = GeodesicPath::new(cover, anchor, word, Length::from_integer(0)).unwrap();
    let g = element(cover.spec().rank(), &seed.deck);
    path.translate(cover, &g).flow_shift(Length::new(seed.quarter, 4))
}
