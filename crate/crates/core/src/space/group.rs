//! Free groups and free-by-finite extensions in normal form.
//!
//! Generators are numbered from 1 in text (`a1`, `a2`, ...) with capital
//! letters for inverses (`A1`). Internally `a_i` is symbol `2(i-1)` and its
//! inverse is `2(i-1) + 1`, so inversion of a symbol is `s ^ 1`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn generator(i: usize) -> Self {
        Symbol((2 * i) as u8)
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Symbol(self.0 ^ 1)
    }

    pub fn generator_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.is_inverse() { 'A' } else { 'a' };
        write!(f, "{c}{}", self.generator_index() + 1)
    }
}

pub type Word = SmallVec<[Symbol; 16]>;

/// Parses `"a1A2"` into symbols; the empty string is the empty word.
pub fn parse_word(text: &str) -> Result<Word> {
    let bytes = text.trim().as_bytes();
    let mut out = Word::new();
    let mut i = 0;
    while i < bytes.len() {
        let inverse = match bytes[i] {
            b'a' => false,
            b'A' => true,
            _ => return Err(Error::MalformedWord(text.to_string())),
        };
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let idx: usize = std::str::from_utf8(&bytes[start..i])
            .ok()
            .and_then(|d| d.parse().ok())
            .filter(|&n: &usize| (1..=127).contains(&n))
            .ok_or_else(|| Error::MalformedWord(text.to_string()))?;
        let s = Symbol::generator(idx - 1);
        out.push(if inverse { s.inverse() } else { s });
    }
    Ok(out)
}

pub fn render_word(word: &[Symbol]) -> String {
    word.iter().map(|s| s.to_string()).collect()
}

/// Appends `rhs` to `acc` with free cancellation at the junction.
pub fn reduce_into(acc: &mut Word, rhs: impl IntoIterator<Item = Symbol>) {
    for s in rhs {
        if acc.last() == Some(&s.inverse()) {
            acc.pop();
        } else {
            acc.push(s);
        }
    }
}

pub fn is_reduced(word: &[Symbol]) -> bool {
    word.windows(2).all(|w| w[1] != w[0].inverse())
}

/// Rank and optional finite permutation group acting on the generator symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    rank: usize,
    perms: Vec<Vec<Symbol>>,
    compose: Vec<Vec<u16>>,
    inverse: Vec<u16>,
}

impl GroupSpec {
    pub fn free(rank: usize) -> Result<Self> {
        Self::with_extension(rank, &[])
    }

    /// Builds the group generated by `generators` (arrays of symbol images in
    /// the order `a1, A1, a2, A2, ...`). Index 0 is always the identity.
    pub fn with_extension(rank: usize, generators: &[Vec<usize>]) -> Result<Self> {
        if rank == 0 || rank > 64 {
            return Err(Error::InvalidRank(rank));
        }
        let n = 2 * rank;
        let mut gens = Vec::new();
        for g in generators {
            if g.len() != n {
                return Err(Error::InvalidExtension(format!(
                    "permutation has length {}, expected {n}",
                    g.len()
                )));
            }
            let mut hit = vec![false; n];
            for &x in g {
                if x >= n || hit[x] {
                    return Err(Error::InvalidExtension(format!("{g:?} is not a bijection")));
                }
                hit[x] = true;
            }
            for s in 0..n {
                if g[s ^ 1] != g[s] ^ 1 {
                    return Err(Error::InvalidExtension(format!(
                        "{g:?} does not commute with inversion"
                    )));
                }
            }
            gens.push(g.iter().map(|&x| Symbol(x as u8)).collect::<Vec<_>>());
        }
        let identity: Vec<Symbol> = (0..n).map(|s| Symbol(s as u8)).collect();
        let mut perms = vec![identity];
        let mut index: HashMap<Vec<Symbol>, usize> = HashMap::from([(perms[0].clone(), 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let p: Vec<Symbol> = perms[i].iter().map(|s| g[s.0 as usize]).collect();
                if !index.contains_key(&p) {
                    if perms.len() >= u16::MAX as usize {
                        return Err(Error::InvalidExtension("finite part too large".into()));
                    }
                    index.insert(p.clone(), perms.len());
                    perms.push(p);
                    queue.push_back(perms.len() - 1);
                }
            }
        }
        let m = perms.len();
        let mut compose = vec![vec![0u16; m]; m];
        let mut inverse = vec![0u16; m];
        for i in 0..m {
            for j in 0..m {
                // (σ_i ∘ σ_j)(s) = σ_i(σ_j(s))
                let p: Vec<Symbol> = perms[j].iter().map(|s| perms[i][s.0 as usize]).collect();
                compose[i][j] = index[&p] as u16;
                if compose[i][j] == 0 {
                    inverse[i] = j as u16;
                }
            }
        }
        Ok(GroupSpec {
            rank,
            perms,
            compose,
            inverse,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn symbol_count(&self) -> usize {
        2 * self.rank
    }

    /// Order of the finite part.
    pub fn finite_order(&self) -> usize {
        self.perms.len()
    }

    pub fn apply_perm(&self, perm: u16, s: Symbol) -> Symbol {
        self.perms[perm as usize][s.0 as usize]
    }

    /// Generators' images, in the layout used by description files.
    pub fn permutation_arrays(&self) -> Vec<Vec<usize>> {
        self.perms
            .iter()
            .skip(1)
            .map(|p| p.iter().map(|s| s.0 as usize).collect())
            .collect()
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if let Some(s) = g.word.iter().find(|s| s.generator_index() >= self.rank) {
            return Err(Error::SymbolOutOfRange(s.to_string()));
        }
        if g.perm as usize >= self.perms.len() {
            return Err(Error::InvalidExtension(format!("unknown finite part {}", g.perm)));
        }
        Ok(())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity()
    }

    /// Normal form of `g · h`: `(w, σ)(w', σ') = (w · σ(w'), σσ')`.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    pub(crate) fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let mut word = g.word.clone();
        if g.perm == 0 {
            reduce_into(&mut word, h.word.iter().copied());
        } else {
            reduce_into(&mut word, h.word.iter().map(|&s| self.apply_perm(g.perm, s)));
        }
        GroupElement {
            word,
            perm: self.compose[g.perm as usize][h.perm as usize],
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let inv = self.inverse[g.perm as usize];
        let word = g
            .word
            .iter()
            .rev()
            .map(|s| self.apply_perm(inv, s.inverse()))
            .collect();
        GroupElement { word, perm: inv }
    }

    /// Parses a pure word, reducing it, and checks the rank.
    pub fn parse(&self, text: &str) -> Result<GroupElement> {
        let raw = parse_word(text)?;
        let mut word = Word::new();
        reduce_into(&mut word, raw);
        let g = GroupElement { word, perm: 0 };
        self.check(&g)?;
        Ok(g)
    }
}

/// Reduced word plus the index of the finite part (0 = identity).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub word: Word,
    pub perm: u16,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            word: Word::new(),
            perm: 0,
        }
    }

    pub fn from_word(word: &[Symbol]) -> Self {
        let mut w = Word::new();
        reduce_into(&mut w, word.iter().copied());
        GroupElement { word: w, perm: 0 }
    }

    pub fn symbol(s: Symbol) -> Self {
        GroupElement {
            word: smallvec::smallvec![s],
            perm: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty() && self.perm == 0
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "ε")?;
        } else {
            write!(f, "{}", render_word(&self.word))?;
        }
        if self.perm != 0 {
            write!(f, "·σ{}", self.perm)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Symbol layout a1, A1, a2, A2: a1 ↔ a2, A1 ↔ A2.
    fn rotation_spec() -> GroupSpec {
        GroupSpec::with_extension(2, &[vec![2, 3, 0, 1]]).unwrap()
    }

    #[test]
    fn free_cancellation() {
        let spec = GroupSpec::free(2).unwrap();
        let g = spec.parse("a1").unwrap();
        let h = spec.parse("A1").unwrap();
        assert!(spec.multiply(&g, &h).unwrap().is_identity());
    }

    #[test]
    fn rotation_conjugates_a1_to_a2() {
        let spec = rotation_spec();
        assert_eq!(spec.finite_order(), 2);
        let r = GroupElement {
            word: Word::new(),
            perm: 1,
        };
        let a1 = spec.parse("a1").unwrap();
        let prod = spec.multiply(&r, &a1).unwrap();
        assert_eq!(render_word(&prod.word), "a2");
        assert_eq!(prod.perm, 1);
        // R a1 R^{-1} = a2
        let conj = spec.mul(&prod, &spec.inverse(&r));
        assert_eq!(conj, spec.parse("a2").unwrap());
    }

    #[test]
    fn hand_reduction() {
        let spec = GroupSpec::free(2).unwrap();
        let g = spec.parse("a1a2").unwrap();
        let h = GroupElement {
            word: parse_word("A2a2").unwrap(),
            perm: 0,
        };
        // h is not reduced as given; the product reduces a2·A2 then appends a2.
        let p = spec.mul(&g, &h);
        assert_eq!(render_word(&p.word), "a1a2");
        let h2 = spec.parse("A2a2").unwrap();
        assert!(h2.is_identity());
        let p2 = spec.multiply(&g, &spec.parse("a2").unwrap()).unwrap();
        assert_eq!(render_word(&p2.word), "a1a2a2");
    }

    #[test]
    fn rank_checked() {
        let spec = GroupSpec::free(2).unwrap();
        assert!(matches!(spec.parse("a3"), Err(Error::SymbolOutOfRange(_))));
        assert!(GroupSpec::free(0).is_err());
    }

    #[test]
    fn extension_must_commute_with_inversion() {
        assert!(GroupSpec::with_extension(2, &[vec![2, 0, 3, 1]]).is_err());
        assert!(GroupSpec::with_extension(2, &[vec![0, 0, 2, 3]]).is_err());
    }

    fn element(rank: usize, perms: usize) -> impl Strategy<Value = GroupElement> {
        (
            proptest::collection::vec(0..(2 * rank) as u8, 0..8),
            0..perms as u16,
        )
            .prop_map(|(w, p)| {
                let word: Vec<Symbol> = w.into_iter().map(Symbol).collect();
                let mut g = GroupElement::from_word(&word);
                g.perm = p;
                g
            })
    }

    proptest! {
        #[test]
        fn associative_with_inverses(
            g in element(2, 2), h in element(2, 2), k in element(2, 2)
        ) {
            let spec = rotation_spec();
            let left = spec.mul(&spec.mul(&g, &h), &k);
            let right = spec.mul(&g, &spec.mul(&h, &k));
            prop_assert_eq!(&left, &right);
            prop_assert!(is_reduced(&left.word));
            prop_assert!(spec.mul(&spec.inverse(&g), &g).is_identity());
            prop_assert!(spec.mul(&g, &spec.inverse(&g)).is_identity());
        }
    }
}
