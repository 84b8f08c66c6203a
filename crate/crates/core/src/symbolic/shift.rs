//! Subshifts presented by edge-labeled graphs.
//!
//! Shifts of finite type are stored as de Bruijn graphs: states are the
//! admissible words of the window length `L`, and `w → w'` whenever the two
//! overlap in `L − 1` symbols and the joined word of length `L + 1` is admissible.
//! Symbol quotients are stored as deterministic (right-resolving) presentations.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::alphabet::InvolutiveAlphabet;
use crate::error::{Error, Result};
use crate::space::{CoverPatch, CoverVertex, Length, MetricGraph, SideId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    LocalGeodesic,
    Geodesic { window: usize },
    Quotient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Presentation {
    /// States are words of length `window`.
    DeBruijn { window: usize },
    /// States are sets of states of an underlying presentation.
    Deterministic,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftSpace {
    alphabet: InvolutiveAlphabet,
    presentation: Presentation,
    /// De Bruijn: the state word. Deterministic: the underlying states it stands for.
    states: Vec<Vec<u32>>,
    /// `(target, label)` pairs sorted by label then target.
    transitions: Vec<Vec<(u32, u32)>>,
    provenance: Provenance,
    /// Words that are forbidden although every proper subword is allowed.
    forbidden: Vec<Vec<u32>>,
}

impl ShiftSpace {
    /// Builds a de Bruijn shift from its admissible words of lengths `L` and `L + 1`,
    /// then prunes states that cannot be extended both ways.
    pub fn from_words(
        alphabet: InvolutiveAlphabet,
        window: usize,
        states: Vec<Vec<u32>>,
        admissible_next: impl Fn(&[u32]) -> bool,
        provenance: Provenance,
        forbidden: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidParameter("window must be at least 1".into()));
        }
        let mut states = states;
        states.sort();
        states.dedup();
        let index: HashMap<&[u32], u32> = states
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i as u32))
            .collect();
        let mut transitions = vec![Vec::new(); states.len()];
        let mut joined = Vec::with_capacity(window + 1);
        for (i, w) in states.iter().enumerate() {
            for s in 0..alphabet.len() as u32 {
                joined.clear();
                joined.extend_from_slice(w);
                joined.push(s);
                if let Some(&j) = index.get(&joined[1..]) {
                    if admissible_next(&joined) {
                        transitions[i].push((j, s));
                    }
                }
            }
        }
        let shift = ShiftSpace {
            alphabet,
            presentation: Presentation::DeBruijn { window },
            states,
            transitions,
            provenance,
            forbidden,
        };
        shift.pruned()
    }

    pub(crate) fn from_parts(
        alphabet: InvolutiveAlphabet,
        presentation: Presentation,
        states: Vec<Vec<u32>>,
        transitions: Vec<Vec<(u32, u32)>>,
        provenance: Provenance,
    ) -> Result<Self> {
        ShiftSpace {
            alphabet,
            presentation,
            states,
            transitions,
            provenance,
            forbidden: Vec::new(),
        }
        .pruned()
    }

    /// Removes states without predecessors or successors until none remain.
    fn pruned(mut self) -> Result<Self> {
        let n = self.states.len();
        let mut alive = vec![true; n];
        loop {
            let mut indeg = vec![0usize; n];
            let mut outdeg = vec![0usize; n];
            for i in (0..n).filter(|&i| alive[i]) {
                for &(j, _) in &self.transitions[i] {
                    if alive[j as usize] {
                        outdeg[i] += 1;
                        indeg[j as usize] += 1;
                    }
                }
            }
            let mut changed = false;
            for i in 0..n {
                if alive[i] && (indeg[i] == 0 || outdeg[i] == 0) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut renumber = vec![u32::MAX; n];
        let mut k = 0u32;
        for i in 0..n {
            if alive[i] {
                renumber[i] = k;
                k += 1;
            }
        }
        let mut states = Vec::with_capacity(k as usize);
        let mut transitions = Vec::with_capacity(k as usize);
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            states.push(std::mem::take(&mut self.states[i]));
            let mut out: Vec<(u32, u32)> = self.transitions[i]
                .iter()
                .filter(|(j, _)| alive[*j as usize])
                .map(|&(j, l)| (renumber[j as usize], l))
                .collect();
            out.sort_by_key(|&(j, l)| (l, j));
            transitions.push(out);
        }
        if states.is_empty() {
            return Err(Error::EmptyShift);
        }
        self.states = states;
        self.transitions = transitions;
        Ok(self)
    }

    pub fn alphabet(&self) -> &InvolutiveAlphabet {
        &self.alphabet
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn window(&self) -> Option<usize> {
        match self.presentation {
            Presentation::DeBruijn { window } => Some(window),
            Presentation::Deterministic => None,
        }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn forbidden(&self) -> &[Vec<u32>] {
        &self.forbidden
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn transitions(&self, i: usize) -> &[(u32, u32)] {
        &self.transitions[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.transitions[i].len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.states.len()];
        for t in &self.transitions {
            for &(j, _) in t {
                d[j as usize] += 1;
            }
        }
        d
    }

    /// Symbols that occur in some point of the shift.
    pub fn used_symbols(&self) -> Vec<u32> {
        let mut used: Vec<u32> = self.transitions.iter().flatten().map(|&(_, l)| l).collect();
        used.sort();
        used.dedup();
        used
    }

    /// Number of admissible words of length `n`, exactly.
    pub fn word_count(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        match self.presentation {
            Presentation::DeBruijn { window } if n >= window => {
                let mut v = vec![BigUint::one(); self.states.len()];
                for _ in window..n {
                    v = self.step_counts(&v);
                }
                v.into_iter().sum()
            }
            Presentation::DeBruijn { .. } => {
                let mut prefixes: Vec<&[u32]> = self.states.iter().map(|w| &w[..n]).collect();
                prefixes.sort();
                prefixes.dedup();
                BigUint::from(prefixes.len())
            }
            Presentation::Deterministic => self.label_word_count(n),
        }
    }

    /// `v'_i = Σ_{i→j} v_j`: paths one step longer, counted from their start.
    fn step_counts(&self, v: &[BigUint]) -> Vec<BigUint> {
        self.transitions
            .iter()
            .map(|t| t.iter().fold(BigUint::zero(), |acc, &(j, _)| acc + &v[j as usize]))
            .collect()
    }

    /// Distinct label sequences of paths of length `n`, counted through the
    /// determinized presentation started from the set of all states.
    fn label_word_count(&self, n: usize) -> BigUint {
        let all: Vec<u32> = (0..self.states.len() as u32).collect();
        let mut layer: BTreeMap<Vec<u32>, BigUint> = BTreeMap::from([(all, BigUint::one())]);
        for _ in 0..n {
            let mut next: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
            for (set, count) in &layer {
                let mut by_label: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
                for &i in set {
                    for &(j, l) in &self.transitions[i as usize] {
                        by_label.entry(l).or_default().push(j);
                    }
                }
                for (_, mut targets) in by_label {
                    targets.sort();
                    targets.dedup();
                    *next.entry(targets).or_insert_with(BigUint::zero) += count;
                }
            }
            layer = next;
        }
        layer.into_values().sum()
    }

    /// All admissible words of length `len`, in lexicographic symbol order.
    pub fn words(&self, len: usize) -> Vec<Vec<u32>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        match self.presentation {
            Presentation::DeBruijn { window } if len >= window => {
                let mut order: Vec<usize> = (0..self.states.len()).collect();
                order.sort_by(|&a, &b| self.states[a].cmp(&self.states[b]));
                let mut word = Vec::with_capacity(len);
                for i in order {
                    word.clear();
                    word.extend_from_slice(&self.states[i]);
                    self.extend_words(i, len, &mut word, &mut out);
                }
            }
            Presentation::DeBruijn { .. } => {
                out = self.states.iter().map(|w| w[..len].to_vec()).collect();
                out.sort();
                out.dedup();
            }
            Presentation::Deterministic => {
                let all: Vec<u32> = (0..self.states.len() as u32).collect();
                let mut word = Vec::with_capacity(len);
                self.extend_label_words(&all, len, &mut word, &mut out);
            }
        }
        out
    }

    fn extend_words(&self, state: usize, len: usize, word: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if word.len() == len {
            out.push(word.clone());
            return;
        }
        for &(j, l) in &self.transitions[state] {
            word.push(l);
            self.extend_words(j as usize, len, word, out);
            word.pop();
        }
    }

    fn extend_label_words(&self, set: &[u32], len: usize, word: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if word.len() == len {
            out.push(word.clone());
            return;
        }
        let mut by_label: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &i in set {
            for &(j, l) in &self.transitions[i as usize] {
                by_label.entry(l).or_default().push(j);
            }
        }
        for (l, mut targets) in by_label {
            targets.sort();
            targets.dedup();
            word.push(l);
            self.extend_label_words(&targets, len, word, out);
            word.pop();
        }
    }

    /// Whether `word` occurs in some point of the shift.
    pub fn is_admissible(&self, word: &[u32]) -> bool {
        match self.presentation {
            Presentation::DeBruijn { window } if word.len() >= window => {
                let Some(mut i) = self.states.iter().position(|w| w[..] == word[..window]) else {
                    return false;
                };
                for &s in &word[window..] {
                    match self.transitions[i].iter().find(|&&(_, l)| l == s) {
                        Some(&(j, _)) => i = j as usize,
                        None => return false,
                    }
                }
                true
            }
            Presentation::DeBruijn { .. } => self.states.iter().any(|w| w.starts_with(word)),
            Presentation::Deterministic => {
                let mut set: Vec<u32> = (0..self.states.len() as u32).collect();
                for &s in word {
                    let mut next: Vec<u32> = set
                        .iter()
                        .flat_map(|&i| self.transitions[i as usize].iter())
                        .filter(|&&(_, l)| l == s)
                        .map(|&(j, _)| j)
                        .collect();
                    next.sort();
                    next.dedup();
                    if next.is_empty() {
                        return false;
                    }
                    set = next;
                }
                true
            }
        }
    }

    pub fn render(&self, word: &[u32]) -> String {
        self.alphabet.render(word)
    }

    /// JSON export: states, transitions, provenance and forbidden words, rendered with labels.
    pub fn to_json(&self) -> serde_json::Value {
        let states: Vec<String> = match self.presentation {
            Presentation::DeBruijn { .. } => self.states.iter().map(|w| self.render(w)).collect(),
            Presentation::Deterministic => self
                .states
                .iter()
                .map(|set| format!("{set:?}"))
                .collect(),
        };
        let transitions: Vec<serde_json::Value> = self
            .transitions
            .iter()
            .enumerate()
            .flat_map(|(i, t)| {
                t.iter().map(move |&(j, l)| serde_json::json!([i, j, self.alphabet.label(l)]))
            })
            .collect();
        serde_json::json!({
            "states": states,
            "transitions": transitions,
            "provenance": self.provenance,
            "forbidden": self.forbidden.iter().map(|w| self.render(w)).collect::<Vec<_>>(),
        })
    }
}

/// Words avoiding immediate backtracking `s s̄`, with matching incidence.
pub fn local_geodesic_shift(graph: &MetricGraph) -> Result<ShiftSpace> {
    if !graph.has_unit_lengths() {
        return Err(Error::NonUnitLengths);
    }
    let alphabet = InvolutiveAlphabet::from_graph(graph);
    let states: Vec<Vec<u32>> = graph.sides().map(|s| vec![s.0]).collect();
    let forbidden = graph
        .sides()
        .map(|s| vec![s.0, s.reverse().0])
        .filter(|w| graph.head(SideId(w[0])) == graph.tail(SideId(w[1])))
        .collect();
    ShiftSpace::from_words(
        alphabet,
        1,
        states,
        |w| {
            let (s, t) = (SideId(w[0]), SideId(w[1]));
            graph.head(s) == graph.tail(t) && t != s.reverse()
        },
        Provenance::LocalGeodesic,
        forbidden,
    )
}

/// Whether a side word is a path whose lift realizes the distance between its endpoints.
pub fn is_distance_realizing(patch: &CoverPatch, word: &[u32]) -> bool {
    let cover = patch.cover();
    let base = cover.base();
    let sides: Vec<SideId> = word.iter().map(|&s| SideId(s)).collect();
    if !base.is_path(&sides) {
        return false;
    }
    let Some(&first) = sides.first() else {
        return true;
    };
    let start = CoverVertex::new(base.tail(first), cover.spec().identity());
    let Ok(walk) = cover.walk(&start, &sides) else {
        return false;
    };
    let length: Length = sides.iter().map(|&s| base.length(s)).sum();
    match cover.vertex_distance(&walk[0], walk.last().unwrap(), length) {
        Ok(d) => d == length,
        Err(_) => false,
    }
}

/// The window-`L` geodesic shift: states are distance-realizing words of length `L`,
/// transitions the distance-realizing words of length `L + 1`.
pub fn geodesic_shift(patch: &CoverPatch, window: usize) -> Result<ShiftSpace> {
    let base = patch.cover().base();
    if !base.has_unit_lengths() {
        return Err(Error::NonUnitLengths);
    }
    if window == 0 {
        return Err(Error::InvalidParameter("window must be at least 1".into()));
    }
    if Length::from_integer(window as i64 + 1) > patch.radius() {
        return Err(Error::HorizonTooShort(window as f64 + 1.0));
    }
    let alphabet = InvolutiveAlphabet::from_graph(base);
    let mut states: Vec<Vec<u32>> = vec![Vec::new()];
    let mut forbidden = Vec::new();
    for _ in 0..window {
        let mut next = Vec::new();
        for w in &states {
            for s in 0..alphabet.len() as u32 {
                let mut x = w.clone();
                x.push(s);
                if is_path(base, &x) {
                    if is_distance_realizing(patch, &x) {
                        next.push(x);
                    } else if is_distance_realizing(patch, &x[1..]) {
                        forbidden.push(x);
                    }
                }
            }
        }
        states = next;
    }
    for w in &states {
        for s in 0..alphabet.len() as u32 {
            let mut x = w.clone();
            x.push(s);
            if is_path(base, &x) && !is_distance_realizing(patch, &x) && is_distance_realizing(patch, &x[1..]) {
                forbidden.push(x);
            }
        }
    }
    forbidden.sort();
    ShiftSpace::from_words(
        alphabet,
        window,
        states,
        |w| is_distance_realizing(patch, w),
        Provenance::Geodesic { window },
        forbidden,
    )
}

fn is_path(base: &MetricGraph, word: &[u32]) -> bool {
    word.windows(2)
        .all(|p| base.head(SideId(p[0])) == base.tail(SideId(p[1])))
}

/// Admissible words indexed over the positions `start..=end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordWindow {
    pub start: i64,
    pub end: i64,
    pub words: Vec<Vec<u32>>,
}

pub fn enumerate_words(shift: &ShiftSpace, start: i64, end: i64) -> Result<WordWindow> {
    if end < start {
        return Err(Error::InvalidParameter("empty window".into()));
    }
    Ok(WordWindow {
        start,
        end,
        words: shift.words((end - start + 1) as usize),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::examples::{build_example, ExampleName};
    use crate::space::graph::{validate_graph, EdgeDescription, GraphDescription, LengthRepr};

    fn rose(l: usize) -> MetricGraph {
        build_example(&ExampleName::Tree(l)).unwrap().cover.base().clone()
    }

    #[test]
    fn rose_local_geodesics() {
        let shift = local_geodesic_shift(&rose(2)).unwrap();
        assert_eq!(shift.state_count(), 4);
        assert!((0..4).all(|i| shift.out_degree(i) == 3));
        assert_eq!(shift.word_count(5), BigUint::from(324u32));
        assert_eq!(shift.word_count(1), BigUint::from(4u32));
    }

    #[test]
    fn wedge_of_three_circles() {
        let g = build_example(&ExampleName::CircleRose(2)).unwrap().cover.base().clone();
        let shift = local_geodesic_shift(&g).unwrap();
        assert_eq!(shift.state_count(), 6);
        assert!((0..6).all(|i| shift.out_degree(i) == 5));
    }

    #[test]
    fn single_loop() {
        let g = validate_graph(&GraphDescription {
            vertices: 1,
            edges: vec![EdgeDescription {
                id: "a".into(),
                from: 0,
                to: 0,
                length: LengthRepr::Int(1),
                label: "a".into(),
            }],
        })
        .unwrap();
        let shift = local_geodesic_shift(&g).unwrap();
        assert_eq!(shift.state_count(), 2);
        assert!((0..2).all(|i| shift.out_degree(i) == 1));
    }

    #[test]
    fn tree_geodesic_shift_equals_local_shift() {
        let cover = build_example(&ExampleName::Tree(2)).unwrap().cover;
        let patch = cover.expand(Length::from_integer(6)).unwrap();
        let local = local_geodesic_shift(cover.base()).unwrap();
        for l in 1..=4 {
            let geo = geodesic_shift(&patch, l).unwrap();
            for n in 1..=6 {
                assert_eq!(geo.words(n), local.words(n), "L={l} n={n}");
            }
        }
    }

    #[test]
    fn doubled_window_two() {
        let cover = build_example(&ExampleName::Doubled(2)).unwrap().cover;
        let patch = cover.expand(Length::from_integer(3)).unwrap();
        let shift = geodesic_shift(&patch, 2).unwrap();
        assert_eq!(shift.used_symbols().len(), 8);
        assert_eq!(shift.state_count(), 48);
        assert!((0..48).all(|i| shift.out_degree(i) == 6));
        assert_eq!(shift.word_count(4), BigUint::from(1728u32));
        assert_eq!(shift.words(4).len(), 1728);
        assert_eq!(enumerate_words(&shift, 0, 1).unwrap().words.len(), 48);
        // each symbol forbids its own inverse and its twin's inverse
        let a1 = shift.alphabet().index_of("a1").unwrap();
        let followers: Vec<String> = shift
            .words(2)
            .into_iter()
            .filter(|w| w[0] == a1)
            .map(|w| shift.alphabet().label(w[1]).to_string())
            .collect();
        assert_eq!(followers.len(), 6);
        assert!(!followers.contains(&"A1".to_string()) && !followers.contains(&"B1".to_string()));
    }

    #[test]
    fn circle_symbols_are_never_geodesic() {
        let cover = build_example(&ExampleName::CircleRose(2)).unwrap().cover;
        let patch = cover.expand(Length::from_integer(3)).unwrap();
        let shift = geodesic_shift(&patch, 2).unwrap();
        let labels: Vec<&str> = shift
            .used_symbols()
            .into_iter()
            .map(|s| shift.alphabet().label(s))
            .collect();
        assert_eq!(labels, ["a1", "A1", "a2", "A2"]);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let shift = local_geodesic_shift(&rose(2)).unwrap();
        let w = enumerate_words(&shift, -1, 0).unwrap().words;
        assert_eq!(w.len(), 12);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(enumerate_words(&shift, 0, 0).unwrap().words.len(), 4);
    }

    #[test]
    fn brute_force_realizing_language() {
        // Every path word of length ≤ 4 is admissible exactly when it realizes distance.
        for name in [ExampleName::Doubled(2), ExampleName::CircleRose(2)] {
            let cover = build_example(&name).unwrap().cover;
            let patch = cover.expand(Length::from_integer(6)).unwrap();
            let base = cover.base();
            let shift = geodesic_shift(&patch, 4).unwrap();
            let n = base.side_count() as u32;
            let mut words: Vec<Vec<u32>> = vec![Vec::new()];
            for _ in 0..4 {
                words = words
                    .into_iter()
                    .flat_map(|w| (0..n).map(move |s| [w.clone(), vec![s]].concat()))
                    .collect();
                for w in &words {
                    let oracle = brute_realizes(&cover, w);
                    assert_eq!(shift.is_admissible(w), oracle, "{name} {}", base.render_sides(&w.iter().map(|&s| SideId(s)).collect::<Vec<_>>()));
                }
            }
        }
    }

    /// Distance by breadth-first search in the cover, independent of the patch code.
    fn brute_realizes(cover: &crate::space::Cover, w: &[u32]) -> bool {
        let base = cover.base();
        let sides: Vec<SideId> = w.iter().map(|&s| SideId(s)).collect();
        if !is_path(base, w) {
            return false;
        }
        let start = CoverVertex::new(base.tail(sides[0]), cover.spec().identity());
        let end = cover.walk(&start, &sides).unwrap().pop().unwrap();
        let mut frontier = vec![start.clone()];
        let mut seen = std::collections::HashSet::from([start]);
        for d in 0..=w.len() {
            if frontier.contains(&end) {
                return d == w.len();
            }
            let mut next = Vec::new();
            for v in &frontier {
                for &s in base.sides_at(v.base as usize) {
                    let u = cover.step(v, s);
                    if seen.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
            frontier = next;
        }
        false
    }
}
