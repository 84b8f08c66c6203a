//! Voltage-derived periodic covers and their finite explored patches.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::Arc;

use indexmap::IndexSet;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::graph::{length_to_f64, validate_graph, GraphDescription, Length, MetricGraph, SideId};
use super::group::{render_word, GroupElement, GroupSpec, Symbol};
use crate::error::{Error, Result};

pub const DEFAULT_VERTEX_BUDGET: usize = 6_000_000;

/// Group element attached to every directed side; reverse sides carry inverses.
#[derive(Clone, Debug, PartialEq)]
pub struct VoltageAssignment {
    per_side: Vec<GroupElement>,
}

impl VoltageAssignment {
    /// `forward[e]` is the voltage of edge `e` traversed from → to.
    pub fn new(graph: &MetricGraph, spec: &GroupSpec, forward: Vec<GroupElement>) -> Result<Self> {
        if forward.len() != graph.edge_count() {
            return Err(Error::Config(format!(
                "expected {} voltages, got {}",
                graph.edge_count(),
                forward.len()
            )));
        }
        let mut per_side = Vec::with_capacity(2 * forward.len());
        for g in forward {
            spec.check(&g)?;
            let inv = spec.inverse(&g);
            per_side.push(g);
            per_side.push(inv);
        }
        Ok(VoltageAssignment { per_side })
    }

    pub fn get(&self, s: SideId) -> &GroupElement {
        &self.per_side[s.index()]
    }
}

/// Space description file layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescription {
    pub base_graph: GraphDescription,
    pub group: GroupDescription,
    pub voltages: std::collections::BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDescription {
    pub rank: usize,
    #[serde(default)]
    pub extension: Option<Vec<Vec<usize>>>,
}

/// The infinite derived graph: vertices `(v, g)` with `(v, g) -s-> (head(s), g·voltage(s))`.
#[derive(Clone, Debug)]
pub struct Cover {
    base: MetricGraph,
    spec: GroupSpec,
    voltages: VoltageAssignment,
    basepoint: usize,
    /// Set when vertex distances agree with reduced word length (Cayley tree of a free basis,
    /// possibly with repeated generators and trivial loops).
    word_metric: bool,
    /// Base vertices where a truncated description continues beyond the listed edges.
    open_ends: Vec<usize>,
}

/// Vertex counts of one breadth-first layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LayerCount {
    pub radius: usize,
    pub sphere: usize,
    pub orbit_sphere: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverVertex {
    pub base: u32,
    pub elem: GroupElement,
}

impl CoverVertex {
    pub fn new(base: usize, elem: GroupElement) -> Self {
        CoverVertex {
            base: base as u32,
            elem,
        }
    }
}

impl std::fmt::Display for CoverVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.base, self.elem)
    }
}

impl Cover {
    pub fn new(base: MetricGraph, spec: GroupSpec, voltages: VoltageAssignment) -> Self {
        let word_metric = detect_word_metric(&base, &spec, &voltages);
        Cover {
            base,
            spec,
            voltages,
            basepoint: 0,
            word_metric,
            open_ends: Vec::new(),
        }
    }

    pub fn from_description(desc: &SpaceDescription) -> Result<Self> {
        let base = validate_graph(&desc.base_graph)?;
        let spec = match &desc.group.extension {
            Some(ext) => GroupSpec::with_extension(desc.group.rank, ext)?,
            None => GroupSpec::free(desc.group.rank)?,
        };
        let known: std::collections::HashSet<&str> =
            base.edges().iter().map(|e| e.id.as_str()).collect();
        if let Some(bad) = desc.voltages.keys().find(|k| !known.contains(k.as_str())) {
            return Err(Error::UnknownEdge(bad.clone()));
        }
        let forward = base
            .edges()
            .iter()
            .map(|e| match desc.voltages.get(&e.id) {
                Some(w) => spec.parse(w),
                None => Ok(GroupElement::identity()),
            })
            .collect::<Result<Vec<_>>>()?;
        let voltages = VoltageAssignment::new(&base, &spec, forward)?;
        Ok(Cover::new(base, spec, voltages))
    }

    pub fn to_description(&self) -> SpaceDescription {
        let voltages = self
            .base
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                (
                    e.id.clone(),
                    render_word(&self.voltages.get(SideId::forward(i)).word),
                )
            })
            .collect();
        let ext = self.spec.permutation_arrays();
        SpaceDescription {
            base_graph: self.base.to_description(),
            group: GroupDescription {
                rank: self.spec.rank(),
                extension: if ext.is_empty() { None } else { Some(ext) },
            },
            voltages,
        }
    }

    pub fn with_basepoint(mut self, v: usize) -> Self {
        self.basepoint = v;
        self
    }

    pub fn with_open_ends(mut self, ends: Vec<usize>) -> Self {
        self.open_ends = ends;
        self
    }

    pub fn open_ends(&self) -> &[usize] {
        &self.open_ends
    }

    pub fn base(&self) -> &MetricGraph {
        &self.base
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn voltages(&self) -> &VoltageAssignment {
        &self.voltages
    }

    pub fn basepoint(&self) -> CoverVertex {
        CoverVertex::new(self.basepoint, GroupElement::identity())
    }

    pub fn basepoint_base(&self) -> usize {
        self.basepoint
    }

    pub fn has_word_metric(&self) -> bool {
        self.word_metric
    }

    /// Follows side `s` out of `v`; `s` must start at `v`'s base vertex.
    pub fn step(&self, v: &CoverVertex, s: SideId) -> CoverVertex {
        debug_assert_eq!(self.base.tail(s), v.base as usize);
        CoverVertex {
            base: self.base.head(s) as u32,
            elem: self.spec.mul(&v.elem, self.voltages.get(s)),
        }
    }

    /// Walks a side word from `v`, returning the visited vertices (including `v`).
    pub fn walk(&self, v: &CoverVertex, word: &[SideId]) -> Result<Vec<CoverVertex>> {
        let mut out = Vec::with_capacity(word.len() + 1);
        out.push(v.clone());
        for &s in word {
            let cur = out.last().unwrap();
            if self.base.tail(s) != cur.base as usize {
                return Err(Error::MalformedWord(self.base.render_sides(word)));
            }
            let next = self.step(cur, s);
            out.push(next);
        }
        Ok(out)
    }

    /// Left translation by a deck element.
    pub fn translate(&self, g: &GroupElement, v: &CoverVertex) -> CoverVertex {
        CoverVertex {
            base: v.base,
            elem: self.spec.mul(g, &v.elem),
        }
    }

    /// Deck element carrying `from` onto `to` (both over the same base vertex).
    pub fn deck_between(&self, from: &CoverVertex, to: &CoverVertex) -> Option<GroupElement> {
        (from.base == to.base).then(|| self.spec.mul(&to.elem, &self.spec.inverse(&from.elem)))
    }

    /// Exact vertex distance. Uses the word metric when available, otherwise a
    /// Dijkstra search that gives up beyond `bound`.
    pub fn vertex_distance(&self, a: &CoverVertex, b: &CoverVertex, bound: Length) -> Result<Length> {
        if a == b {
            return Ok(Length::zero());
        }
        if self.word_metric {
            let d = self.spec.mul(&self.spec.inverse(&a.elem), &b.elem);
            return Ok(Length::from_integer(d.len() as i64));
        }
        let mut dist: HashMap<CoverVertex, Length> = HashMap::from([(a.clone(), Length::zero())]);
        let mut heap = BinaryHeap::from([Reverse((Length::zero(), a.clone()))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if &v == b {
                return Ok(d);
            }
            if d > bound {
                break;
            }
            if dist.get(&v).is_some_and(|best| *best < d) {
                continue;
            }
            for &s in self.base.sides_at(v.base as usize) {
                let w = self.step(&v, s);
                let nd = d + self.base.length(s);
                if nd > bound {
                    continue;
                }
                if dist.get(&w).is_none_or(|best| nd < *best) {
                    dist.insert(w.clone(), nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        Err(Error::Uncertified {
            needed: f64::INFINITY,
            available: length_to_f64(&bound),
        })
    }

    /// All cover vertices within `radius` of `center`, with exact distances,
    /// in nondecreasing distance order (ties by vertex order).
    pub fn ball(&self, center: &CoverVertex, radius: Length, budget: usize) -> Result<Vec<(CoverVertex, Length)>> {
        let mut settled: HashMap<CoverVertex, Length> = HashMap::new();
        let mut best: HashMap<CoverVertex, Length> = HashMap::from([(center.clone(), Length::zero())]);
        let mut heap = BinaryHeap::from([Reverse((Length::zero(), center.clone()))]);
        let mut out = Vec::new();
        while let Some(Reverse((d, v))) = heap.pop() {
            if settled.contains_key(&v) || best.get(&v).is_some_and(|b| *b < d) {
                continue;
            }
            settled.insert(v.clone(), d);
            out.push((v.clone(), d));
            if out.len() > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            for &s in self.base.sides_at(v.base as usize) {
                let w = self.step(&v, s);
                let nd = d + self.base.length(s);
                if nd > radius || settled.contains_key(&w) {
                    continue;
                }
                if best.get(&w).is_none_or(|b| nd < *b) {
                    best.insert(w.clone(), nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }

    /// Sphere sizes `#S(x, k)` and orbit sphere sizes for `k = 0..=max_t`, by layered
    /// breadth-first search keeping three layers at a time. Unit edge lengths only.
    pub fn layer_counts(&self, max_t: usize, budget: usize) -> Result<Vec<LayerCount>> {
        if !self.base.has_unit_lengths() {
            return Err(Error::NonUnitLengths);
        }
        let root = self.basepoint();
        let mut prev: HashSet<CoverVertex> = HashSet::new();
        let mut cur: HashSet<CoverVertex> = HashSet::from([root]);
        let mut out = Vec::with_capacity(max_t + 1);
        for k in 0..=max_t {
            let orbit = cur.iter().filter(|v| v.base as usize == self.basepoint).count();
            out.push(LayerCount {
                radius: k,
                sphere: cur.len(),
                orbit_sphere: orbit,
            });
            if k == max_t {
                break;
            }
            let mut next: HashSet<CoverVertex> = HashSet::new();
            for v in &cur {
                for &s in self.base.sides_at(v.base as usize) {
                    let w = self.step(v, s);
                    if !prev.contains(&w) && !cur.contains(&w) {
                        next.insert(w);
                    }
                }
            }
            if next.len() > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(out)
    }

    pub fn expand(&self, radius: Length) -> Result<CoverPatch> {
        self.expand_with_budget(radius, DEFAULT_VERTEX_BUDGET)
    }

    /// Breadth-first (Dijkstra) expansion of the derived graph around the basepoint.
    pub fn expand_with_budget(&self, radius: Length, budget: usize) -> Result<CoverPatch> {
        if radius < Length::zero() {
            return Err(Error::InvalidParameter("negative radius".into()));
        }
        let root = self.basepoint();
        let mut index: IndexSet<CoverVertex> = IndexSet::new();
        let mut dist: Vec<Length> = Vec::new();
        let mut done: Vec<bool> = Vec::new();
        let mut heap: BinaryHeap<Reverse<(Length, u32)>> = BinaryHeap::new();
        index.insert(root);
        dist.push(Length::zero());
        done.push(false);
        heap.push(Reverse((Length::zero(), 0)));
        let mut order: Vec<u32> = Vec::new();
        while let Some(Reverse((d, i))) = heap.pop() {
            if done[i as usize] || dist[i as usize] < d {
                continue;
            }
            done[i as usize] = true;
            order.push(i);
            let v = index.get_index(i as usize).unwrap().clone();
            for &s in self.base.sides_at(v.base as usize) {
                let nd = d + self.base.length(s);
                if nd > radius {
                    continue;
                }
                let w = self.step(&v, s);
                let (j, fresh) = index.insert_full(w);
                if fresh {
                    if index.len() > budget {
                        return Err(Error::BudgetExceeded(budget));
                    }
                    dist.push(nd);
                    done.push(false);
                    heap.push(Reverse((nd, j as u32)));
                } else if !done[j] && nd < dist[j] {
                    dist[j] = nd;
                    heap.push(Reverse((nd, j as u32)));
                }
            }
        }
        // Renumber in settling order: nondecreasing distance from the basepoint.
        let mut vertices = Vec::with_capacity(order.len());
        let mut new_dist = Vec::with_capacity(order.len());
        for &i in &order {
            vertices.push(index.get_index(i as usize).unwrap().clone());
            new_dist.push(dist[i as usize]);
        }
        drop(index);
        let lookup: HashMap<CoverVertex, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0u32);
        for v in &vertices {
            for &s in self.base.sides_at(v.base as usize) {
                let w = self.step(v, s);
                neighbors.push(lookup.get(&w).copied().unwrap_or(u32::MAX));
            }
            offsets.push(neighbors.len() as u32);
        }
        Ok(CoverPatch {
            cover: Arc::new(self.clone()),
            radius,
            vertices,
            lookup,
            dist: new_dist,
            offsets,
            neighbors,
        })
    }
}

fn detect_word_metric(base: &MetricGraph, spec: &GroupSpec, voltages: &VoltageAssignment) -> bool {
    if base.vertex_count() != 1 || !base.has_unit_lengths() {
        return false;
    }
    let mut seen = vec![false; spec.rank()];
    for s in base.sides() {
        let g = voltages.get(s);
        if g.perm != 0 || g.len() > 1 {
            return false;
        }
        if let Some(&sym) = g.word.first() {
            seen[Symbol::generator_index(sym)] = true;
        }
    }
    seen.into_iter().all(|b| b)
}

/// A finite ball of the cover around the basepoint, with adjacency and
/// distances from the basepoint. Vertices are numbered by nondecreasing distance.
#[derive(Clone, Debug)]
pub struct CoverPatch {
    cover: Arc<Cover>,
    radius: Length,
    vertices: Vec<CoverVertex>,
    lookup: HashMap<CoverVertex, u32>,
    dist: Vec<Length>,
    offsets: Vec<u32>,
    neighbors: Vec<u32>,
}

impl CoverPatch {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn radius(&self) -> Length {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &CoverVertex {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[CoverVertex] {
        &self.vertices
    }

    pub fn index_of(&self, v: &CoverVertex) -> Option<usize> {
        self.lookup.get(v).map(|&i| i as usize)
    }

    pub fn depth(&self, i: usize) -> Length {
        self.dist[i]
    }

    pub fn depth_of(&self, v: &CoverVertex) -> Option<Length> {
        self.index_of(v).map(|i| self.dist[i])
    }

    /// Neighbors of vertex `i`, paired with the base side used; `None` when
    /// the neighbor lies outside the patch.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (SideId, Option<usize>)> + '_ {
        let base = self.vertices[i].base as usize;
        let sides = self.cover.base().sides_at(base);
        let lo = self.offsets[i] as usize;
        sides.iter().enumerate().map(move |(k, &s)| {
            let n = self.neighbors[lo + k];
            (s, (n != u32::MAX).then_some(n as usize))
        })
    }

    pub fn neighbor(&self, i: usize, s: SideId) -> Option<usize> {
        self.neighbors(i).find(|(t, _)| *t == s).and_then(|(_, n)| n)
    }

    /// Number of undirected edges with both endpoints inside the patch.
    pub fn inner_edge_count(&self) -> usize {
        let mut twice = 0usize;
        for i in 0..self.len() {
            twice += self.neighbors(i).filter(|(_, n)| n.is_some()).count();
        }
        twice / 2
    }

    /// Exact distances from vertex `src` to every patch vertex, through patch edges only.
    pub fn distances_from(&self, src: usize) -> Vec<Option<Length>> {
        self.distances_from_many(&[(src, Length::zero())])
    }

    pub fn distances_from_many(&self, sources: &[(usize, Length)]) -> Vec<Option<Length>> {
        let base = self.cover.base();
        let mut dist: Vec<Option<Length>> = vec![None; self.len()];
        let mut heap = BinaryHeap::new();
        for (i, d) in sources {
            if dist[*i].is_none_or(|b| *d < b) {
                dist[*i] = Some(*d);
                heap.push(Reverse((*d, *i)));
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].is_some_and(|b| b < d) {
                continue;
            }
            for (s, n) in self.neighbors(v) {
                if let Some(w) = n {
                    let nd = d + base.length(s);
                    if dist[w].is_none_or(|b| nd < b) {
                        dist[w] = Some(nd);
                        heap.push(Reverse((nd, w)));
                    }
                }
            }
        }
        dist
    }

    /// Whether a vertex pair's distance is certified: `d(x,a) + d(x,b) ≤ R`.
    pub fn certify(&self, a: usize, b: usize) -> Result<()> {
        let need = self.dist[a] + self.dist[b];
        if need > self.radius {
            return Err(Error::Uncertified {
                needed: length_to_f64(&need),
                available: length_to_f64(&self.radius),
            });
        }
        Ok(())
    }

    /// Exact certified vertex distance.
    pub fn vertex_distance(&self, a: usize, b: usize) -> Result<Length> {
        self.certify(a, b)?;
        let bound = self.dist[a] + self.dist[b];
        // A geodesic between certified vertices stays inside the patch.
        let base = self.cover.base();
        let mut dist: HashMap<usize, Length> = HashMap::from([(a, Length::zero())]);
        let mut heap = BinaryHeap::from([Reverse((Length::zero(), a))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if v == b {
                return Ok(d);
            }
            if dist.get(&v).is_some_and(|x| *x < d) {
                continue;
            }
            for (s, n) in self.neighbors(v) {
                if let Some(w) = n {
                    let nd = d + base.length(s);
                    if nd > bound {
                        continue;
                    }
                    if dist.get(&w).is_none_or(|x| nd < *x) {
                        dist.insert(w, nd);
                        heap.push(Reverse((nd, w)));
                    }
                }
            }
        }
        unreachable!("certified pair must be connected inside the patch")
    }

    /// `(ball, sphere)` vertex counts for `B(x,T)` and `S(x,T)`.
    pub fn sphere_and_ball_counts(&self, t: Length) -> Result<(usize, usize)> {
        self.check_horizon(t)?;
        let ball = self.dist.partition_point(|d| *d <= t);
        let sphere = ball - self.dist.partition_point(|d| *d < t);
        Ok((ball, sphere))
    }

    /// `#(Γx ∩ B(x,T))`: patch vertices over the basepoint's base vertex.
    pub fn orbit_count(&self, t: Length) -> Result<usize> {
        self.check_horizon(t)?;
        let b = self.cover.basepoint_base() as u32;
        let end = self.dist.partition_point(|d| *d <= t);
        Ok(self.vertices[..end].iter().filter(|v| v.base == b).count())
    }

    pub(crate) fn check_horizon(&self, t: Length) -> Result<()> {
        if t > self.radius {
            return Err(Error::Uncertified {
                needed: length_to_f64(&t),
                available: length_to_f64(&self.radius),
            });
        }
        Ok(())
    }
}

pub fn expand_cover(cover: &Cover, radius: Length) -> Result<CoverPatch> {
    cover.expand(radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graph::{EdgeDescription, LengthRepr};

    pub(crate) fn rose_cover(voltages: &[&str], rank: usize) -> Cover {
        let desc = SpaceDescription {
            base_graph: GraphDescription {
                vertices: 1,
                edges: voltages
                    .iter()
                    .enumerate()
                    .map(|(i, _)| EdgeDescription {
                        id: format!("e{i}"),
                        from: 0,
                        to: 0,
                        length: LengthRepr::Int(1),
                        label: format!("s{i}"),
                    })
                    .collect(),
            },
            group: GroupDescription {
                rank,
                extension: None,
            },
            voltages: voltages
                .iter()
                .enumerate()
                .map(|(i, w)| (format!("e{i}"), w.to_string()))
                .collect(),
        };
        Cover::from_description(&desc).unwrap()
    }

    fn l(n: i64) -> Length {
        Length::from_integer(n)
    }

    #[test]
    fn tree_patch_counts() {
        let cover = rose_cover(&["a1", "a2"], 2);
        assert!(cover.has_word_metric());
        let patch = cover.expand(l(2)).unwrap();
        assert_eq!(patch.len(), 1 + 4 + 12);
        assert_eq!(patch.inner_edge_count(), patch.len() - 1);
    }

    #[test]
    fn radius_zero_is_single_vertex() {
        let cover = rose_cover(&["a1", "a2"], 2);
        let patch = cover.expand(l(0)).unwrap();
        assert_eq!(patch.len(), 1);
        assert_eq!(patch.sphere_and_ball_counts(l(0)).unwrap(), (1, 1));
    }

    #[test]
    fn doubled_rose_has_parallel_edges() {
        let cover = rose_cover(&["a1", "a1", "a2", "a2"], 2);
        let patch = cover.expand(l(1)).unwrap();
        assert_eq!(patch.len(), 5);
        // 8 sides at the root, every neighbor reached twice
        let root_nbrs: Vec<_> = patch.neighbors(0).filter_map(|(_, n)| n).collect();
        assert_eq!(root_nbrs.len(), 8);
        for i in 1..5 {
            assert_eq!(root_nbrs.iter().filter(|&&n| n == i).count(), 2);
        }
    }

    #[test]
    fn sphere_counts_match_closed_form() {
        let t4 = rose_cover(&["a1", "a2"], 2).expand(l(3)).unwrap();
        assert_eq!(t4.sphere_and_ball_counts(l(3)).unwrap().1, 36);
        let t6 = rose_cover(&["a1", "a2", "a3"], 3).expand(l(2)).unwrap();
        assert_eq!(t6.sphere_and_ball_counts(l(2)).unwrap().1, 30);
        assert!(t6.sphere_and_ball_counts(l(3)).is_err());
    }

    #[test]
    fn orbit_counts() {
        let t4 = rose_cover(&["a1", "a2"], 2).expand(l(6)).unwrap();
        for n in 0..=6 {
            assert_eq!(t4.orbit_count(l(n)).unwrap(), 2 * 3usize.pow(n as u32) - 1);
        }
        let circle = rose_cover(&["a1", "a2", ""], 2).expand(l(1)).unwrap();
        assert_eq!(circle.orbit_count(l(1)).unwrap(), 5);
    }

    #[test]
    fn layer_counts_match_patch() {
        let cover = rose_cover(&["a1", "a2", ""], 2);
        let patch = cover.expand(l(5)).unwrap();
        let layers = cover.layer_counts(5, 1 << 20).unwrap();
        let mut ball = 0;
        let mut orbit = 0;
        for lc in layers {
            ball += lc.sphere;
            orbit += lc.orbit_sphere;
            let t = l(lc.radius as i64);
            assert_eq!(patch.sphere_and_ball_counts(t).unwrap(), (ball, lc.sphere));
            assert_eq!(patch.orbit_count(t).unwrap(), orbit);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let cover = rose_cover(&["a1", "a2"], 2);
        assert_eq!(
            cover.expand_with_budget(l(6), 100).unwrap_err(),
            Error::BudgetExceeded(100)
        );
    }

    #[test]
    fn patch_distances_match_word_metric() {
        let cover = rose_cover(&["a1", "a2"], 2);
        let patch = cover.expand(l(4)).unwrap();
        let a = patch.index_of(&CoverVertex::new(0, cover.spec().parse("a1a2").unwrap())).unwrap();
        assert_eq!(patch.vertex_distance(0, a).unwrap(), l(2));
        let b = patch.index_of(&CoverVertex::new(0, cover.spec().parse("A2").unwrap())).unwrap();
        assert_eq!(patch.vertex_distance(a, b).unwrap(), l(3));
        assert_eq!(
            cover.vertex_distance(patch.vertex(a), patch.vertex(b), l(10)).unwrap(),
            l(3)
        );
    }
}
