//! Points of the cover (vertices and edge-interior points) and exact distances between them.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_traits::Zero;
use smallvec::SmallVec;

use super::cover::{Cover, CoverPatch, CoverVertex};
use super::graph::{length_to_f64, Length, SideId};
use super::group::GroupElement;
use crate::error::{Error, Result};

/// A point of the cover. Edge points are stored on the forward side of their
/// base edge, so `(e, t)` and `(ē, len − t)` have one representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphPoint {
    Vertex(CoverVertex),
    OnEdge {
        from: CoverVertex,
        side: SideId,
        offset: Length,
    },
}

impl GraphPoint {
    pub fn vertex(v: CoverVertex) -> Self {
        GraphPoint::Vertex(v)
    }

    /// The point at distance `offset` from `from` along side `side`.
    pub fn on_edge(cover: &Cover, from: CoverVertex, side: SideId, offset: Length) -> Result<Self> {
        let base = cover.base();
        if base.tail(side) != from.base as usize {
            return Err(Error::InvalidParameter(format!(
                "side {} does not start at base vertex {}",
                base.side_label(side),
                from.base
            )));
        }
        let len = base.length(side);
        if offset < Length::zero() || offset > len {
            return Err(Error::InvalidParameter("edge offset outside [0, length]".into()));
        }
        if offset.is_zero() {
            return Ok(GraphPoint::Vertex(from));
        }
        let to = cover.step(&from, side);
        if offset == len {
            return Ok(GraphPoint::Vertex(to));
        }
        if side.is_forward() {
            Ok(GraphPoint::OnEdge { from, side, offset })
        } else {
            Ok(GraphPoint::OnEdge {
                from: to,
                side: side.reverse(),
                offset: len - offset,
            })
        }
    }

    pub fn midpoint(cover: &Cover, from: CoverVertex, side: SideId) -> Self {
        let half = cover.base().length(side) / 2;
        GraphPoint::on_edge(cover, from, side, half).expect("midpoint lies on its edge")
    }

    /// Image under the deck element `g`.
    pub fn translate(&self, cover: &Cover, g: &GroupElement) -> Self {
        match self {
            GraphPoint::Vertex(v) => GraphPoint::Vertex(cover.translate(g, v)),
            GraphPoint::OnEdge { from, side, offset } => GraphPoint::OnEdge {
                from: cover.translate(g, from),
                side: *side,
                offset: *offset,
            },
        }
    }

    /// Endpoints with the distance to each along the edge.
    pub fn ends(&self, cover: &Cover) -> SmallVec<[(CoverVertex, Length); 2]> {
        match self {
            GraphPoint::Vertex(v) => smallvec::smallvec![(v.clone(), Length::zero())],
            GraphPoint::OnEdge { from, side, offset } => {
                let len = cover.base().length(*side);
                smallvec::smallvec![(from.clone(), *offset), (cover.step(from, *side), len - *offset)]
            }
        }
    }
}

impl std::fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphPoint::Vertex(v) => write!(f, "{v}"),
            GraphPoint::OnEdge { from, side, offset } => {
                write!(f, "{from}+{}@{offset}", side.0)
            }
        }
    }
}

/// A point resolved against a patch: endpoint indices with offsets.
#[derive(Clone, Debug)]
struct Located {
    ends: SmallVec<[(usize, Length); 2]>,
    edge: Option<(usize, SideId, Length)>,
}

impl CoverPatch {
    fn locate(&self, p: &GraphPoint) -> Result<Located> {
        let cover = self.cover();
        let mut ends = SmallVec::new();
        for (v, t) in p.ends(cover) {
            if let Some(i) = self.index_of(&v) {
                ends.push((i, t));
            }
        }
        if ends.is_empty() {
            return Err(Error::PointOutsidePatch);
        }
        let edge = match p {
            GraphPoint::Vertex(_) => None,
            GraphPoint::OnEdge { from, side, offset } => {
                self.index_of(from).map(|i| (i, *side, *offset))
            }
        };
        Ok(Located { ends, edge })
    }

    /// `d(x, p)` for the basepoint `x`.
    pub fn point_depth(&self, p: &GraphPoint) -> Result<Length> {
        let loc = self.locate(p)?;
        let d = loc
            .ends
            .iter()
            .map(|(i, t)| self.depth(*i) + *t)
            .min()
            .unwrap();
        if d > self.radius() {
            return Err(Error::PointOutsidePatch);
        }
        Ok(d)
    }

    /// Whether `p` lies in the closed ball `B(x, R)` of the patch.
    pub fn contains_point(&self, p: &GraphPoint) -> bool {
        self.point_depth(p).is_ok()
    }

    fn certify_points(&self, p: &GraphPoint, q: &GraphPoint) -> Result<Length> {
        let need = self.point_depth(p)? + self.point_depth(q)?;
        if need > self.radius() {
            return Err(Error::Uncertified {
                needed: length_to_f64(&need),
                available: length_to_f64(&self.radius()),
            });
        }
        Ok(need)
    }

    /// Exact distance between two points, certified when `d(x,p) + d(x,q) ≤ R`.
    pub fn distance(&self, p: &GraphPoint, q: &GraphPoint) -> Result<Length> {
        let bound = self.certify_points(p, q)?;
        let lp = self.locate(p)?;
        let lq = self.locate(q)?;
        let table = self.bounded_search(&lp.ends, bound, &lq.ends);
        Ok(combine(&lp, &lq, |i| table.get(&i).copied()))
    }

    /// Distances from `p` to all patch vertices (through the patch).
    pub fn point_distance_table(&self, p: &GraphPoint) -> Result<Vec<Option<Length>>> {
        let lp = self.locate(p)?;
        Ok(self.distances_from_many(&lp.ends))
    }

    /// Exact pairwise distances among `points`, certified as a block.
    pub fn distance_matrix(&self, points: &[GraphPoint]) -> Result<Vec<Vec<Length>>> {
        let located = points
            .iter()
            .map(|p| self.locate(p))
            .collect::<Result<Vec<_>>>()?;
        let depths = points
            .iter()
            .map(|p| self.point_depth(p))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&max) = depths.iter().max() {
            if max + max > self.radius() {
                return Err(Error::Uncertified {
                    needed: length_to_f64(&(max + max)),
                    available: length_to_f64(&self.radius()),
                });
            }
        }
        let row = |i: usize| -> Vec<Length> {
            let bound = depths[i] + depths.iter().max().copied().unwrap_or_default();
            let table = self.bounded_search(&located[i].ends, bound, &[]);
            located
                .iter()
                .map(|lq| combine(&located[i], lq, |k| table.get(&k).copied()))
                .collect()
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            Ok((0..points.len()).into_par_iter().map(row).collect())
        }
        #[cfg(not(feature = "parallel"))]
        {
            Ok((0..points.len()).map(row).collect())
        }
    }

    /// Dijkstra from weighted sources, pruned beyond `bound`. When `targets` is
    /// nonempty the search stops once all of them are settled.
    fn bounded_search(
        &self,
        sources: &[(usize, Length)],
        bound: Length,
        targets: &[(usize, Length)],
    ) -> HashMap<usize, Length> {
        let base = self.cover().base();
        let mut best: HashMap<usize, Length> = HashMap::new();
        let mut settled: HashMap<usize, Length> = HashMap::new();
        let mut heap = BinaryHeap::new();
        for (i, d) in sources {
            if best.get(i).is_none_or(|b| d < b) {
                best.insert(*i, *d);
                heap.push(Reverse((*d, *i)));
            }
        }
        let mut remaining = targets.len();
        while let Some(Reverse((d, v))) = heap.pop() {
            if settled.contains_key(&v) {
                continue;
            }
            settled.insert(v, d);
            if !targets.is_empty() && targets.iter().any(|(t, _)| *t == v) {
                remaining -= targets.iter().filter(|(t, _)| *t == v).count();
                if remaining == 0 {
                    break;
                }
            }
            for (s, n) in self.neighbors(v) {
                if let Some(w) = n {
                    let nd = d + base.length(s);
                    if nd > bound || settled.contains_key(&w) {
                        continue;
                    }
                    if best.get(&w).is_none_or(|b| nd < *b) {
                        best.insert(w, nd);
                        heap.push(Reverse((nd, w)));
                    }
                }
            }
        }
        settled
    }

    /// `sys(Γ, p) = min_{g ≠ 1} d(p, g·p)`.
    pub fn systole(&self, p: &GraphPoint) -> Result<Length> {
        let cover = self.cover();
        let lp = self.locate(p)?;
        let depth = self.point_depth(p)?;
        let table = self.point_distance_table(p)?;
        let (anchor, side, offset) = match p {
            GraphPoint::Vertex(v) => (v.clone(), None, Length::zero()),
            GraphPoint::OnEdge { from, side, offset } => (from.clone(), Some(*side), *offset),
        };
        let mut best: Option<Length> = None;
        for w in self.vertices() {
            if w.base != anchor.base || *w == anchor {
                continue;
            }
            let image = match side {
                None => GraphPoint::Vertex(w.clone()),
                Some(s) => GraphPoint::on_edge(cover, w.clone(), s, offset)?,
            };
            let Ok(lq) = self.locate(&image) else { continue };
            let d = combine(&lp, &lq, |k| table[k]);
            if best.is_none_or(|b| d < b) {
                best = Some(d);
            }
        }
        let Some(m) = best else {
            return Err(Error::Uncertified {
                needed: f64::INFINITY,
                available: length_to_f64(&self.radius()),
            });
        };
        let need = depth + depth + m;
        if need > self.radius() {
            return Err(Error::Uncertified {
                needed: length_to_f64(&need),
                available: length_to_f64(&self.radius()),
            });
        }
        Ok(m)
    }
}

fn combine(lp: &Located, lq: &Located, dist: impl Fn(usize) -> Option<Length>) -> Length {
    let mut best: Option<Length> = None;
    for (j, tq) in &lq.ends {
        if let Some(d) = dist(*j) {
            let c = d + *tq;
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    if let (Some((a, s, t)), Some((b, s2, t2))) = (lp.edge, lq.edge) {
        if a == b && s == s2 {
            let c = if t > t2 { t - t2 } else { t2 - t };
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    best.expect("certified points are connected inside the patch")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::examples::{build_example, ExampleName};

    fn l(n: i64) -> Length {
        Length::from_integer(n)
    }

    fn half() -> Length {
        Length::new(1, 2)
    }

    #[test]
    fn tree_vertex_distances() {
        let cover = build_example(&ExampleName::Tree(2)).unwrap().cover;
        let patch = cover.expand(l(4)).unwrap();
        let e = GraphPoint::Vertex(cover.basepoint());
        let v = GraphPoint::Vertex(CoverVertex::new(0, cover.spec().parse("a1a2").unwrap()));
        assert_eq!(patch.distance(&e, &v).unwrap(), l(2));
        assert_eq!(patch.distance(&v, &v).unwrap(), l(0));
    }

    #[test]
    fn parallel_midpoints_are_one_apart() {
        let cover = build_example(&ExampleName::Doubled(2)).unwrap().cover;
        let patch = cover.expand(l(3)).unwrap();
        let x = cover.basepoint();
        let m0 = GraphPoint::midpoint(&cover, x.clone(), SideId::forward(0));
        let m1 = GraphPoint::midpoint(&cover, x.clone(), SideId::forward(1));
        assert_eq!(patch.distance(&m0, &m1).unwrap(), l(1));
    }

    #[test]
    fn canonical_form_identifies_sides() {
        let cover = build_example(&ExampleName::Tree(2)).unwrap().cover;
        let x = cover.basepoint();
        let s = SideId::forward(0);
        let y = cover.step(&x, s);
        let p = GraphPoint::on_edge(&cover, x.clone(), s, Length::new(1, 4)).unwrap();
        let q = GraphPoint::on_edge(&cover, y.clone(), s.reverse(), Length::new(3, 4)).unwrap();
        assert_eq!(p, q);
        assert_eq!(GraphPoint::on_edge(&cover, x, s, l(1)).unwrap(), GraphPoint::Vertex(y));
    }

    #[test]
    fn same_edge_points_use_direct_segment() {
        let cover = build_example(&ExampleName::Tree(2)).unwrap().cover;
        let patch = cover.expand(l(3)).unwrap();
        let x = cover.basepoint();
        let s = SideId::forward(0);
        let p = GraphPoint::on_edge(&cover, x.clone(), s, Length::new(1, 4)).unwrap();
        let q = GraphPoint::on_edge(&cover, x, s, Length::new(3, 4)).unwrap();
        assert_eq!(patch.distance(&p, &q).unwrap(), half());
    }

    #[test]
    fn systoles() {
        let tree = build_example(&ExampleName::Tree(2)).unwrap().cover;
        let patch = tree.expand(l(4)).unwrap();
        let x = tree.basepoint();
        assert_eq!(patch.systole(&GraphPoint::Vertex(x.clone())).unwrap(), l(1));
        let m = GraphPoint::midpoint(&tree, x, SideId::forward(0));
        assert_eq!(patch.systole(&m).unwrap(), l(1));
        let doubled = build_example(&ExampleName::Doubled(2)).unwrap().cover;
        let patch = doubled.expand(l(3)).unwrap();
        assert_eq!(patch.systole(&GraphPoint::Vertex(doubled.basepoint())).unwrap(), l(1));
    }

    #[test]
    fn uncertified_pair_is_rejected() {
        let cover = build_example(&ExampleName::Tree(2)).unwrap().cover;
        let patch = cover.expand(l(3)).unwrap();
        let a = GraphPoint::Vertex(CoverVertex::new(0, cover.spec().parse("a1a1").unwrap()));
        let b = GraphPoint::Vertex(CoverVertex::new(0, cover.spec().parse("a2a2").unwrap()));
        assert!(matches!(patch.distance(&a, &b), Err(Error::Uncertified { .. })));
    }

    #[test]
    fn deck_translation_preserves_distance() {
        let cover = build_example(&ExampleName::Doubled(2)).unwrap().cover;
        let patch = cover.expand(l(6)).unwrap();
        let g = cover.spec().parse("A2").unwrap();
        let p = GraphPoint::midpoint(&cover, cover.basepoint(), SideId::forward(1));
        let q = GraphPoint::Vertex(CoverVertex::new(0, cover.spec().parse("a1").unwrap()));
        let d = patch.distance(&p, &q).unwrap();
        let d2 = patch
            .distance(&p.translate(&cover, &g), &q.translate(&cover, &g))
            .unwrap();
        assert_eq!(d, d2);
    }
}
