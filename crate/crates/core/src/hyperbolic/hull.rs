//! Unions of geodesic lines with both endpoints in a boundary set.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use super::boundary::{side_symbol, BoundaryPoint, CylinderSet};
use crate::error::{Error, Result};
use crate::space::{CoverPatch, GraphPoint, SideId, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundarySet {
    Full,
    Cylinders(CylinderSet),
    /// Finitely many eventually periodic points.
    Points(Vec<BoundaryPoint>),
}

/// Patch vertices and edges lying on bi-infinite geodesics of the full boundary.
///
/// Edges whose ends are closer than their length never lie on a geodesic. Vertices are then
/// pruned while they have fewer than two kept neighbours, except where the patch is cut off
/// (a neighbour outside the patch, or a declared open end of the cover).
#[derive(Clone, Debug)]
pub struct GeodesicCore {
    pub vertices: Vec<bool>,
    /// Kept edges as `(tail index, forward side)`.
    pub edges: HashSet<(usize, SideId)>,
}

impl GeodesicCore {
    pub fn new(patch: &CoverPatch) -> Self {
        let cover = patch.cover();
        let base = cover.base();
        let n = patch.len();
        let open: Vec<bool> = (0..n)
            .map(|i| {
                patch.neighbors(i).any(|(_, j)| j.is_none())
                    || cover.open_ends().contains(&(patch.vertex(i).base as usize))
            })
            .collect();
        let mut adj: Vec<Vec<(SideId, usize)>> = vec![Vec::new(); n];
        for (i, list) in adj.iter_mut().enumerate() {
            for (s, j) in patch.neighbors(i) {
                let Some(j) = j else { continue };
                if i == j {
                    continue;
                }
                let gap = patch.depth(i) - patch.depth(j);
                let shortcut = if gap.abs() == base.length(s) {
                    false
                } else {
                    // the ends might still be joined by a shorter path away from the basepoint
                    patch.vertex_distance(i, j).map(|d| d < base.length(s)).unwrap_or(false)
                };
                if !shortcut {
                    list.push((s, j));
                }
            }
        }
        let mut alive = vec![true; n];
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                if !alive[i] || open[i] {
                    continue;
                }
                let distinct: HashSet<usize> = adj[i].iter().filter(|(_, j)| alive[*j]).map(|(_, j)| *j).collect();
                if distinct.len() < 2 {
                    alive[i] = false;
                    changed = true;
                }
            }
        }
        let mut edges = HashSet::new();
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            for &(s, j) in &adj[i] {
                if s.is_forward() && alive[j] {
                    edges.insert((i, s));
                }
            }
        }
        GeodesicCore { vertices: alive, edges }
    }

    pub fn contains(&self, patch: &CoverPatch, p: &GraphPoint) -> Result<bool> {
        match p {
            GraphPoint::Vertex(v) => {
                let i = patch.index_of(v).ok_or(Error::PointOutsidePatch)?;
                Ok(self.vertices[i])
            }
            GraphPoint::OnEdge { from, side, .. } => {
                let i = patch.index_of(from).ok_or(Error::PointOutsidePatch)?;
                Ok(self.edges.contains(&(i, *side)))
            }
        }
    }
}

/// Whether `p` lies on a geodesic line with both endpoints in `set`.
///
/// Word-metric covers are decided exactly: removing a vertex or an edge splits the boundary
/// into cylinders, and `p` is on such a line iff two of the pieces meet `set`. Other covers only
/// support the full boundary, through [`GeodesicCore`].
pub fn qc_hull_contains(patch: &CoverPatch, set: &BoundarySet, p: &GraphPoint) -> Result<bool> {
    if !patch.contains_point(p) {
        return Err(Error::PointOutsidePatch);
    }
    let cover = patch.cover();
    if !cover.has_word_metric() {
        return match set {
            BoundarySet::Full => GeodesicCore::new(patch).contains(patch, p),
            _ => Err(Error::NotTree),
        };
    }
    let rank = cover.spec().rank();
    if let BoundarySet::Cylinders(c) = set {
        if rank == 1 {
            let ends: HashSet<bool> = c
                .prefixes()
                .iter()
                .flat_map(|w| match w.first() {
                    None => vec![true, false],
                    Some(s) => vec![s.is_inverse()],
                })
                .collect();
            if ends.len() < 2 {
                return Err(Error::TooFewBoundaryPoints);
            }
        }
    }
    let words: Vec<Vec<Symbol>> = match set {
        BoundarySet::Points(points) => {
            let mut distinct: Vec<&BoundaryPoint> = Vec::new();
            for z in points {
                if z.windowed {
                    return Err(Error::HorizonTooShort(z.head.len() as f64));
                }
                let same = |w: &&BoundaryPoint| z.same_point(cover, w);
                if !distinct.iter().any(same) {
                    distinct.push(z);
                }
            }
            if distinct.len() < 2 {
                return Err(Error::TooFewBoundaryPoints);
            }
            let depth = v_depth(p) + 2;
            distinct
                .iter()
                .map(|z| z.symbols(cover, depth).map(|w| w.to_vec()).ok_or(Error::NotTree))
                .collect::<Result<_>>()?
        }
        _ => Vec::new(),
    };
    // `forward` pieces are cylinders of `g·s`; the piece behind `g` is the complement of `g`'s cylinder.
    let forward = |u: &[Symbol]| match set {
        BoundarySet::Full => true,
        BoundarySet::Cylinders(c) => c.meets_cylinder(u),
        BoundarySet::Points(_) => words.iter().any(|w| w.starts_with(u)),
    };
    let behind = |u: &[Symbol]| match set {
        BoundarySet::Full => true,
        BoundarySet::Cylinders(c) => c.leaves_cylinder(u),
        BoundarySet::Points(_) => words.iter().any(|w| !w.starts_with(u)),
    };
    let extend = |g: &[Symbol], s: Symbol| {
        let mut u = g.to_vec();
        u.push(s);
        u
    };
    match p {
        GraphPoint::Vertex(v) => {
            let g = v.elem.word.as_slice();
            let mut pieces = 0;
            for i in 0..rank {
                for s in [Symbol::generator(i), Symbol::generator(i).inverse()] {
                    let meets = if g.last() == Some(&s.inverse()) {
                        behind(g)
                    } else {
                        forward(&extend(g, s))
                    };
                    pieces += meets as usize;
                }
            }
            Ok(pieces >= 2)
        }
        GraphPoint::OnEdge { from, side, offset } => {
            debug_assert!(!offset.is_zero());
            let Some(s) = side_symbol(cover, *side) else {
                return Ok(false);
            };
            let g = from.elem.word.as_slice();
            if g.last() == Some(&s.inverse()) {
                // the edge points back towards the basepoint
                Ok(forward(g) && behind(g))
            } else {
                let u = extend(g, s);
                Ok(forward(&u) && behind(&u))
            }
        }
    }
}

/// Word length of the vertex at or before `p`.
fn v_depth(p: &GraphPoint) -> usize {
    match p {
        GraphPoint::Vertex(v) => v.elem.len(),
        GraphPoint::OnEdge { from, .. } => from.elem.len(),
    }
}
