//! Growth-rate estimators: orbit growth and covering numbers of balls and hull pieces.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_traits::Zero;

use super::report::{EntropyReport, FitModel, ReportConfig, ReportRow};
use crate::error::{Error, Result};
use crate::hyperbolic::hull::{qc_hull_contains, BoundarySet, GeodesicCore};
use crate::space::cover::DEFAULT_VERTEX_BUDGET;
use crate::space::graph::{length_to_f64, Length};
use crate::space::{Cover, CoverPatch, GraphPoint, SideId};

fn config_with_r(r: Option<Length>) -> ReportConfig {
    ReportConfig {
        r: r.map(|r| length_to_f64(&r)),
        a: None,
        anchor_radius: None,
        seed: None,
    }
}

/// Slope of `log #(Γx ∩ B(x,T))` against `T`, from exact orbit counts.
pub fn critical_exponent_estimate(cover: &Cover, horizons: &[usize]) -> Result<EntropyReport> {
    let max_t = horizons.iter().copied().max().ok_or_else(|| Error::InvalidParameter("no horizons".into()))?;
    let counts: Vec<usize> = if cover.base().has_unit_lengths() {
        let layers = cover.layer_counts(max_t, DEFAULT_VERTEX_BUDGET)?;
        layers
            .iter()
            .scan(0usize, |acc, l| {
                *acc += l.orbit_sphere;
                Some(*acc)
            })
            .collect()
    } else {
        let patch = cover.expand(Length::from_integer(max_t as i64))?;
        (0..=max_t)
            .map(|t| patch.orbit_count(Length::from_integer(t as i64)))
            .collect::<Result<_>>()?
    };
    let rows = horizons
        .iter()
        .map(|&t| ReportRow {
            horizon: t as f64,
            count_lo: counts[t] as f64,
            count_hi: counts[t] as f64,
            exact: true,
        })
        .collect();
    Ok(EntropyReport::from_rows("hcrit", rows, FitModel::Linear, config_with_r(None)))
}

/// A closed subset of the patch made of whole edges and vertices.
struct Region {
    /// Patch vertex indices.
    nodes: Vec<usize>,
    /// `(tail, head, forward side, length)`; loops have `tail == head`.
    edges: Vec<(usize, usize, SideId, Length)>,
}

impl Region {
    /// `B(x, T)` for integer-free `T`: vertices within `T` and edges whose farthest point is within `T`.
    fn ball(patch: &CoverPatch, t: Length, keep_vertex: impl Fn(usize) -> bool, keep_edge: impl Fn(usize, SideId) -> bool) -> Self {
        let base = patch.cover().base();
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for i in 0..patch.len() {
            if patch.depth(i) > t || !keep_vertex(i) {
                continue;
            }
            nodes.push(i);
            for (s, j) in patch.neighbors(i) {
                let Some(j) = j else { continue };
                if !s.is_forward() {
                    continue;
                }
                let len = base.length(s);
                let far = (patch.depth(i) + patch.depth(j) + len) / 2;
                if far <= t && keep_edge(i, s) {
                    edges.push((i, j, s, len));
                }
            }
        }
        Region { nodes, edges }
    }

    /// Connected components when the region is a forest, `None` otherwise.
    fn forest_components(&self) -> Option<usize> {
        let index: HashMap<usize, usize> = self.nodes.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = self.nodes.len();
        for &(i, j, _, _) in &self.edges {
            let (a, b) = (find(&mut parent, index[&i]), find(&mut parent, index[&j]));
            if a == b {
                return None;
            }
            parent[a] = b;
            components -= 1;
        }
        Some(components)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Cover1 {
    /// Some uncovered point lies at distance up to this value below the node.
    Demand(Length),
    /// A placed center covers this far beyond the node.
    Surplus(Length),
}

/// Minimum number of closed `r`-balls covering a finite metric forest, counted exactly by the
/// leaf-to-root greedy that places each center as far from the leaves as its demand allows.
fn forest_cover_count(region: &Region, r: Length) -> usize {
    let index: HashMap<usize, usize> = region.nodes.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let n = region.nodes.len();
    let mut adj: Vec<Vec<(usize, Length)>> = vec![Vec::new(); n];
    for &(i, j, _, len) in &region.edges {
        let (a, b) = (index[&i], index[&j]);
        adj[a].push((b, len));
        adj[b].push((a, len));
    }
    let mut count = 0;
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        // iterative DFS order, then process in reverse
        let mut order = Vec::new();
        let mut parent: Vec<Option<(usize, Length)>> = vec![None; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, len) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, len));
                    stack.push(w);
                }
            }
        }
        let mut demand: Vec<Option<Length>> = vec![None; n];
        let mut surplus: Vec<Option<Length>> = vec![None; n];
        for &v in order.iter().rev() {
            let state = match (demand[v], surplus[v]) {
                (None, Some(s)) => Cover1::Surplus(s),
                (Some(d), Some(s)) if s >= d => Cover1::Surplus(s),
                (d, _) => Cover1::Demand(d.unwrap_or_else(Length::zero)),
            };
            let Some((p, len)) = parent[v] else {
                if matches!(state, Cover1::Demand(_)) {
                    count += 1;
                }
                continue;
            };
            let (placed, up) = along_edge(state, len, r);
            count += placed;
            match up {
                Cover1::Demand(d) => demand[p] = Some(demand[p].map_or(d, |e| e.max(d))),
                Cover1::Surplus(s) => surplus[p] = Some(surplus[p].map_or(s, |e| e.max(s))),
            }
        }
    }
    count
}

/// Carries a state up an edge of length `len`, placing centers when a demand would exceed `r`.
fn along_edge(state: Cover1, len: Length, r: Length) -> (usize, Cover1) {
    match state {
        Cover1::Surplus(s) if s >= len => (0, Cover1::Surplus(s - len)),
        Cover1::Surplus(s) => along_edge(Cover1::Demand(Length::zero()), len - s, r),
        Cover1::Demand(d) => {
            let mut placed = 0;
            let mut d = d;
            let mut rest = len;
            loop {
                if d + rest <= r {
                    return (placed, Cover1::Demand(d + rest));
                }
                placed += 1;
                let reach = (r - d) + r;
                if reach >= rest {
                    return (placed, Cover1::Surplus(reach - rest));
                }
                rest -= reach;
                d = Length::zero();
            }
        }
    }
}

/// Net of vertices and edge midpoints with a bracket `[lo, hi]` on `Cov(region, r)`.
///
/// `lo` is a greedy `2r`-separated subset of the net. `hi` is a greedy `r`-cover of the net,
/// completed by one center per `2r` of any edge whose coverage has a gap.
fn net_bracket(patch: &CoverPatch, region: &Region, r: Length) -> Result<(usize, usize)> {
    let base = patch.cover().base();
    let mut vertex_slot: HashMap<usize, usize> = HashMap::new();
    for (k, &i) in region.nodes.iter().enumerate() {
        vertex_slot.insert(i, k);
    }
    let mut incident: HashMap<usize, Vec<(usize, Length)>> = HashMap::new();
    let mut sources: Vec<Vec<(usize, Length)>> = region.nodes.iter().map(|&i| vec![(i, Length::zero())]).collect();
    let mut depth: Vec<Length> = region.nodes.iter().map(|&i| patch.depth(i)).collect();
    for &(i, j, _, len) in &region.edges {
        let slot = sources.len();
        sources.push(vec![(i, len / 2), (j, len / 2)]);
        depth.push(patch.depth(i).min(patch.depth(j)) + len / 2);
        incident.entry(i).or_default().push((slot, len / 2));
        incident.entry(j).or_default().push((slot, len / 2));
    }
    let neighbours = |k: usize, rho: Length| -> Vec<usize> {
        let mut best: HashMap<usize, Length> = HashMap::new();
        let mut heap = BinaryHeap::new();
        for &(i, d) in &sources[k] {
            if d <= rho && best.get(&i).is_none_or(|b| d < *b) {
                best.insert(i, d);
                heap.push(Reverse((d, i)));
            }
        }
        let mut out = vec![k];
        let mut done: HashMap<usize, Length> = HashMap::new();
        while let Some(Reverse((d, v))) = heap.pop() {
            if done.contains_key(&v) {
                continue;
            }
            done.insert(v, d);
            if let Some(&slot) = vertex_slot.get(&v) {
                out.push(slot);
            }
            for &(slot, half) in incident.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if d + half <= rho {
                    out.push(slot);
                }
            }
            for (s, w) in patch.neighbors(v) {
                let Some(w) = w else { continue };
                let nd = d + base.length(s);
                if nd <= rho && !done.contains_key(&w) && best.get(&w).is_none_or(|b| nd < *b) {
                    best.insert(w, nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        out
    };
    // deepest first, so centers sit near the frontier and cover inward
    let mut order: Vec<usize> = (0..sources.len()).collect();
    order.sort_by(|&a, &b| depth[b].cmp(&depth[a]).then(a.cmp(&b)));
    let greedy = |rho: Length| -> Vec<usize> {
        let mut blocked = vec![false; sources.len()];
        let mut chosen = Vec::new();
        for &k in &order {
            if blocked[k] {
                continue;
            }
            chosen.push(k);
            for m in neighbours(k, rho) {
                blocked[m] = true;
            }
        }
        chosen
    };
    let lo = greedy(r + r).len();
    let centers = greedy(r);
    let seeds: Vec<(usize, Length)> = centers.iter().flat_map(|&k| sources[k].iter().copied()).collect();
    let reach = patch.distances_from_many(&seeds);
    let on_edge: std::collections::HashSet<usize> = centers.iter().copied().filter(|&k| k >= region.nodes.len()).collect();
    let mut extra = 0;
    for (e, &(i, j, _, len)) in region.edges.iter().enumerate() {
        let mut pieces: Vec<(Length, Length)> = Vec::new();
        if let Some(d) = reach[i].filter(|d| *d <= r) {
            pieces.push((Length::zero(), r - d));
        }
        if let Some(d) = reach[j].filter(|d| *d <= r) {
            pieces.push((len - (r - d), len));
        }
        if on_edge.contains(&(region.nodes.len() + e)) {
            pieces.push((len / 2 - r, len / 2 + r));
        }
        pieces.sort();
        let mut covered = Length::zero();
        for (a, b) in pieces {
            if a > covered {
                break;
            }
            covered = covered.max(b);
        }
        if covered < len {
            extra += (len / (r + r)).ceil().to_integer() as usize;
        }
    }
    Ok((lo, (centers.len() + extra).max(lo)))
}

fn region_count(patch: &CoverPatch, region: &Region, r: Length, t: Length) -> Result<ReportRow> {
    let horizon = length_to_f64(&t);
    match region.forest_components() {
        Some(c) => {
            let n = forest_cover_count(region, r) as f64;
            Ok(ReportRow {
                horizon,
                count_lo: n,
                count_hi: n,
                exact: c <= 1,
            })
        }
        None => {
            if patch.radius() < t + Length::from_integer(1) {
                return Err(Error::Uncertified {
                    needed: horizon + 1.0,
                    available: length_to_f64(&patch.radius()),
                });
            }
            let (lo, hi) = net_bracket(patch, region, r)?;
            Ok(ReportRow {
                horizon,
                count_lo: lo as f64,
                count_hi: hi as f64,
                exact: lo == hi,
            })
        }
    }
}

fn check_horizons(patch: &CoverPatch, horizons: &[usize], r: Length) -> Result<()> {
    if r <= Length::zero() {
        return Err(Error::InvalidParameter("covering radius must be positive".into()));
    }
    let max = horizons.iter().copied().max().ok_or_else(|| Error::InvalidParameter("no horizons".into()))?;
    patch.check_horizon(Length::from_integer(max as i64))
}

/// `log Cov(B(x,T), r)` against `T`, with the polynomial-corrected fit.
pub fn covering_entropy_estimate(patch: &CoverPatch, r: Length, horizons: &[usize]) -> Result<EntropyReport> {
    check_horizons(patch, horizons, r)?;
    let mut rows = Vec::new();
    for &t in horizons {
        let t = Length::from_integer(t as i64);
        let region = Region::ball(patch, t, |_| true, |_, _| true);
        rows.push(region_count(patch, &region, r, t)?);
    }
    Ok(EntropyReport::from_rows("hcov", rows, FitModel::PolynomialCorrected, config_with_r(Some(r))))
}

/// `log Cov(B(x,T) ∩ QC-Hull(C), r)` against `T`.
pub fn geodesic_covering_entropy_estimate(
    patch: &CoverPatch,
    set: &BoundarySet,
    r: Length,
    horizons: &[usize],
) -> Result<EntropyReport> {
    geodesic_covering_rows(patch, set, r, horizons, "hgeod")
}

pub(crate) fn geodesic_covering_rows(
    patch: &CoverPatch,
    set: &BoundarySet,
    r: Length,
    horizons: &[usize],
    quantity: &str,
) -> Result<EntropyReport> {
    check_horizons(patch, horizons, r)?;
    let cover = patch.cover();
    let (vertices, edges) = if cover.has_word_metric() {
        let mut vertices = vec![false; patch.len()];
        let mut edges = std::collections::HashSet::new();
        let max = Length::from_integer(*horizons.iter().max().unwrap() as i64);
        for i in 0..patch.len() {
            if patch.depth(i) > max {
                break;
            }
            let v = patch.vertex(i).clone();
            vertices[i] = qc_hull_contains(patch, set, &GraphPoint::Vertex(v.clone()))?;
            for (s, j) in patch.neighbors(i) {
                if s.is_forward() && j.is_some() {
                    let mid = GraphPoint::midpoint(cover, v.clone(), s);
                    if patch.contains_point(&mid) && qc_hull_contains(patch, set, &mid)? {
                        edges.insert((i, s));
                    }
                }
            }
        }
        (vertices, edges)
    } else {
        if *set != BoundarySet::Full {
            return Err(Error::NotTree);
        }
        let core = GeodesicCore::new(patch);
        (core.vertices, core.edges)
    };
    let mut rows = Vec::new();
    for &t in horizons {
        let t = Length::from_integer(t as i64);
        let region = Region::ball(patch, t, |i| vertices[i], |i, s| edges.contains(&(i, s)));
        if region.nodes.is_empty() {
            rows.push(ReportRow {
                horizon: length_to_f64(&t),
                count_lo: 1.0,
                count_hi: 1.0,
                exact: false,
            });
            continue;
        }
        rows.push(region_count(patch, &region, r, t)?);
    }
    Ok(EntropyReport::from_rows(quantity, rows, FitModel::PolynomialCorrected, config_with_r(Some(r))))
}
