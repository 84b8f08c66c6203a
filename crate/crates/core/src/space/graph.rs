//! Finite metric graphs with rational edge lengths.
//!
//! Every undirected edge `e` owns two directed sides, `2e` (from → to) and
//! `2e + 1` (to → from). The side involution is `s ↦ s ^ 1`, which is
//! fixed-point free by construction. Loops and parallel edges are allowed.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact edge lengths and distances.
pub type Length = Ratio<i64>;

pub fn length_to_f64(l: &Length) -> f64 {
    l.to_f64().unwrap_or(f64::NAN)
}

/// A directed side of an undirected edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SideId(pub u32);

impl SideId {
    pub fn forward(edge: usize) -> Self {
        SideId((edge as u32) << 1)
    }

    #[inline]
    pub fn reverse(self) -> Self {
        SideId(self.0 ^ 1)
    }

    #[inline]
    pub fn edge(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub length: Length,
    pub label: String,
}

/// Length as it appears in description files: an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthRepr {
    Int(i64),
    Text(String),
}

impl LengthRepr {
    pub fn parse(&self) -> Result<Length> {
        match self {
            LengthRepr::Int(n) => Ok(Length::from_integer(*n)),
            LengthRepr::Text(s) => {
                let s = s.trim();
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num: i64 = num
                    .parse()
                    .map_err(|_| Error::Config(format!("bad length {s:?}")))?;
                let den: i64 = den
                    .parse()
                    .map_err(|_| Error::Config(format!("bad length {s:?}")))?;
                if den == 0 {
                    return Err(Error::Config(format!("bad length {s:?}")));
                }
                Ok(Length::new(num, den))
            }
        }
    }
}

impl From<Length> for LengthRepr {
    fn from(l: Length) -> Self {
        if l.is_integer() {
            LengthRepr::Int(l.to_integer())
        } else {
            LengthRepr::Text(format!("{}/{}", l.numer(), l.denom()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeDescription {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub length: LengthRepr,
    #[serde(default)]
    pub label: String,
}

/// Raw graph data, as read from a space description file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDescription {
    pub vertices: usize,
    pub edges: Vec<EdgeDescription>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    sides_at: Vec<Vec<SideId>>,
}

/// Checks positivity, vertex references and connectivity.
pub fn validate_graph(desc: &GraphDescription) -> Result<MetricGraph> {
    if desc.vertices == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(desc.edges.len());
    for e in &desc.edges {
        if !seen.insert(e.id.clone()) {
            return Err(Error::DuplicateEdge(e.id.clone()));
        }
        for v in [e.from, e.to] {
            if v >= desc.vertices {
                return Err(Error::DanglingVertex {
                    edge: e.id.clone(),
                    vertex: v,
                });
            }
        }
        let length = e.length.parse()?;
        if !length.is_positive() {
            return Err(Error::NonpositiveLength(e.id.clone()));
        }
        let label = if e.label.is_empty() { e.id.clone() } else { e.label.clone() };
        edges.push(Edge {
            id: e.id.clone(),
            from: e.from,
            to: e.to,
            length,
            label,
        });
    }
    let graph = MetricGraph::from_edges(desc.vertices, edges);
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(graph)
}

impl MetricGraph {
    fn from_edges(vertex_count: usize, edges: Vec<Edge>) -> Self {
        let mut sides_at = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            let s = SideId::forward(i);
            sides_at[e.from].push(s);
            sides_at[e.to].push(s.reverse());
        }
        for list in &mut sides_at {
            list.sort();
        }
        MetricGraph {
            vertex_count,
            edges,
            sides_at,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn side_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn sides(&self) -> impl Iterator<Item = SideId> + '_ {
        (0..self.side_count() as u32).map(SideId)
    }

    /// Outgoing sides at a vertex, sorted by id.
    pub fn sides_at(&self, v: usize) -> &[SideId] {
        &self.sides_at[v]
    }

    pub fn tail(&self, s: SideId) -> usize {
        let e = &self.edges[s.edge()];
        if s.is_forward() {
            e.from
        } else {
            e.to
        }
    }

    pub fn head(&self, s: SideId) -> usize {
        self.tail(s.reverse())
    }

    pub fn length(&self, s: SideId) -> Length {
        self.edges[s.edge()].length
    }

    pub fn max_length(&self) -> Length {
        self.edges
            .iter()
            .map(|e| e.length)
            .max()
            .unwrap_or_else(Length::zero)
    }

    pub fn has_unit_lengths(&self) -> bool {
        self.edges.iter().all(|e| e.length == Length::from_integer(1))
    }

    /// Human-readable side label: the edge label for the forward side and the
    /// label with its first letter case-swapped for the reverse side.
    pub fn side_label(&self, s: SideId) -> String {
        let label = &self.edges[s.edge()].label;
        if s.is_forward() {
            label.clone()
        } else {
            swap_first_case(label)
        }
    }

    /// Parses a concatenation of side labels, longest match first.
    pub fn parse_sides(&self, text: &str) -> Result<Vec<SideId>> {
        let mut labels: Vec<(String, SideId)> =
            self.sides().map(|s| (self.side_label(s), s)).collect();
        labels.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.1.cmp(&b.1)));
        let mut out = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let found = labels
                .iter()
                .find(|(l, _)| !l.is_empty() && rest.starts_with(l.as_str()));
            match found {
                Some((l, s)) => {
                    out.push(*s);
                    rest = &rest[l.len()..];
                }
                None => return Err(Error::MalformedWord(text.to_string())),
            }
        }
        Ok(out)
    }

    pub fn render_sides(&self, word: &[SideId]) -> String {
        word.iter().map(|s| self.side_label(*s)).collect()
    }

    /// Whether consecutive sides of `word` are incident.
    pub fn is_path(&self, word: &[SideId]) -> bool {
        word.windows(2).all(|w| self.head(w[0]) == self.tail(w[1]))
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &s in &self.sides_at[v] {
                let w = self.head(s);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Exact single-source distances in the (finite) graph itself.
    pub fn distances_from(&self, source: usize) -> Vec<Length> {
        let mut dist: Vec<Option<Length>> = vec![None; self.vertex_count];
        let mut heap = std::collections::BinaryHeap::new();
        dist[source] = Some(Length::zero());
        heap.push(std::cmp::Reverse((Length::zero(), source)));
        while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
            if dist[v].is_some_and(|best| best < d) {
                continue;
            }
            for &s in &self.sides_at[v] {
                let w = self.head(s);
                let nd = d + self.length(s);
                if dist[w].is_none_or(|best| nd < best) {
                    dist[w] = Some(nd);
                    heap.push(std::cmp::Reverse((nd, w)));
                }
            }
        }
        dist.into_iter()
            .map(|d| d.expect("graph is connected"))
            .collect()
    }

    pub fn to_description(&self) -> GraphDescription {
        GraphDescription {
            vertices: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDescription {
                    id: e.id.clone(),
                    from: e.from,
                    to: e.to,
                    length: e.length.into(),
                    label: e.label.clone(),
                })
                .collect(),
        }
    }
}

pub(crate) fn swap_first_case(label: &str) -> String {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_lowercase() => c.to_uppercase().chain(chars).collect(),
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

impl fmt::Display for MetricGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "graph({} vertices, {} edges)",
            self.vertex_count,
            self.edges.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rose(petals: usize) -> GraphDescription {
        GraphDescription {
            vertices: 1,
            edges: (0..petals)
                .map(|i| EdgeDescription {
                    id: format!("e{i}"),
                    from: 0,
                    to: 0,
                    length: LengthRepr::Int(1),
                    label: format!("a{}", i + 1),
                })
                .collect(),
        }
    }

    #[test]
    fn rose_is_valid() {
        let g = validate_graph(&rose(2)).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.sides_at(0).len(), 4);
        for s in g.sides() {
            assert_ne!(s, s.reverse());
            assert_eq!(s.reverse().reverse(), s);
        }
    }

    #[test]
    fn zero_length_rejected() {
        let mut d = rose(1);
        d.edges[0].length = LengthRepr::Int(0);
        assert_eq!(
            validate_graph(&d),
            Err(Error::NonpositiveLength("e0".into()))
        );
    }

    #[test]
    fn disconnected_rejected() {
        let d = GraphDescription {
            vertices: 2,
            edges: vec![EdgeDescription {
                id: "x".into(),
                from: 0,
                to: 0,
                length: LengthRepr::Int(1),
                label: "x".into(),
            }],
        };
        assert_eq!(validate_graph(&d), Err(Error::Disconnected));
    }

    #[test]
    fn dangling_vertex_rejected() {
        let mut d = rose(1);
        d.edges[0].to = 3;
        assert!(matches!(
            validate_graph(&d),
            Err(Error::DanglingVertex { vertex: 3, .. })
        ));
    }

    #[test]
    fn labels_round_trip() {
        let g = validate_graph(&rose(2)).unwrap();
        let w = g.parse_sides("a1A2a2").unwrap();
        assert_eq!(g.render_sides(&w), "a1A2a2");
        assert!(g.parse_sides("a3").is_err());
    }

    #[test]
    fn rational_lengths_parse() {
        assert_eq!(
            LengthRepr::Text("3/4".into()).parse().unwrap(),
            Length::new(3, 4)
        );
        assert!(LengthRepr::Text("1/0".into()).parse().is_err());
    }
}
