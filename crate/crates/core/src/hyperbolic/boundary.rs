//! Boundary points as eventually periodic edge words, visual balls and shadows.

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::gromov::gromov_product;
use crate::error::{Error, Result};
use crate::space::graph::{length_to_f64, Length};
use crate::space::group::{is_reduced, render_word};
use crate::space::{Cover, CoverPatch, CoverVertex, GraphPoint, SideId, Symbol, Word};

/// Group symbol carried by a side of a word-metric cover; `None` for trivial loops.
pub(crate) fn side_symbol(cover: &Cover, s: SideId) -> Option<Symbol> {
    cover.voltages().get(s).word.first().copied()
}

/// A geodesic ray from the basepoint, encoded as `head · period^∞`, or a finite
/// window `head` when only a prefix of the ray is known.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryPoint {
    pub head: Vec<SideId>,
    pub period: Vec<SideId>,
    pub windowed: bool,
}

impl BoundaryPoint {
    pub fn periodic(cover: &Cover, head: Vec<SideId>, period: Vec<SideId>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidParameter("period of a boundary point must be nonempty".into()));
        }
        let z = BoundaryPoint {
            head,
            period,
            windowed: false,
        };
        z.validate(cover)?;
        Ok(z)
    }

    pub fn windowed(cover: &Cover, head: Vec<SideId>) -> Result<Self> {
        let z = BoundaryPoint {
            head,
            period: Vec::new(),
            windowed: true,
        };
        z.validate(cover)?;
        Ok(z)
    }

    /// Parses side labels, e.g. `("a1", "a2")` for `a1 a2 a2 …`. An empty period gives a window.
    pub fn parse(cover: &Cover, head: &str, period: &str) -> Result<Self> {
        let base = cover.base();
        let h = base.parse_sides(head)?;
        let p = base.parse_sides(period)?;
        if p.is_empty() {
            BoundaryPoint::windowed(cover, h)
        } else {
            BoundaryPoint::periodic(cover, h, p)
        }
    }

    /// Number of known sides; `None` for periodic points.
    pub fn known_depth(&self) -> Option<usize> {
        self.windowed.then_some(self.head.len())
    }

    pub fn side(&self, i: usize) -> Option<SideId> {
        if i < self.head.len() {
            Some(self.head[i])
        } else if self.windowed {
            None
        } else {
            Some(self.period[(i - self.head.len()) % self.period.len()])
        }
    }

    pub fn render(&self, cover: &Cover) -> String {
        let base = cover.base();
        if self.windowed {
            format!("{}…", base.render_sides(&self.head))
        } else {
            format!("{}({})^∞", base.render_sides(&self.head), base.render_sides(&self.period))
        }
    }

    /// Group symbols of the first `n` sides (word-metric covers).
    pub(crate) fn symbols(&self, cover: &Cover, n: usize) -> Option<Word> {
        (0..n).map(|i| self.side(i).and_then(|s| side_symbol(cover, s))).collect()
    }

    /// Whether two periodic encodings name the same boundary point (word-metric covers).
    pub fn same_point(&self, cover: &Cover, other: &BoundaryPoint) -> bool {
        if self.windowed || other.windowed {
            return false;
        }
        let span = self.head.len().max(other.head.len()) + self.period.len().lcm(&other.period.len());
        self.symbols(cover, span) == other.symbols(cover, span)
    }

    fn validate(&self, cover: &Cover) -> Result<()> {
        let base = cover.base();
        let mut word = vec![];
        let span = self.head.len() + 2 * self.period.len();
        word.extend((0..span).map_while(|i| self.side(i)));
        if let Some(&first) = word.first() {
            if base.tail(first) != cover.basepoint_base() {
                return Err(Error::MalformedWord(base.render_sides(&word)));
            }
        }
        if !base.is_path(&word) {
            return Err(Error::MalformedWord(base.render_sides(&word)));
        }
        if cover.has_word_metric() {
            let syms = self
                .symbols(cover, word.len())
                .ok_or_else(|| Error::NotGeodesic(format!("{} crosses a trivial loop", self.render(cover))))?;
            if !is_reduced(&syms) {
                return Err(Error::NotGeodesic(format!("{} backtracks", self.render(cover))));
            }
        }
        Ok(())
    }

    /// Vertices `ξ(0), ξ(1), …` up to the first one at distance at least `t`, with their distances.
    fn walk_until(&self, cover: &Cover, t: Length) -> Result<Vec<(CoverVertex, Length)>> {
        let base = cover.base();
        let mut out = vec![(cover.basepoint(), Length::zero())];
        let mut i = 0;
        while out.last().unwrap().1 < t {
            let s = self.side(i).ok_or(Error::HorizonTooShort(length_to_f64(&t)))?;
            let (v, d) = out.last().unwrap().clone();
            out.push((cover.step(&v, s), d + base.length(s)));
            i += 1;
        }
        Ok(out)
    }
}

/// The point `ξ_{x,z}(t)` of the ray from the basepoint to `z`.
pub fn ray_point(patch: &CoverPatch, z: &BoundaryPoint, t: Length) -> Result<GraphPoint> {
    if t < Length::zero() {
        return Err(Error::InvalidParameter("negative ray time".into()));
    }
    if t > patch.radius() {
        return Err(Error::Uncertified {
            needed: length_to_f64(&t),
            available: length_to_f64(&patch.radius()),
        });
    }
    let cover = patch.cover();
    let path = z.walk_until(cover, t)?;
    if !cover.has_word_metric() {
        for (k, (v, d)) in path.iter().enumerate() {
            if *d <= patch.radius() && patch.depth_of(v) != Some(*d) {
                return Err(Error::NotGeodesic(format!(
                    "{} leaves the geodesic at step {k}",
                    z.render(cover)
                )));
            }
        }
    }
    let k = path.len() - 1;
    let (v, d) = &path[k];
    if *d == t {
        return Ok(GraphPoint::Vertex(v.clone()));
    }
    let (prev, dp) = &path[k - 1];
    GraphPoint::on_edge(cover, prev.clone(), z.side(k - 1).unwrap(), t - *dp)
}

/// `(z, z')_x` for boundary points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BoundaryProduct {
    /// `exact` is false when the value comes from finite ray segments.
    Finite { value: f64, exact: bool },
    Infinite,
}

impl BoundaryProduct {
    pub fn exceeds(&self, level: f64) -> bool {
        match self {
            BoundaryProduct::Infinite => true,
            BoundaryProduct::Finite { value, .. } => *value > level,
        }
    }
}

/// On word-metric covers the product is the length of the longest common prefix of the
/// group words, which is exact. Elsewhere it is `(ξ(depth), ξ'(depth))_x`.
pub fn boundary_gromov_product(
    patch: &CoverPatch,
    z: &BoundaryPoint,
    w: &BoundaryPoint,
    depth: usize,
) -> Result<BoundaryProduct> {
    let cover = patch.cover();
    if cover.has_word_metric() {
        if z.same_point(cover, w) {
            return Ok(BoundaryProduct::Infinite);
        }
        for i in 0..depth {
            let a = z.side(i).and_then(|s| side_symbol(cover, s));
            let b = w.side(i).and_then(|s| side_symbol(cover, s));
            match (a, b) {
                (Some(a), Some(b)) if a == b => {}
                (Some(_), Some(_)) => {
                    return Ok(BoundaryProduct::Finite {
                        value: i as f64,
                        exact: true,
                    })
                }
                _ => return Err(Error::Indistinguishable(i)),
            }
        }
        return Err(Error::Indistinguishable(depth));
    }
    let t = Length::from_integer(depth as i64);
    let p = ray_point(patch, z, t)?;
    let q = ray_point(patch, w, t)?;
    if p == q {
        return Err(Error::Indistinguishable(depth));
    }
    let x = GraphPoint::Vertex(cover.basepoint());
    let value = gromov_product(patch, &x, &p, &q)?;
    Ok(BoundaryProduct::Finite {
        value: length_to_f64(&value),
        exact: false,
    })
}

/// Whether `w` lies in the visual ball `B_x(z, ρ) = {w : (z, w)_x > log(1/ρ)}`.
pub fn visual_ball_contains(patch: &CoverPatch, z: &BoundaryPoint, rho: f64, w: &BoundaryPoint) -> Result<bool> {
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("visual radius {rho}")));
    }
    let level = (1.0 / rho).ln();
    if level < 0.0 {
        return Ok(true);
    }
    let depth = level.floor() as usize + 1;
    match boundary_gromov_product(patch, z, w, depth) {
        Ok(p) => Ok(p.exceeds(level)),
        // the first `depth` symbols agree, so the product is at least `depth > level`
        Err(Error::Indistinguishable(d)) if d == depth && patch.cover().has_word_metric() => Ok(true),
        Err(e) => Err(e),
    }
}

fn point_vertex_distance(patch: &CoverPatch, y: &GraphPoint, v: &CoverVertex) -> Result<Length> {
    let cover = patch.cover();
    if cover.has_word_metric() {
        let mut best: Option<Length> = None;
        for (end, t) in y.ends(cover) {
            let d = t + cover.vertex_distance(&end, v, Length::zero())?;
            best = Some(best.map_or(d, |b| b.min(d)));
        }
        return Ok(best.unwrap());
    }
    patch.distance(y, &GraphPoint::Vertex(v.clone()))
}

/// Whether every geodesic ray from the basepoint to `z` meets the open ball `B(y, r)`.
///
/// On word-metric covers the rays to `z` are the choices among parallel sides with the same
/// symbol; they share their vertices, and an edge meets the ball away from its ends only if it
/// carries `y`. Elsewhere the encoded ray is checked.
pub fn shadow_contains(patch: &CoverPatch, y: &GraphPoint, r: Length, z: &BoundaryPoint) -> Result<bool> {
    if r <= Length::zero() {
        return Err(Error::InvalidParameter("shadow radius must be positive".into()));
    }
    let cover = patch.cover();
    let base = cover.base();
    let x = GraphPoint::Vertex(cover.basepoint());
    let depth_y = if cover.has_word_metric() {
        point_vertex_distance(patch, y, &cover.basepoint())?
    } else {
        patch.distance(&x, y)?
    };
    let path = z.walk_until(cover, depth_y + r)?;
    for (k, (v, _)) in path.iter().enumerate() {
        if point_vertex_distance(patch, y, v)? < r {
            return Ok(true);
        }
        let Some(s) = z.side(k).filter(|_| k + 1 < path.len()) else { continue };
        let GraphPoint::OnEdge { from, side, .. } = y else { continue };
        let carries_y = if s.is_forward() {
            (v, s) == (from, *side)
        } else {
            (&path[k + 1].0, s.reverse()) == (from, *side)
        };
        if carries_y {
            if !cover.has_word_metric() {
                return Ok(true);
            }
            let g = cover.voltages().get(s);
            let copies = base
                .sides_at(base.tail(s))
                .iter()
                .filter(|&&t| cover.voltages().get(t) == g)
                .count();
            if copies == 1 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Boundary points extending any of finitely many reduced group-word prefixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderSet {
    prefixes: Vec<Word>,
}

impl CylinderSet {
    /// Drops prefixes that extend another listed prefix and sorts the rest.
    pub fn new(prefixes: Vec<Word>) -> Result<Self> {
        if prefixes.is_empty() {
            return Err(Error::EmptyBoundarySet);
        }
        let mut sorted = prefixes;
        for p in &sorted {
            if !is_reduced(p) {
                return Err(Error::MalformedWord(render_word(p)));
            }
        }
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut kept: Vec<Word> = Vec::new();
        for p in sorted {
            if !kept.iter().any(|k| p.starts_with(k)) {
                kept.push(p);
            }
        }
        kept.sort();
        Ok(CylinderSet { prefixes: kept })
    }

    /// Parses side-label prefixes of a word-metric cover into group words.
    pub fn parse(cover: &Cover, prefixes: &[&str]) -> Result<Self> {
        if !cover.has_word_metric() {
            return Err(Error::NotTree);
        }
        let mut words = Vec::new();
        for p in prefixes {
            let sides = cover.base().parse_sides(p)?;
            let w: Option<Word> = sides.iter().map(|&s| side_symbol(cover, s)).collect();
            words.push(w.ok_or_else(|| Error::MalformedWord(p.to_string()))?);
        }
        CylinderSet::new(words)
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    /// Whether the cylinder of `u` meets the set.
    pub fn meets_cylinder(&self, u: &[Symbol]) -> bool {
        self.prefixes.iter().any(|c| c.starts_with(u) || u.starts_with(c))
    }

    /// Whether some point of the set avoids the cylinder of `u`.
    pub fn leaves_cylinder(&self, u: &[Symbol]) -> bool {
        self.prefixes.iter().any(|c| !c.starts_with(u))
    }

    pub fn contains(&self, cover: &Cover, z: &BoundaryPoint) -> Result<bool> {
        let n = self.prefixes.iter().map(|p| p.len()).max().unwrap_or(0);
        let syms = z.symbols(cover, n).ok_or(Error::HorizonTooShort(n as f64))?;
        Ok(self.prefixes.iter().any(|c| syms.starts_with(c)))
    }
}
