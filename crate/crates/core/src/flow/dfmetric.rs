//! The weighted distance `D_f(γ, γ') = sup_s d(γ(s), γ'(s)) f(s)` between lines,
//! its dynamical version, and the induced distance between deck classes.
//!
//! On unit-length graphs `s ↦ d(γ(s), γ'(s))` is piecewise affine with rational
//! breakpoints, so the supremum over a window is resolved cell by cell in closed form.

use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::path::GeodesicPath;
use super::weight::WeightFunction;
use crate::error::{Error, Result};
use crate::space::{Cover, CoverPatch, CoverVertex, GraphPoint, GroupElement, Length, SideId};

/// A closed bracket `[lo, hi]` around a supremum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn max(self, o: Interval) -> Interval {
        Interval { lo: self.lo.max(o.lo), hi: self.hi.max(o.hi) }
    }
}

/// Exact vertex distances with a per-call cache. Word-metric covers need no patch.
pub(crate) struct VertexMetric<'a> {
    patch: &'a CoverPatch,
    cache: HashMap<(CoverVertex, CoverVertex), Length>,
}

impl<'a> VertexMetric<'a> {
    pub(crate) fn new(patch: &'a CoverPatch) -> Self {
        VertexMetric { patch, cache: HashMap::new() }
    }

    pub(crate) fn cover(&self) -> &'a Cover {
        self.patch.cover()
    }

    pub(crate) fn dist(&mut self, a: &CoverVertex, b: &CoverVertex) -> Result<Length> {
        if a == b {
            return Ok(Length::zero());
        }
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(d) = self.cache.get(&key) {
            return Ok(*d);
        }
        let cover = self.patch.cover();
        let d = if cover.has_word_metric() {
            cover.vertex_distance(a, b, Length::zero())?
        } else {
            self.patch
                .distance(&GraphPoint::Vertex(a.clone()), &GraphPoint::Vertex(b.clone()))?
        };
        self.cache.insert(key, d);
        Ok(d)
    }

    /// Exact distance between two points, through their edge ends or along a shared edge.
    pub(crate) fn point_dist(&mut self, p: &GraphPoint, q: &GraphPoint) -> Result<Length> {
        let cover = self.patch.cover();
        let mut best: Option<Length> = None;
        if let (
            GraphPoint::OnEdge { from: a, side: s, offset: x },
            GraphPoint::OnEdge { from: b, side: t, offset: y },
        ) = (p, q)
        {
            if a == b && s == t {
                best = Some(if x > y { *x - *y } else { *y - *x });
            }
        }
        for (u, du) in p.ends(cover) {
            for (v, dv) in q.ends(cover) {
                let d = du + self.dist(&u, &v)? + dv;
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        Ok(best.unwrap())
    }
}

/// `α + β u`
#[derive(Clone, Copy, Debug, PartialEq)]
struct Affine {
    a: Length,
    b: Length,
}

impl Affine {
    fn at(&self, u: Length) -> Length {
        self.a + self.b * u
    }
}

/// One side of a line on a cell: the edge it runs along and the time it left its tail.
struct Track<'p> {
    path: &'p GeodesicPath,
    first: i64,
    vertices: Vec<CoverVertex>,
}

impl<'p> Track<'p> {
    fn new(cover: &Cover, path: &'p GeodesicPath, lo: Length, hi: Length) -> Result<Self> {
        let first = (path.position + lo).floor().to_integer();
        let last = (path.position + hi).ceil().to_integer();
        Ok(Track { path, first, vertices: path.vertices(cover, first, last.max(first + 1))? })
    }

    /// Tail vertex, head vertex, side and tail time of the edge containing time `u`.
    fn edge_at(&self, u: Length) -> (&CoverVertex, &CoverVertex, SideId, Length) {
        let k = (self.path.position + u).floor().to_integer();
        let i = (k - self.first) as usize;
        let side = self.path.word.symbol(k).expect("track vertices exist so the symbol does");
        (&self.vertices[i], &self.vertices[i + 1], side, Length::from_integer(k) - self.path.position)
    }

    fn breakpoints(&self, lo: Length, hi: Length, out: &mut Vec<Length>) {
        let mut k = (self.path.position + lo).ceil().to_integer();
        loop {
            let u = Length::from_integer(k) - self.path.position;
            if u > hi {
                break;
            }
            out.push(u);
            k += 1;
        }
    }
}

/// `sup_u m(u) F(u)` over `[lo, hi]` where `F(u) = f(dist(u, [0, T]))`, together with the
/// exact values of `m` at the window ends and at `0` and `T`, and `max_{[0,T]} m`.
struct Profile {
    sup: f64,
    left_end: Length,
    left_inner: Length,
    right_inner: Length,
    right_end: Length,
    plateau_max: Length,
}

fn profile(
    metric: &mut VertexMetric,
    f: &WeightFunction,
    p: &GeodesicPath,
    q: &GeodesicPath,
    horizon: Length,
    window: Length,
) -> Result<Profile> {
    let cover = metric.cover();
    let lo = -window;
    let hi = horizon + window;
    let tp = Track::new(cover, p, lo, hi)?;
    let tq = Track::new(cover, q, lo, hi)?;
    let mut cuts = vec![lo, hi, Length::zero(), horizon];
    tp.breakpoints(lo, hi, &mut cuts);
    tq.breakpoints(lo, hi, &mut cuts);
    cuts.retain(|u| *u >= lo && *u <= hi);
    cuts.sort();
    cuts.dedup();

    let mut sup = f64::NEG_INFINITY;
    let mut marks: HashMap<Length, Length> = HashMap::new();
    let mut plateau_max: Option<Length> = None;
    let mut pieces: Vec<Affine> = Vec::with_capacity(6);
    let mut sub: Vec<Length> = Vec::new();
    for w in cuts.windows(2) {
        let (c0, c1) = (w[0], w[1]);
        let mid = (c0 + c1) / 2;
        let (pp, pn, ps, sp) = tp.edge_at(mid);
        let (qp, qn, qs, sq) = tq.edge_at(mid);
        let one = Length::from_integer(1);
        pieces.clear();
        let two = Length::from_integer(2);
        pieces.push(Affine { a: metric.dist(pp, qp)? - sp - sq, b: two });
        pieces.push(Affine { a: metric.dist(pp, qn)? - sp + sq + one, b: Length::zero() });
        pieces.push(Affine { a: metric.dist(pn, qp)? + sp + one - sq, b: Length::zero() });
        pieces.push(Affine { a: metric.dist(pn, qn)? + sp + sq + two, b: -two });
        // same undirected edge: the distance along it, |pos_p − pos_q|
        let along = {
            let canon = |from: &CoverVertex, to: &CoverVertex, s: SideId, t0: Length| {
                if s.is_forward() {
                    (from.clone(), s, Affine { a: -t0, b: one })
                } else {
                    (to.clone(), s.reverse(), Affine { a: one + t0, b: -one })
                }
            };
            let (fa, sa, xa) = canon(pp, pn, ps, sp);
            let (fb, sb, xb) = canon(qp, qn, qs, sq);
            (fa == fb && sa == sb).then(|| Affine { a: xa.a - xb.a, b: xa.b - xb.b })
        };
        sub.clear();
        sub.push(c0);
        sub.push(c1);
        let mut all = pieces.clone();
        if let Some(x) = along {
            all.push(x);
            all.push(Affine { a: -x.a, b: -x.b });
        }
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let db = all[i].b - all[j].b;
                if !db.is_zero() {
                    let u = (all[j].a - all[i].a) / db;
                    if u > c0 && u < c1 {
                        sub.push(u);
                    }
                }
            }
        }
        sub.sort();
        sub.dedup();
        for s in sub.windows(2) {
            let (u0, u1) = (s[0], s[1]);
            let m = (u0 + u1) / 2;
            let mut best = pieces[0];
            for c in pieces.iter().skip(1) {
                if c.at(m) < best.at(m) {
                    best = *c;
                }
            }
            if let Some(x) = along {
                let signed = if x.at(m).is_negative() { Affine { a: -x.a, b: -x.b } } else { x };
                if signed.at(m) < best.at(m) {
                    best = signed;
                }
            }
            for u in [u0, u1] {
                marks.entry(u).or_insert_with(|| best.at(u));
            }
            if u0 >= Length::zero() && u1 <= horizon {
                let top = best.at(u0).max(best.at(u1));
                plateau_max = Some(plateau_max.map_or(top, |p| p.max(top)));
            }
            sup = sup.max(affine_sup(f, best, u0, u1, horizon));
        }
    }
    let at = |u: Length| marks.get(&u).copied().unwrap_or_default();
    Ok(Profile {
        sup: sup.max(0.0),
        left_end: at(lo),
        left_inner: at(Length::zero()),
        right_inner: at(horizon),
        right_end: at(hi),
        plateau_max: plateau_max.unwrap_or_else(|| at(Length::zero())),
    })
}

/// `sup_{u ∈ [u0,u1]} (α + β u) F(u)` for an interval inside one of `u ≤ 0`, `[0,T]`, `u ≥ T`.
fn affine_sup(f: &WeightFunction, g: Affine, u0: Length, u1: Length, horizon: Length) -> f64 {
    let val = |u: Length| g.at(u).to_f64().unwrap_or(f64::NAN);
    if u0 >= Length::zero() && u1 <= horizon {
        return val(u0).max(val(u1));
    }
    // distance to the plateau as a function of u, with sign σ
    let (base, sigma) = if u1 <= Length::zero() { (Length::zero(), -1.0) } else { (horizon, 1.0) };
    let h = |u: Length| val(u) * f.eval((u - base).to_f64().unwrap_or(f64::NAN));
    let mut best = h(u0).max(h(u1));
    if !g.b.is_zero() {
        // d/dv of (α' + β' v) e^{-a v} vanishes at v = 1/a − α'/β'
        let b = g.b.to_f64().unwrap() * sigma;
        let a0 = g.at(base).to_f64().unwrap();
        let v = 1.0 / f.decay - a0 / b;
        let u = base.to_f64().unwrap() + sigma * v;
        let (l, r) = (u0.to_f64().unwrap(), u1.to_f64().unwrap());
        if v >= 0.0 && u > l && u < r {
            best = best.max((a0 + b * v) * f.eval(v));
        }
    }
    best
}

/// `D_f` restricted to times in `[−W, W]`, widened by the tail bound beyond the window.
pub fn d_f(patch: &CoverPatch, f: &WeightFunction, p: &GeodesicPath, q: &GeodesicPath, window: Length) -> Result<Interval> {
    d_f_dyn(patch, f, p, q, Length::zero(), window)
}

/// `sup_{t ∈ [0, T]} D_f(Φ_t γ, Φ_t γ')`.
pub fn d_f_dyn(
    patch: &CoverPatch,
    f: &WeightFunction,
    p: &GeodesicPath,
    q: &GeodesicPath,
    horizon: Length,
    window: Length,
) -> Result<Interval> {
    let mut metric = VertexMetric::new(patch);
    d_f_dyn_with(&mut metric, f, p, q, horizon, window)
}

pub(crate) fn d_f_dyn_with(
    metric: &mut VertexMetric,
    f: &WeightFunction,
    p: &GeodesicPath,
    q: &GeodesicPath,
    horizon: Length,
    window: Length,
) -> Result<Interval> {
    if horizon.is_negative() || window.is_negative() {
        return Err(Error::InvalidParameter("horizon and window must be nonnegative".into()));
    }
    if p == q {
        return Ok(Interval::ZERO);
    }
    let pr = profile(metric, f, p, q, horizon, window)?;
    let w = window.to_f64().unwrap();
    let fl = |x: Length| x.to_f64().unwrap();
    // beyond the window m grows at most with slope 2 from either of two reference times
    let side = |inner: Length, end: Length| fl(inner.min(end)) * f.eval(w) + f.tail_bound(w);
    let cap = fl(pr.plateau_max) + f.tail_bound(0.0);
    let hi = pr.sup.max(side(pr.left_inner, pr.left_end)).max(side(pr.right_inner, pr.right_end));
    let hi = hi.min(cap);
    Ok(Interval { lo: pr.sup.min(hi), hi })
}

/// Radius beyond which the deck search gives up when no translate of `γ(0)` was found.
const SEARCH_LIMIT: i64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientDistance {
    pub lo: f64,
    pub hi: f64,
    /// Deck elements `g` whose bracket for `d(gγ, γ')` meets the minimum.
    #[serde(skip)]
    pub minimizers: Vec<GroupElement>,
    pub searched: usize,
}

impl QuotientDistance {
    pub fn interval(&self) -> Interval {
        Interval { lo: self.lo, hi: self.hi }
    }
}

/// `inf_g sup_{t ∈ [0,T]} D_f(Φ_t gγ, Φ_t γ')`. Since `D_f ≥ d(gγ(0), γ'(0))`, only deck
/// elements moving `γ(0)` near `γ'(0)` need to be examined.
pub fn quotient_d_f(
    patch: &CoverPatch,
    f: &WeightFunction,
    p: &GeodesicPath,
    q: &GeodesicPath,
    horizon: Length,
    window: Length,
) -> Result<QuotientDistance> {
    let mut metric = VertexMetric::new(patch);
    quotient_d_f_with(&mut metric, f, p, q, horizon, window)
}

pub(crate) fn quotient_d_f_with(
    metric: &mut VertexMetric,
    f: &WeightFunction,
    p: &GeodesicPath,
    q: &GeodesicPath,
    horizon: Length,
    window: Length,
) -> Result<QuotientDistance> {
    let cover = metric.cover();
    let pk = p.position.floor().to_integer();
    let qk = q.position.floor().to_integer();
    let pv = p.vertex_at(cover, pk)?;
    let qv = q.vertex_at(cover, qk)?;
    // d(gγ(0), γ'(0)) ≥ d(g pv, qv) − (offset of γ(0)) − (offset of γ'(0))
    let slack = (p.offset() + q.offset()).to_f64().unwrap();
    let mut radius = Length::from_integer(1);
    let mut done: HashMap<GroupElement, Interval> = HashMap::new();
    let mut best_hi = f64::INFINITY;
    loop {
        let ball = cover.ball(&qv, radius, crate::space::cover::DEFAULT_VERTEX_BUDGET)?;
        for (w, d) in &ball {
            if w.base != pv.base {
                continue;
            }
            if d.to_f64().unwrap() - slack > best_hi {
                break;
            }
            let g = cover.deck_between(&pv, w).expect("same base vertex");
            if done.contains_key(&g) {
                continue;
            }
            let iv = d_f_dyn_with(metric, f, &p.translate(cover, &g), q, horizon, window)?;
            best_hi = best_hi.min(iv.hi);
            done.insert(g, iv);
        }
        let need = best_hi + slack;
        if need <= radius.to_f64().unwrap() {
            break;
        }
        if !need.is_finite() && radius > Length::from_integer(SEARCH_LIMIT) {
            break;
        }
        radius = Length::from_integer(if need.is_finite() { need.ceil() as i64 } else { radius.to_integer() * 2 });
    }
    if done.is_empty() {
        return Err(Error::Uncertified { needed: f64::INFINITY, available: radius.to_f64().unwrap() });
    }
    let lo = done.values().map(|i| i.lo).fold(f64::INFINITY, f64::min);
    let mut minimizers: Vec<GroupElement> = done
        .iter()
        .filter(|(_, i)| i.lo <= best_hi)
        .map(|(g, _)| g.clone())
        .collect();
    minimizers.sort();
    Ok(QuotientDistance { lo: lo.min(best_hi), hi: best_hi, minimizers, searched: done.len() })
}

/// The dynamical distance `max_{i=0..n} inf_g D_f(Φ_i gγ, Φ_i γ')` between classes.
pub fn bowen_distance(
    patch: &CoverPatch,
    f: &WeightFunction,
    p: &GeodesicPath,
    q: &GeodesicPath,
    n: usize,
    window: Length,
) -> Result<Interval> {
    let mut metric = VertexMetric::new(patch);
    bowen_distance_with(&mut metric, f, p, q, n, window)
}

pub(crate) fn bowen_distance_with(
    metric: &mut VertexMetric,
    f: &WeightFunction,
    p: &GeodesicPath,
    q: &GeodesicPath,
    n: usize,
    window: Length,
) -> Result<Interval> {
    let mut out = Interval::ZERO;
    for i in 0..=n as i64 {
        let t = Length::from_integer(i);
        let d = quotient_d_f_with(metric, f, &p.flow_shift(t), &q.flow_shift(t), Length::zero(), window)?;
        out = out.max(d.interval());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::path::BiWord;
    use crate::lab::examples::{build_example, ExampleName};

    fn setup(name: ExampleName) -> CoverPatch {
        build_example(&name).unwrap().cover.expand(Length::from_integer(2)).unwrap()
    }

    fn line(patch: &CoverPatch, text: &str) -> GeodesicPath {
        let c = patch.cover();
        GeodesicPath::periodic(c, c.basepoint(), c.base().parse_sides(text).unwrap()).unwrap()
    }

    fn w(n: i64) -> Length {
        Length::from_integer(n)
    }

    #[test]
    fn identical_lines_are_at_zero() {
        let patch = setup(ExampleName::Tree(2));
        let f = WeightFunction::new(1.0).unwrap();
        let g = line(&patch, "a1a2");
        assert_eq!(d_f(&patch, &f, &g, &g, w(10)).unwrap(), Interval::ZERO);
        assert_eq!(d_f_dyn(&patch, &f, &g, &g, w(3), w(10)).unwrap(), Interval::ZERO);
    }

    #[test]
    fn diverging_rays_reach_two_over_e() {
        // lines sharing the negative half and splitting at the basepoint
        let patch = setup(ExampleName::Tree(2));
        let c = patch.cover();
        let s = |t: &str| c.base().parse_sides(t).unwrap();
        let a = GeodesicPath::new(c, c.basepoint(), BiWord::new(s("a1"), vec![], s("a1"), 0), w(0)).unwrap();
        let b = GeodesicPath::new(c, c.basepoint(), BiWord::new(s("a1"), vec![], s("a2"), 0), w(0)).unwrap();
        let f = WeightFunction::new(1.0).unwrap();
        let iv = d_f(&patch, &f, &a, &b, w(40)).unwrap();
        let expected = 2.0 / std::f64::consts::E;
        assert!((iv.lo - expected).abs() < 1e-15, "{iv:?}");
        assert!(iv.width() < 1e-12);
    }

    #[test]
    fn parallel_copies_in_doubled_space() {
        let patch = setup(ExampleName::Doubled(2));
        let c = patch.cover();
        let s = |t: &str| c.base().parse_sides(t).unwrap();
        // same line except one edge traversed through the parallel copy
        let a = GeodesicPath::new(c, c.basepoint(), BiWord::new(s("a1"), s("a1"), s("a1"), 0), w(0)).unwrap();
        let b = GeodesicPath::new(c, c.basepoint(), BiWord::new(s("a1"), s("b1"), s("a1"), 0), w(0)).unwrap();
        let f = WeightFunction::new(1.0).unwrap();
        let iv = d_f(&patch, &f, &a, &b, w(20)).unwrap();
        // m(u) = 2 min(u, 1 − u) on [0, 1]; the sup of that times e^{-u} is at u = 1/2
        let expected = (-0.5f64).exp();
        assert!((iv.lo - expected).abs() < 1e-15, "{iv:?}");
    }

    #[test]
    fn parallel_tree_lines_stay_at_constant_distance() {
        let patch = setup(ExampleName::Tree(2));
        let c = patch.cover();
        let a = line(&patch, "a1");
        let b = a.translate(c, &c.spec().parse("a2").unwrap());
        let f = WeightFunction::new(1.0).unwrap();
        let shifted = a.flow_shift(Length::new(1, 2));
        let iv = d_f_dyn(&patch, &f, &a, &shifted, w(5), w(30)).unwrap();
        assert!((iv.lo - 0.5).abs() < 1e-15 && (iv.hi - 0.5).abs() < 1e-12, "{iv:?}");
        // m(u) = 1 + 2|u|, and (1 + 2u) e^{-u} peaks at u = 1/2
        let d = d_f(&patch, &f, &a, &b, w(30)).unwrap();
        assert!((d.lo - 2.0 * (-0.5f64).exp()).abs() < 1e-15, "{d:?}");
    }

    #[test]
    fn quotient_identifies_translates() {
        let patch = setup(ExampleName::Tree(2));
        let c = patch.cover();
        let a = line(&patch, "a1a2");
        let b = a.translate(c, &c.spec().parse("a2A1").unwrap());
        let f = WeightFunction::new(1.0).unwrap();
        let q = quotient_d_f(&patch, &f, &a, &b, w(0), w(12)).unwrap();
        assert_eq!(q.lo, 0.0);
        assert!(q.hi <= f.tail_bound(12.0) + 1e-15);
        assert_eq!(q.minimizers.len(), 1);
    }

    #[test]
    fn quarter_time_separation() {
        let patch = setup(ExampleName::Tree(2));
        let f = WeightFunction::new(1.0).unwrap();
        let a = line(&patch, "a1").flow_shift(Length::new(1, 4));
        let b = line(&patch, "a2").flow_shift(Length::new(1, 4));
        let q = quotient_d_f(&patch, &f, &a, &b, w(0), w(20)).unwrap();
        assert!(q.lo >= 0.5 * (-0.25f64).exp(), "{q:?}");
    }
}
