//! Midpoint convexity of `t ↦ d(γ(t), γ'(t))` for pairs of geodesic lines.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::dfmetric::VertexMetric;
use crate::flow::GeodesicPath;
use crate::space::graph::{length_to_f64, Length};
use crate::space::CoverPatch;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    /// `max m((t₁+t₂)/2) − (m(t₁)+m(t₂))/2` over grid pairs; positive means not convex.
    pub max_defect: f64,
    pub max_defect_exact: String,
    /// `(t₁, t₂)` attaining the maximum.
    pub witness: Option<(f64, f64)>,
    /// `(t, m(t))` on the grid.
    pub samples: Vec<(f64, f64)>,
    pub convex_on_grid: bool,
}

/// Evaluates `m(t) = d(γ(t), γ'(t))` on `grid` and at all pairwise midpoints.
pub fn check_line_convexity(
    patch: &CoverPatch,
    gamma: &GeodesicPath,
    other: &GeodesicPath,
    grid: &[Length],
) -> Result<ConvexityReport> {
    let cover = patch.cover();
    if let (Some(lo), Some(hi)) = (grid.iter().min(), grid.iter().max()) {
        for path in [gamma, other] {
            let a = (path.offset() + *lo).floor().to_integer();
            let b = (path.offset() + *hi).ceil().to_integer();
            if !path.is_geodesic_on(patch, a, b)? {
                return Err(Error::NotGeodesic(format!("path is not geodesic on positions {a}..{b}")));
            }
        }
    }
    let mut metric = VertexMetric::new(patch);
    let mut m = |t: Length| -> Result<Length> {
        let p = gamma.eval(cover, t)?;
        let q = other.eval(cover, t)?;
        metric.point_dist(&p, &q)
    };
    let values: Vec<Length> = grid.iter().map(|&t| m(t)).collect::<Result<_>>()?;
    let mut best: Option<(Length, usize, usize)> = None;
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let mid = m((grid[i] + grid[j]) / 2)?;
            let defect = mid - (values[i] + values[j]) / 2;
            if best.as_ref().is_none_or(|(b, _, _)| defect > *b) {
                best = Some((defect, i, j));
            }
        }
    }
    let max = best.as_ref().map_or(Length::zero(), |b| b.0);
    Ok(ConvexityReport {
        max_defect: length_to_f64(&max),
        max_defect_exact: max.to_string(),
        witness: best.map(|(_, i, j)| (length_to_f64(&grid[i]), length_to_f64(&grid[j]))),
        samples: grid
            .iter()
            .zip(&values)
            .map(|(t, v)| (length_to_f64(t), length_to_f64(v)))
            .collect(),
        convex_on_grid: max <= Length::zero(),
    })
}

/// `lo, lo + step, …, hi`.
pub fn uniform_grid(lo: Length, hi: Length, step: Length) -> Result<Vec<Length>> {
    if step <= Length::zero() || hi < lo {
        return Err(Error::InvalidParameter("grid needs lo ≤ hi and a positive step".into()));
    }
    let mut out = Vec::new();
    let mut t = lo;
    while t <= hi {
        out.push(t);
        t += step;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::BiWord;
    use crate::lab::examples::{build_example, ExampleName};

    fn grid() -> Vec<Length> {
        uniform_grid(Length::from_integer(-3), Length::from_integer(3), Length::new(1, 2)).unwrap()
    }

    #[test]
    fn parallel_tree_lines_are_convex() {
        let ex = build_example(&ExampleName::Tree(2)).unwrap();
        let patch = ex.cover.expand(Length::from_integer(2)).unwrap();
        let cover = &ex.cover;
        let a1 = cover.base().parse_sides("a1").unwrap();
        let g = cover.spec().parse("a2").unwrap();
        let line = GeodesicPath::periodic(cover, cover.basepoint(), a1.clone()).unwrap();
        let shifted = line.translate(cover, &g);
        let rep = check_line_convexity(&patch, &line, &shifted, &grid()).unwrap();
        assert!(rep.max_defect <= 0.0);
        assert!(rep.convex_on_grid);
        let same = check_line_convexity(&patch, &line, &line, &grid()).unwrap();
        assert_eq!(same.max_defect, 0.0);
        // a line and one crossing it: m is |t| + |t|, still convex
        let a2 = cover.base().parse_sides("a2").unwrap();
        let cross = GeodesicPath::periodic(cover, cover.basepoint(), a2).unwrap();
        assert!(check_line_convexity(&patch, &line, &cross, &grid()).unwrap().convex_on_grid);
    }

    #[test]
    fn doubled_bigon_breaks_convexity() {
        let ex = build_example(&ExampleName::Doubled(2)).unwrap();
        let patch = ex.cover.expand(Length::from_integer(2)).unwrap();
        let cover = &ex.cover;
        let a1 = cover.base().parse_sides("a1").unwrap()[0];
        let b1 = cover.base().parse_sides("b1").unwrap()[0];
        let line = GeodesicPath::periodic(cover, cover.basepoint(), vec![a1]).unwrap();
        let word = BiWord::new(vec![a1], vec![b1], vec![a1], 0);
        let detour = GeodesicPath::new(cover, cover.basepoint(), word, Length::zero()).unwrap();
        let rep = check_line_convexity(&patch, &line, &detour, &grid()).unwrap();
        assert!(!rep.convex_on_grid);
        assert_eq!(rep.max_defect_exact, "1");
        let (t1, t2) = rep.witness.unwrap();
        assert_eq!((t1 + t2) / 2.0, 0.5);
    }

    #[test]
    fn rejects_non_geodesic_paths() {
        let ex = build_example(&ExampleName::CircleRose(2)).unwrap();
        let patch = ex.cover.expand(Length::from_integer(2)).unwrap();
        let cover = &ex.cover;
        let c1 = cover.base().parse_sides("c1").unwrap();
        let circle = GeodesicPath::periodic(cover, cover.basepoint(), c1).unwrap();
        assert!(matches!(
            check_line_convexity(&patch, &circle, &circle, &grid()),
            Err(Error::NotGeodesic(_))
        ));
    }
}
