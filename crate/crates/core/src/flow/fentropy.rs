//! Growth of `Cov_{D_f^T}(Geod(B̄(x,R); C), r)` for boundary sets of tree covers.
//!
//! A line through a vertex `v` is a pair of rays from `v` leaving along different symbols. The
//! upper count is the bucket family restricted to windows whose rays extend into `C`; the lower
//! count is the family of lines with `γ(0) = v ∈ B(x,R)` told apart by their word on `0..n−1`.

use num_traits::ToPrimitive;

use super::report::{EntropyReport, FitModel, ReportConfig, ReportRow};
use super::weight::WeightFunction;
use crate::error::{Error, Result};
use crate::hyperbolic::boundary::BoundaryPoint;
use crate::hyperbolic::hull::BoundarySet;
use crate::space::group::reduce_into;
use crate::space::{Cover, Length, Symbol, Word};

/// Reduced words of length exactly `len` not starting with `avoid`.
fn reduced_words(alphabet: &[Symbol], len: usize, avoid: Option<Symbol>, out: &mut Vec<Word>) {
    fn go(alphabet: &[Symbol], len: usize, avoid: Option<Symbol>, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for &s in alphabet {
            let bad = match cur.last() {
                Some(&l) => s == l.inverse(),
                None => Some(s) == avoid,
            };
            if !bad {
                cur.push(s);
                go(alphabet, len, avoid, cur, out);
                cur.pop();
            }
        }
    }
    go(alphabet, len, avoid, &mut Word::new(), out);
}

fn product(g: &[Symbol], w: &[Symbol]) -> Word {
    let mut acc: Word = g.iter().copied().collect();
    reduce_into(&mut acc, w.iter().copied());
    acc
}

/// Whether some geodesic ray from the vertex `g` whose first symbol is not `forbidden` ends in `set`.
fn ray_meets(set: &BoundarySet, g: &[Symbol], forbidden: Symbol) -> bool {
    let prefixes = match set {
        BoundarySet::Full => return true,
        BoundarySet::Cylinders(c) => c.prefixes(),
        BoundarySet::Points(_) => unreachable!("finite sets are counted line by line"),
    };
    let l = g.len();
    for c in 0..=l {
        // the ray first retraces c symbols of g, then leaves along a symbol outside `excluded`
        if c >= 1 && g[l - 1].inverse() == forbidden {
            break;
        }
        let kept = &g[..l - c];
        let mut excluded: Vec<Symbol> = Vec::with_capacity(2);
        if c == 0 {
            excluded.push(forbidden);
        } else {
            excluded.push(g[l - c]);
        }
        if let Some(&last) = kept.last() {
            excluded.push(last.inverse());
        }
        let hit = prefixes.iter().any(|p| {
            if p.len() <= kept.len() {
                kept.starts_with(p)
            } else {
                p.starts_with(kept) && !excluded.contains(&p[kept.len()])
            }
        });
        if hit {
            return true;
        }
    }
    false
}

struct Counter<'a> {
    set: &'a BoundarySet,
    alphabet: Vec<Symbol>,
}

impl Counter<'_> {
    fn anchors(&self, radius: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 0..=radius {
            reduced_words(&self.alphabet, len, None, &mut out);
        }
        out
    }

    /// Compatible rays of `len` symbols from `v`, grouped by first symbol.
    fn rays_by_first(&self, v: &[Symbol], len: usize) -> Vec<u64> {
        let mut counts = vec![0u64; self.alphabet.len()];
        let mut words = Vec::new();
        for (i, &s) in self.alphabet.iter().enumerate() {
            words.clear();
            reduced_words(&self.alphabet, len - 1, Some(s.inverse()), &mut words);
            for w in &words {
                let mut full = Word::new();
                full.push(s);
                full.extend(w.iter().copied());
                let end = product(v, &full);
                if ray_meets(self.set, &end, full[len - 1].inverse()) {
                    counts[i] += 1;
                }
            }
        }
        counts
    }

    /// Windows of `back` symbols behind and `ahead` symbols from an anchor within `radius`.
    fn windows(&self, radius: usize, back: usize, ahead: usize) -> u64 {
        let k = self.alphabet.len();
        let mut total = 0u64;
        for v in self.anchors(radius) {
            let fwd = self.rays_by_first(&v, ahead);
            if back == 0 {
                // the backward ray leaves v along anything but the forward first symbol
                for (i, &s) in self.alphabet.iter().enumerate() {
                    if fwd[i] > 0 && ray_meets(self.set, &v, s) {
                        total += fwd[i];
                    }
                }
                continue;
            }
            let bwd = self.rays_by_first(&v, back);
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        total += fwd[i] * bwd[j];
                    }
                }
            }
        }
        total
    }
}

/// Lines between distinct points of `points` meeting the vertex ball of radius `radius`, counted
/// with multiplicity of the vertices they meet there.
fn point_lines(cover: &Cover, points: &[BoundaryPoint], radius: usize) -> Result<(u64, u64)> {
    let depth = radius + 2;
    let mut lines = 0u64;
    let mut vertices = 0u64;
    for (i, z) in points.iter().enumerate() {
        for (j, w) in points.iter().enumerate() {
            if i == j || z.same_point(cover, w) {
                continue;
            }
            let a = z.symbols(cover, depth).ok_or(Error::HorizonTooShort(depth as f64))?;
            let b = w.symbols(cover, depth).ok_or(Error::HorizonTooShort(depth as f64))?;
            let p = a.iter().zip(&b).take_while(|(s, t)| s == t).count();
            if p <= radius {
                lines += 1;
                vertices += 1 + 2 * (radius - p) as u64;
            }
        }
    }
    Ok((lines, vertices))
}

/// Slopes of `log Cov_{D_f^T}(Geod(B̄(x,R); C), r)` over integer horizons `T`.
pub fn f_entropy_estimate(
    cover: &Cover,
    set: &BoundarySet,
    anchor_radius: usize,
    r: Length,
    weight: &WeightFunction,
    horizons: &[usize],
) -> Result<EntropyReport> {
    if !cover.has_word_metric() || cover.spec().finite_order() != 1 {
        return Err(Error::NotTree);
    }
    if r <= Length::from_integer(0) {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    if horizons.contains(&0) {
        return Err(Error::InvalidParameter("horizons start at 1".into()));
    }
    let rank = cover.spec().rank();
    let alphabet: Vec<Symbol> = (0..rank).flat_map(|i| [Symbol::generator(i), Symbol::generator(i).inverse()]).collect();
    let rf = r.to_f64().unwrap_or(f64::NAN);
    let k = weight.window_for(rf);
    let offsets = (Length::from_integer(2) / r).ceil().to_integer() as u64;
    let mut rows = Vec::new();
    match set {
        BoundarySet::Points(points) => {
            if points.len() < 2 {
                return Err(Error::TooFewBoundaryPoints);
            }
            let (lines, _) = point_lines(cover, points, anchor_radius)?;
            let (_, vertices) = point_lines(cover, points, anchor_radius + 1)?;
            for &n in horizons {
                rows.push(ReportRow {
                    horizon: n as f64,
                    count_lo: lines.max(1) as f64,
                    count_hi: (offsets * vertices).max(1) as f64,
                    exact: false,
                });
            }
        }
        _ => {
            let counter = Counter { set, alphabet };
            for &n in horizons {
                let lo = counter.windows(anchor_radius, 0, n);
                let hi = offsets * counter.windows(anchor_radius + 1, k - 1, n + k + 1);
                if lo == 0 {
                    return Err(Error::EmptyBoundarySet);
                }
                rows.push(ReportRow {
                    horizon: n as f64,
                    count_lo: lo as f64,
                    count_hi: hi as f64,
                    exact: false,
                });
            }
        }
    }
    let config = ReportConfig {
        r: Some(rf),
        a: Some(weight.decay),
        anchor_radius: Some(anchor_radius as f64),
        seed: None,
    };
    Ok(EntropyReport::from_rows("hf", rows, FitModel::Linear, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::boundary::CylinderSet;
    use crate::lab::examples::{build_example, ExampleName};
    use crate::space::group::parse_word;

    fn tree() -> Cover {
        build_example(&ExampleName::Tree(2)).unwrap().cover
    }

    fn f2() -> WeightFunction {
        WeightFunction::new(2.0).unwrap()
    }

    #[test]
    fn full_boundary_counts() {
        let c = tree();
        let rep = f_entropy_estimate(&c, &BoundarySet::Full, 0, Length::new(1, 2), &f2(), &[1, 2, 3, 4, 5]).unwrap();
        // lines through x by their first n symbols: 4·3^{n−1}
        let lo: Vec<f64> = rep.rows.iter().map(|r| r.count_lo).collect();
        assert_eq!(lo, [4.0, 12.0, 36.0, 108.0, 324.0]);
        // windows of n + 2k symbols around the 5 anchors within distance 1, four offsets
        let k = f2().window_for(0.5) as i32;
        assert_eq!(rep.rows[0].count_hi, 4.0 * 5.0 * 4.0 * 3f64.powi(2 * k));
        assert!((rep.slope - 3f64.ln()).abs() < 1e-9);
        assert!(rep.rows.iter().all(|r| r.count_lo <= r.count_hi));
    }

    #[test]
    fn single_cylinder_has_full_rate() {
        let c = tree();
        let set = BoundarySet::Cylinders(CylinderSet::new(vec![parse_word("a1").unwrap()]).unwrap());
        // no line through x has both ends in one cylinder
        assert!(matches!(
            f_entropy_estimate(&c, &set, 0, Length::new(1, 2), &f2(), &[1]),
            Err(Error::EmptyBoundarySet)
        ));
        let rep = f_entropy_estimate(&c, &set, 1, Length::new(1, 2), &f2(), &[2, 3, 4, 5, 6]).unwrap();
        assert!((rep.slope - 3f64.ln()).abs() < 0.02, "{}", rep.slope);
        assert!((rep.slope_of_lower - 3f64.ln()).abs() < 0.02);
        // only v = a1 contributes at n = 2: three first symbols away from x, then three more
        assert_eq!(rep.rows[0].count_lo, 9.0);
    }

    #[test]
    fn ray_compatibility() {
        let set = BoundarySet::Cylinders(CylinderSet::new(vec![parse_word("a1a2").unwrap()]).unwrap());
        let w = |s: &str| parse_word(s).unwrap();
        let a = |s: &str| w(s)[0];
        // from x: the ray may start with a1 then a2
        assert!(ray_meets(&set, &w(""), a("a2")));
        assert!(!ray_meets(&set, &w(""), a("a1")));
        // from a1: continue with a2, unless that is forbidden and retracing is forbidden too
        assert!(ray_meets(&set, &w("a1"), a("a1")));
        assert!(!ray_meets(&set, &w("a1"), a("a2")));
        // from a2: must retrace to x first
        assert!(ray_meets(&set, &w("a2"), a("a1")));
        assert!(!ray_meets(&set, &w("a2"), a("A2")));
        // deep inside the cylinder anything goes
        assert!(ray_meets(&set, &w("a1a2a2A1"), a("a1")));
    }

    #[test]
    fn two_points_have_zero_rate() {
        let c = tree();
        let pts = vec![BoundaryPoint::parse(&c, "", "a1").unwrap(), BoundaryPoint::parse(&c, "", "A1").unwrap()];
        let rep = f_entropy_estimate(&c, &BoundarySet::Points(pts.clone()), 1, Length::new(1, 2), &f2(), &[1, 2, 3, 4]).unwrap();
        assert_eq!(rep.slope, 0.0);
        // both orientations of the a1-axis
        assert_eq!(rep.rows[0].count_lo, 2.0);
        assert!(matches!(
            f_entropy_estimate(&c, &BoundarySet::Points(pts[..1].to_vec()), 1, Length::new(1, 2), &f2(), &[1]),
            Err(Error::TooFewBoundaryPoints)
        ));
    }
}
