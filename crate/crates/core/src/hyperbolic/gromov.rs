//! Gromov products and the four-point defect of a finite region.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::graph::{length_to_f64, Length};
use crate::space::{CoverPatch, GraphPoint};

/// `(y, z)_x = ½(d(x,y) + d(x,z) − d(y,z))`.
pub fn gromov_product(patch: &CoverPatch, x: &GraphPoint, y: &GraphPoint, z: &GraphPoint) -> Result<Length> {
    let xy = patch.distance(x, y)?;
    let xz = patch.distance(x, z)?;
    let yz = patch.distance(y, z)?;
    Ok((xy + xz - yz) / 2)
}

/// Which points of the ball enter the four-point scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaNet {
    Vertices,
    /// Vertices and edge midpoints. Needed to see bigons formed by parallel edges.
    VerticesAndMidpoints,
}

#[derive(Clone, Debug)]
pub struct DeltaConfig {
    pub net: DeltaNet,
    /// Above this many quadruples the scan switches to sampling.
    pub budget: u64,
    pub seed: u64,
    /// Also scan radius `R − 2` and flag the estimate as stable when both agree.
    pub stability: bool,
}

impl Default for DeltaConfig {
    fn default() -> Self {
        DeltaConfig {
            net: DeltaNet::VerticesAndMidpoints,
            budget: 2_000_000_000,
            seed: 0,
            stability: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperbolicityReport {
    pub delta: f64,
    /// Exact value as a rational string.
    pub delta_exact: String,
    pub region_radius: f64,
    pub net: DeltaNet,
    pub points: usize,
    pub quadruples: u64,
    /// False when the quadruples were sampled rather than exhausted.
    pub exact: bool,
    pub witness: Option<[String; 4]>,
    pub delta_at_smaller_radius: Option<f64>,
    pub stable: Option<bool>,
}

/// Largest four-point defect `max (S₁ − S₂)/2` over quadruples of net points in `B(x, R)`.
///
/// `S₁ ≥ S₂ ≥ S₃` are the three pair sums `d(a,b)+d(c,d)`. This is the least `δ` for which
/// the four-point condition holds on the net, so it bounds the space's `δ` from below.
pub fn estimate_delta(patch: &CoverPatch, radius: Length) -> Result<HyperbolicityReport> {
    estimate_delta_with(patch, radius, &DeltaConfig::default())
}

pub fn estimate_delta_with(patch: &CoverPatch, radius: Length, config: &DeltaConfig) -> Result<HyperbolicityReport> {
    if radius < Length::zero() {
        return Err(Error::InvalidParameter("negative region radius".into()));
    }
    if radius + radius > patch.radius() {
        return Err(Error::Uncertified {
            needed: length_to_f64(&(radius + radius)),
            available: length_to_f64(&patch.radius()),
        });
    }
    let (points, depths) = region_net(patch, radius, config.net);
    let exact = patch.distance_matrix(&points)?;
    let scale = exact
        .iter()
        .flatten()
        .fold(1i64, |acc, d| acc.lcm(d.denom()));
    let n = points.len();
    let mut dist = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = exact[i][j] * scale;
            dist[i * n + j] = v.to_integer().to_u32().ok_or(Error::BudgetExceeded(u32::MAX as usize))?;
        }
    }
    let total = quadruple_count(n);
    let sampled = total > config.budget;
    let scan = if sampled {
        sample_defect(&dist, n, config.budget, config.seed)
    } else {
        full_defect(&dist, n, &(0..n).collect::<Vec<_>>())
    };
    let delta_exact = Length::new(scan.defect as i64, 2 * scale);
    let delta = length_to_f64(&delta_exact);

    let mut smaller = None;
    let two = Length::from_integer(2);
    if config.stability && !sampled && radius >= two {
        let inner: Vec<usize> = (0..n).filter(|&i| depths[i] <= radius - two).collect();
        let s = full_defect(&dist, n, &inner);
        smaller = Some(length_to_f64(&Length::new(s.defect as i64, 2 * scale)));
    }
    Ok(HyperbolicityReport {
        delta,
        delta_exact: delta_exact.to_string(),
        region_radius: length_to_f64(&radius),
        net: config.net,
        points: n,
        quadruples: if sampled { config.budget } else { total },
        exact: !sampled,
        witness: scan.witness.map(|w| w.map(|i| points[i].to_string())),
        delta_at_smaller_radius: smaller,
        stable: smaller.map(|s| s == delta),
    })
}

fn region_net(patch: &CoverPatch, radius: Length, net: DeltaNet) -> (Vec<GraphPoint>, Vec<Length>) {
    let cover = patch.cover();
    let mut points = Vec::new();
    let mut depths = Vec::new();
    for i in 0..patch.len() {
        if patch.depth(i) <= radius {
            points.push(GraphPoint::Vertex(patch.vertex(i).clone()));
            depths.push(patch.depth(i));
        }
    }
    if net == DeltaNet::VerticesAndMidpoints {
        for i in 0..patch.len() {
            for (s, j) in patch.neighbors(i) {
                let Some(j) = j else { continue };
                if !s.is_forward() {
                    continue;
                }
                let len = cover.base().length(s);
                let depth = patch.depth(i).min(patch.depth(j)) + len / 2;
                if depth <= radius {
                    points.push(GraphPoint::midpoint(cover, patch.vertex(i).clone(), s));
                    depths.push(depth);
                }
            }
        }
    }
    (points, depths)
}

fn quadruple_count(n: usize) -> u64 {
    if n < 4 {
        return 0;
    }
    let n = n as u64;
    n * (n - 1) / 2 * (n - 2) / 3 * (n - 3) / 4
}

struct Scan {
    /// Twice the defect, in units of `1/scale`.
    defect: u32,
    witness: Option<[usize; 4]>,
}

#[inline]
fn defect(d: &[u32], n: usize, i: usize, j: usize, k: usize, l: usize) -> u32 {
    let a = d[i * n + j] + d[k * n + l];
    let b = d[i * n + k] + d[j * n + l];
    let c = d[i * n + l] + d[j * n + k];
    let hi = a.max(b).max(c);
    let lo = a.min(b).min(c);
    let mid = a + b + c - hi - lo;
    hi - mid
}

/// Exhaustive scan over quadruples from `idx`. A quadruple's defect never exceeds twice
/// any of its six distances, so pairs closer than half the running maximum are skipped.
fn full_defect(d: &[u32], n: usize, idx: &[usize]) -> Scan {
    let mut best = Scan {
        defect: 0,
        witness: None,
    };
    let m = idx.len();
    if m >= 4 {
        best.witness = Some([idx[0], idx[1], idx[2], idx[3]]);
    }
    for a in 0..m {
        let i = idx[a];
        for b in a + 1..m {
            let j = idx[b];
            if 2 * d[i * n + j] <= best.defect {
                continue;
            }
            for c in b + 1..m {
                let k = idx[c];
                if 2 * d[i * n + k] <= best.defect || 2 * d[j * n + k] <= best.defect {
                    continue;
                }
                for &l in &idx[c + 1..] {
                    let v = defect(d, n, i, j, k, l);
                    if v > best.defect {
                        best.defect = v;
                        best.witness = Some([i, j, k, l]);
                    }
                }
            }
        }
    }
    best
}

fn sample_defect(d: &[u32], n: usize, samples: u64, seed: u64) -> Scan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = Scan {
        defect: 0,
        witness: None,
    };
    for _ in 0..samples {
        let q: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
        let v = defect(d, n, q[0], q[1], q[2], q[3]);
        if best.witness.is_none() || v > best.defect {
            best.defect = v;
            best.witness = Some(q);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::examples::{build_example, ExampleName};

    fn patch(name: ExampleName, r: i64) -> CoverPatch {
        build_example(&name).unwrap().cover.expand(Length::from_integer(r)).unwrap()
    }

    fn vertex(p: &CoverPatch, word: &str) -> GraphPoint {
        let cover = p.cover();
        let g = cover.spec().parse(word).unwrap();
        GraphPoint::Vertex(cover.translate(&g, &cover.basepoint()))
    }

    #[test]
    fn products_on_the_tree() {
        let p = patch(ExampleName::Tree(2), 6);
        let x = vertex(&p, "");
        let y = vertex(&p, "a1a1");
        let z = vertex(&p, "a1a2");
        assert_eq!(gromov_product(&p, &x, &y, &z).unwrap(), Length::from_integer(1));
        assert_eq!(gromov_product(&p, &x, &y, &y).unwrap(), Length::from_integer(2));
        assert_eq!(gromov_product(&p, &y, &y, &z).unwrap(), Length::zero());
    }

    #[test]
    fn uncertified_product() {
        let p = patch(ExampleName::Tree(2), 2);
        let far = vertex(&p, "a1a1");
        assert!(matches!(
            gromov_product(&p, &far, &far, &vertex(&p, "a2a2")),
            Err(Error::Uncertified { .. })
        ));
    }

    #[test]
    fn tree_is_zero_hyperbolic() {
        let p = patch(ExampleName::Tree(2), 4);
        let rep = estimate_delta(&p, Length::from_integer(2)).unwrap();
        assert_eq!(rep.delta, 0.0);
        assert!(rep.exact);
        assert_eq!(rep.points, 17 + 16);
        assert_eq!(rep.stable, Some(true));
    }

    #[test]
    fn single_vertex_region() {
        let p = patch(ExampleName::Tree(2), 1);
        let rep = estimate_delta(&p, Length::zero()).unwrap();
        assert_eq!(rep.delta, 0.0);
        assert_eq!(rep.points, 1);
        assert_eq!(rep.quadruples, 0);
    }

    #[test]
    fn parallel_edges_give_a_half() {
        // two midpoints of a bigon and its two ends: sums 2, 1, 1
        let p = patch(ExampleName::Doubled(2), 2);
        let rep = estimate_delta(&p, Length::from_integer(1)).unwrap();
        assert_eq!(rep.delta_exact, "1/2");
        let vertices_only = DeltaConfig {
            net: DeltaNet::Vertices,
            ..DeltaConfig::default()
        };
        let rep = estimate_delta_with(&p, Length::from_integer(1), &vertices_only).unwrap();
        assert_eq!(rep.delta, 0.0);
    }

    #[test]
    fn region_must_be_certified() {
        let p = patch(ExampleName::Tree(2), 3);
        assert!(matches!(
            estimate_delta(&p, Length::from_integer(2)),
            Err(Error::Uncertified { .. })
        ));
    }

    #[test]
    fn sampling_never_exceeds_the_exhaustive_value() {
        let p = patch(ExampleName::CircleRose(2), 4);
        let full = estimate_delta(&p, Length::from_integer(2)).unwrap();
        let sampled = estimate_delta_with(
            &p,
            Length::from_integer(2),
            &DeltaConfig {
                budget: 1000,
                seed: 7,
                ..DeltaConfig::default()
            },
        )
        .unwrap();
        assert!(!sampled.exact);
        assert!(sampled.delta <= full.delta);
        assert_eq!(sampled.stable, None);
    }

    #[test]
    fn midpoint_depths() {
        let p = patch(ExampleName::Tree(2), 2);
        let (pts, depths) = region_net(&p, Length::new(1, 2), DeltaNet::VerticesAndMidpoints);
        assert_eq!(pts.len(), 5);
        for (pt, d) in pts.iter().zip(&depths) {
            assert_eq!(p.point_depth(pt).unwrap(), *d);
        }
    }
}
