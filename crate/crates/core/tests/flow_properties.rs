mod common;

use common::{element, line, line_seed, tree};
use geolab::flow::{bowen_distance, d_f, d_f_dyn, BowenConfig, WeightFunction};
use geolab::flow::bowen::bucket_representative;
use geolab::hyperbolic::{ray_point, shadow_contains, visual_ball_contains, BoundaryPoint};
use geolab::space::{Cover, Length, SideId};
use proptest::prelude::*;

fn window() -> Length {
    Length::from_integer(8)
}

/// `head · period^∞` from random choices; the period falls back to one symbol when it would backtrack.
fn boundary_point(cover: &Cover, head: &[u8], period: &[u8]) -> BoundaryPoint {
    let all: Vec<SideId> = common::side_word(cover, &[head, period].concat()).into_iter().map(SideId).collect();
    let (h, p) = all.split_at(head.len());
    let p = if p.len() > 1 && p[p.len() - 1].reverse() != p[0] { p } else { &p[..1] };
    BoundaryPoint::periodic(cover, h.to_vec(), p.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn sandwich_bounds(a in line_seed(2), b in line_seed(2), decay in 1u8..=2) {
        let (cover, shift) = tree(2);
        let patch = cover.expand(Length::from_integer(8)).unwrap();
        let f = WeightFunction::new(decay as f64).unwrap();
        let p = line(&cover, &shift, &a);
        let q = line(&cover, &shift, &b);
        let d0 = patch.distance(&p.eval(&cover, Length::from_integer(0)).unwrap(), &q.eval(&cover, Length::from_integer(0)).unwrap()).unwrap();
        let d0 = geolab::space::length_to_f64(&d0);
        let iv = d_f(&patch, &f, &p, &q, window()).unwrap();
        prop_assert!(iv.lo <= iv.hi);
        prop_assert!(d0 <= iv.lo + 1e-12, "{d0} > {iv:?}");
        prop_assert!(iv.hi <= d0 + f.tail_bound(0.0) + 1e-12, "{iv:?} above {d0} + tail");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn deck_isometry(a in line_seed(2), b in line_seed(2), g in prop::collection::vec(any::<u8>(), 1..4)) {
        let (cover, shift) = tree(2);
        let patch = cover.expand(Length::from_integer(4)).unwrap();
        let f = WeightFunction::new(2.0).unwrap();
        let p = line(&cover, &shift, &a);
        let q = line(&cover, &shift, &b);
        let g = element(2, &g);
        let before = d_f(&patch, &f, &p, &q, window()).unwrap();
        let after = d_f(&patch, &f, &p.translate(&cover, &g), &q.translate(&cover, &g), window()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn flow_is_lipschitz(a in line_seed(2), b in line_seed(2), t in 0i64..=4, decay in 1u8..=2) {
        let (cover, shift) = tree(2);
        let patch = cover.expand(Length::from_integer(4)).unwrap();
        let f = WeightFunction::new(decay as f64).unwrap();
        let p = line(&cover, &shift, &a);
        let q = line(&cover, &shift, &b);
        let t = Length::new(t, 4);
        let before = d_f(&patch, &f, &p, &q, window()).unwrap();
        let after = d_f(&patch, &f, &p.flow_shift(t), &q.flow_shift(t), window()).unwrap();
        let factor = (decay as f64 * geolab::space::length_to_f64(&t)).exp();
        prop_assert!(after.lo <= factor * before.hi + 1e-12, "{after:?} vs {factor} × {before:?}");
        // the dynamical distance over [0, t] dominates both ends
        let dynamic = d_f_dyn(&patch, &f, &p, &q, t, window()).unwrap();
        prop_assert!(dynamic.hi + 1e-12 >= before.lo.max(after.lo));
    }

    #[test]
    fn bucket_family_is_dense(a in line_seed(0), n in 1usize..=3) {
        let (cover, shift) = tree(2);
        let patch = cover.expand(Length::from_integer(4)).unwrap();
        let r = Length::new(1, 2);
        let config = BowenConfig::new(r, WeightFunction::new(2.0).unwrap(), vec![n]);
        let p = line(&cover, &shift, &a);
        let rep = bucket_representative(&patch, &shift, &config, n, &p).unwrap();
        let d = bowen_distance(&patch, &config.weight, &p, &rep, n, window()).unwrap();
        prop_assert!(d.hi <= 0.5, "{d:?}");
    }

    #[test]
    fn shadows_are_visual_balls(
        zh in prop::collection::vec(any::<u8>(), 0..4),
        zp in prop::collection::vec(any::<u8>(), 1..3),
        wh in prop::collection::vec(any::<u8>(), 0..4),
        wp in prop::collection::vec(any::<u8>(), 1..3),
        n in 1i64..=5,
    ) {
        let (cover, _) = tree(2);
        let patch = cover.expand(Length::from_integer(6)).unwrap();
        let z = boundary_point(&cover, &zh, &zp);
        let w = boundary_point(&cover, &wh, &wp);
        let y = ray_point(&patch, &z, Length::from_integer(n)).unwrap();
        // on a tree, Shad(ξ_z(n), r) for r < 1 is the set sharing n symbols with z
        let shadow = shadow_contains(&patch, &y, Length::new(1, 2), &w).unwrap();
        let ball = visual_ball_contains(&patch, &z, (-(n as f64) + 0.5).exp(), &w).unwrap();
        prop_assert_eq!(shadow, ball);
    }

    #[test]
    fn tree_rays_fellow_travel(
        zh in prop::collection::vec(any::<u8>(), 0..4),
        zp in prop::collection::vec(any::<u8>(), 1..3),
        wh in prop::collection::vec(any::<u8>(), 0..4),
        wp in prop::collection::vec(any::<u8>(), 1..3),
    ) {
        let (cover, _) = tree(2);
        let patch = cover.expand(Length::from_integer(8)).unwrap();
        let z = boundary_point(&cover, &zh, &zp);
        let w = boundary_point(&cover, &wh, &wp);
        let prod = geolab::hyperbolic::boundary_gromov_product(&patch, &z, &w, 6).unwrap();
        for t in 0..=4 {
            let t = Length::from_integer(t);
            let d = patch.distance(&ray_point(&patch, &z, t).unwrap(), &ray_point(&patch, &w, t).unwrap()).unwrap();
            let d = geolab::space::length_to_f64(&d);
            let t = geolab::space::length_to_f64(&t);
            match prod {
                geolab::hyperbolic::BoundaryProduct::Infinite => prop_assert_eq!(d, 0.0),
                geolab::hyperbolic::BoundaryProduct::Finite { value, .. } => {
                    prop_assert_eq!(d, 2.0 * (t - value).max(0.0));
                }
            }
        }
    }
}
