use geolab::lab::examples::{build_example, ExampleName};
use std::sync::OnceLock;

use geolab::space::{Cover, CoverPatch, GraphPoint, GroupElement, Length, SideId};
use proptest::prelude::*;

/// Product of voltages along random sides, so extension elements carry permutations too.
fn element(cover: &Cover, choices: &[u8]) -> GroupElement {
    let sides: Vec<SideId> = cover.base().sides().collect();
    choices.iter().fold(GroupElement::identity(), |g, &c| {
        let v = cover.voltages().get(sides[c as usize % sides.len()]);
        cover.spec().multiply(&g, v).unwrap()
    })
}

fn elements() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(any::<u8>(), 0..6)
}

fn doubled_patch() -> &'static CoverPatch {
    static PATCH: OnceLock<CoverPatch> = OnceLock::new();
    PATCH.get_or_init(|| build_example(&ExampleName::Doubled(2)).unwrap().cover.expand(Length::from_integer(8)).unwrap())
}

proptest! {
    #[test]
    fn extension_group_axioms(a in elements(), b in elements(), c in elements()) {
        let cover = build_example(&ExampleName::RotationT4).unwrap().cover;
        let spec = cover.spec();
        let (g, h, k) = (element(&cover, &a), element(&cover, &b), element(&cover, &c));
        let left = spec.multiply(&spec.multiply(&g, &h).unwrap(), &k).unwrap();
        let right = spec.multiply(&g, &spec.multiply(&h, &k).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(spec.multiply(&g, &spec.inverse(&g)).unwrap(), spec.identity());
    }

    #[test]
    fn deck_translations_are_isometries(a in elements(), b in elements(), g in elements()) {
        let patch = doubled_patch();
        let cover = patch.cover();
        let x = cover.basepoint();
        let (p, q, g) = (element(cover, &a), element(cover, &b), element(cover, &g));
        prop_assume!(p.len() <= 2 && q.len() <= 2 && g.len() <= 2);
        let at = |h: &GroupElement| GraphPoint::Vertex(cover.translate(h, &x));
        let before = patch.distance(&at(&p), &at(&q)).unwrap();
        let moved = |h: &GroupElement| cover.spec().multiply(&g, h).unwrap();
        let after = patch.distance(&at(&moved(&p)), &at(&moved(&q))).unwrap();
        prop_assert_eq!(before, after);
    }
}

#[test]
fn tree_balls_have_closed_form_sizes() {
    for l in 2..=4usize {
        let cover = build_example(&ExampleName::Tree(l)).unwrap().cover;
        for r in 0..=4u32 {
            let patch = cover.expand(Length::from_integer(r as i64)).unwrap();
            let k = 2 * l;
            // 1 + 2l · ((2l−1)^r − 1) / (2l − 2)
            let expected = 1 + k * ((k - 1).pow(r) - 1) / (k - 2);
            assert_eq!(patch.len(), expected, "tree:{l} radius {r}");
        }
    }
}
