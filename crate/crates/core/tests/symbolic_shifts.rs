use geolab::lab::examples::{build_example, ExampleName};
use geolab::space::Length;
use geolab::symbolic::{geodesic_shift, local_geodesic_shift, sft_entropy};
use num_bigint::BigUint;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn rose_entropy_is_exact(l in 2usize..=6) {
        let cover = build_example(&ExampleName::Tree(l)).unwrap().cover;
        let shift = local_geodesic_shift(cover.base()).unwrap();
        let b = sft_entropy(&shift).unwrap();
        prop_assert!(b.exact);
        prop_assert!((b.value() - ((2 * l - 1) as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn rose_word_counts(l in 2usize..=4, n in 1usize..=8) {
        let cover = build_example(&ExampleName::Tree(l)).unwrap().cover;
        let shift = local_geodesic_shift(cover.base()).unwrap();
        let k = 2 * l as u32;
        prop_assert_eq!(shift.word_count(n), BigUint::from(k) * BigUint::from(k - 1).pow(n as u32 - 1));
    }
}

#[test]
fn doubled_windows_agree() {
    let ex = build_example(&ExampleName::Doubled(2)).unwrap();
    for l in 1..=3usize {
        let patch = ex.cover.expand(Length::from_integer(l as i64 + 1)).unwrap();
        let b = sft_entropy(&geodesic_shift(&patch, l).unwrap()).unwrap();
        assert!(b.exact, "L={l}");
        assert!((b.value() - 6f64.ln()).abs() < 1e-12, "L={l}: {}", b.value());
    }
}
