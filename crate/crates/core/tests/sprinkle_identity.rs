use percolab::gw::sprinkle_split;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn complements_multiply_to_one_minus_p(p in 0.0f64..=1.0, frac in 0.0f64..=1.0, d in 2usize..100_000) {
        let d = d as f64;
        let s = frac * p * d;
        let split = sprinkle_split(p, s, d).unwrap();
        let product = split.p1_complement * split.p2_complement;
        let target = 1.0 - p;
        prop_assert!((product - target).abs() <= 1e-12 * target.max(f64::MIN_POSITIVE), "{product} vs {target}");
        prop_assert!((0.0..=1.0).contains(&split.p1) && split.p1 <= p + 1e-15);
        prop_assert!((split.p1 - (1.0 - split.p1_complement)).abs() <= 1e-15);
    }
}
