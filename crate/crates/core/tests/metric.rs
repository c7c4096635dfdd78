use perclab_core::ball::{metric_d, Agreement};
use perclab_core::rng::SplitMix64;
use perclab_testkit::{cycle, random_connected, random_permutation, relabel};
use proptest::prelude::*;

fn rooted(seed: u64, n: usize, extra: usize) -> (perclab_core::Graph, usize) {
    let mut rng = SplitMix64::new(seed);
    let g = random_connected(&mut rng, n, extra, 3);
    let o = rng.next_below(n as u64) as usize;
    (g, o)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn strong_triangle_inequality(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), n in 1usize..16, k in 0usize..4) {
        let x = rooted(s1, n, k);
        let y = rooted(s2, n, k);
        let z = rooted(s3, n, k);
        let d = |a: &(perclab_core::Graph, usize), b: &(perclab_core::Graph, usize)| {
            let r = metric_d(&a.0, a.1, &b.0, b.1, 32).unwrap();
            assert!(!r.truncated);
            r.d()
        };
        prop_assert!(d(&x, &z) <= d(&x, &y).max(d(&y, &z)));
        prop_assert_eq!(d(&x, &y), d(&y, &x));
    }

    #[test]
    fn isomorphic_copies_are_at_distance_zero(seed in any::<u64>(), n in 1usize..20) {
        let (g, o) = rooted(seed, n, 5);
        let perm = random_permutation(&mut SplitMix64::new(seed ^ 1), n);
        let h = relabel(&g, &perm);
        let r = metric_d(&g, o, &h, perm[o], 32).unwrap();
        prop_assert_eq!(r.agreement, Agreement::Infinite);
    }
}

#[test]
fn long_cycles_agree_up_to_half_length() {
    for (a, b) in [(10usize, 11usize), (20, 40), (7, 9)] {
        let r = metric_d(&cycle(a), 0, &cycle(b), 0, 64).unwrap();
        // Radius-s balls of C_n are paths while 2s + 2 <= n.
        assert_eq!(r.agreement, Agreement::Finite((a - 2) / 2), "C{a} vs C{b}");
    }
}
