use perclab_core::ball::extract_ball;
use perclab_core::canon::certify;
use perclab_core::rng::SplitMix64;
use perclab_testkit::{brute_isomorphic, random_connected, random_permutation, relabel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn relabelling_keeps_certificate(seed in any::<u64>(), n in 1usize..10, extra in 0usize..12, root in 0usize..10) {
        let mut rng = SplitMix64::new(seed);
        let g = random_connected(&mut rng, n, extra, 4);
        let root = root % n;
        let perm = random_permutation(&mut rng, n);
        let h = relabel(&g, &perm);
        prop_assert_eq!(certify(&g, root), certify(&h, perm[root]));
    }

    #[test]
    fn certificate_equality_matches_brute_force(seed in any::<u64>(), n in 1usize..7, extra in 0usize..4) {
        // Small sizes and few chords make isomorphic pairs common.
        let mut rng = SplitMix64::new(seed);
        let g1 = random_connected(&mut rng, n, extra, 3);
        let g2 = random_connected(&mut rng, n, extra, 3);
        for r1 in 0..n {
            for r2 in 0..n {
                let same = certify(&g1, r1) == certify(&g2, r2);
                prop_assert_eq!(same, brute_isomorphic(&g1, &g2, Some((r1, r2))), "roots {} {}", r1, r2);
            }
        }
    }

    #[test]
    fn ball_certificate_ignores_outside(seed in any::<u64>(), n in 2usize..30, extra in 0usize..20, r in 0usize..4) {
        let mut rng = SplitMix64::new(seed);
        let g = random_connected(&mut rng, n, extra, 4);
        let perm = random_permutation(&mut rng, n);
        let h = relabel(&g, &perm);
        for v in 0..n {
            let a = extract_ball(&g, v, r).unwrap();
            let b = extract_ball(&h, perm[v], r).unwrap();
            prop_assert_eq!(a.certificate(), b.certificate());
            prop_assert!(brute_isomorphic(a.graph(), b.graph(), Some((0, 0))));
        }
    }
}

#[test]
fn hex_round_trip_on_random_balls() {
    let mut rng = SplitMix64::new(5);
    for _ in 0..200 {
        let g = random_connected(&mut rng, 12, 8, 4);
        let c = certify(&g, 0);
        let back = perclab_core::Certificate::from_hex(&c.to_hex()).unwrap();
        assert_eq!(back, c);
    }
}
