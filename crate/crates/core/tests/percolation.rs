use perclab_core::generators::regular_tree_ball;
use perclab_core::percolation::{
    ball_survival, giant_probability, percolate, reach_set_size, scan_largest_components, threshold_scan,
    tree_survival_oracle, PercConfig,
};
use perclab_core::rng::SplitMix64;
use perclab_testkit::{exact_ball_survival, exact_largest_tail, exact_reach_law, random_connected};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coupling_is_monotone(seed in any::<u64>(), n in 2usize..40, p in 0.0f64..1.0, q in 0.0f64..1.0, trial in 0usize..20) {
        let mut rng = SplitMix64::new(seed);
        let g = random_connected(&mut rng, n, n, 4);
        let (lo, hi) = (p.min(q), p.max(q));
        let a = percolate(&g, &PercConfig::new(lo, seed, 20), trial).unwrap();
        let b = percolate(&g, &PercConfig::new(hi, seed, 20), trial).unwrap();
        for e in 0..g.edge_count() {
            prop_assert!(!a.open_edges.contains(e) || b.open_edges.contains(e));
        }
        prop_assert!(a.largest_component <= b.largest_component);
        let total: usize = a.component_histogram.iter().map(|(s, c)| s * c).sum();
        prop_assert_eq!(total, n);
    }

    #[test]
    fn scan_rows_never_decrease(seed in any::<u64>(), n in 2usize..60) {
        let mut rng = SplitMix64::new(seed);
        let g = random_connected(&mut rng, n, n / 2, 4);
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        for row in scan_largest_components(&g, &grid, seed, 8).unwrap() {
            prop_assert!(row.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(row[20], n);
        }
        let table = threshold_scan(&g, &grid, 0.5, seed, 8).unwrap();
        prop_assert!(table.rows.windows(2).all(|w| w[0].prob <= w[1].prob));
    }
}

fn within(est: f64, exact: f64, trials: usize, sigmas: f64) -> bool {
    let q = exact.clamp(0.0, 1.0);
    let sd = (q * (1.0 - q) / trials as f64).sqrt();
    (est - exact).abs() <= sigmas * sd + 1e-12
}

#[test]
fn giant_probability_matches_enumeration() {
    let mut rng = SplitMix64::new(77);
    let trials = 20_000;
    for i in 0..4 {
        let g = random_connected(&mut rng, 7, 3, 3);
        let p = 0.3 + 0.1 * i as f64;
        let tail = exact_largest_tail(&g, p);
        for k in 1..=g.n() {
            let alpha = k as f64 / g.n() as f64;
            let est = giant_probability(&g, &PercConfig::new(p, 9 + i, trials), alpha).unwrap();
            assert!(within(est.estimate, tail[k], trials, 4.0), "k={k}: {} vs {}", est.estimate, tail[k]);
        }
    }
}

#[test]
fn survival_and_reach_match_enumeration() {
    let mut rng = SplitMix64::new(78);
    let trials = 20_000;
    for i in 0..4 {
        let g = random_connected(&mut rng, 9, 3, 3);
        let p = 0.35 + 0.1 * i as f64;
        let cfg = PercConfig::new(p, 100 + i, trials);
        for r in 1..=2 {
            let exact = exact_ball_survival(&g, 0, r, p);
            let est = ball_survival(&g, 0, r, &cfg).unwrap();
            assert!(within(est.point_estimate, exact, trials, 4.0), "R={r}: {} vs {exact}", est.point_estimate);
            let law = exact_reach_law(&g, 0, r, p);
            let dist = reach_set_size(&g, 0, r, &cfg).unwrap();
            for (size, &q) in law.iter().enumerate() {
                assert!(within(dist.probability(size), q, trials, 4.0), "size {size}: {} vs {q}", dist.probability(size));
            }
        }
    }
}

#[test]
fn tree_oracle_matches_enumeration() {
    for (d, r) in [(3usize, 1usize), (3, 2), (4, 1), (2, 3)] {
        let tree = regular_tree_ball(d, r).unwrap();
        for p in [0.1, 0.5, 0.8] {
            let exact = exact_ball_survival(&tree, 0, r, p);
            let oracle = tree_survival_oracle(d, p, r).unwrap();
            assert!((exact - oracle).abs() < 1e-12, "d={d} R={r} p={p}: {exact} vs {oracle}");
        }
    }
    assert_eq!(tree_survival_oracle(3, 0.5, 1).unwrap(), 0.875);
}
