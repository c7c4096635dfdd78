use perclab_core::generators::{generate, Family, GenSpec};
use perclab_core::Graph;
use perclab_testkit::{brute_isomorphic, cubic_six_census};

fn has_triangle(g: &Graph) -> bool {
    g.edges()
        .iter()
        .any(|&(u, v)| g.neighbors(u).iter().any(|w| g.neighbors(v).contains(w)))
}

#[test]
fn random_cubic_on_six_vertices_is_uniform() {
    // 70 labelled cubic graphs on 6 vertices: 10 copies of K_{3,3}, 60 prisms.
    let (bip, prism) = cubic_six_census();
    let total = (bip.len() + prism.len()) as f64;
    let expected = bip.len() as f64 / total;
    let k33 = Graph::from_edges(6, bip[0].clone(), None).unwrap();

    let samples = 10_000;
    let mut hits = 0;
    for seed in 0..samples {
        let g = generate(&GenSpec::new(Family::RandomRegular, 6).with_degree(3).with_seed(seed)).unwrap();
        let is_k33 = !has_triangle(&g);
        assert_eq!(is_k33, brute_isomorphic(&g, &k33, None));
        hits += usize::from(is_k33);
    }
    let freq = hits as f64 / samples as f64;
    let sd = (expected * (1.0 - expected) / samples as f64).sqrt();
    assert!((freq - expected).abs() <= 3.0 * sd, "K33 frequency {freq}, expected {expected}");
}

#[test]
fn generated_graphs_satisfy_their_family() {
    for seed in 0..20 {
        let g = generate(&GenSpec::new(Family::RandomRegular, 50).with_degree(4).with_seed(seed)).unwrap();
        assert!((0..50).all(|v| g.degree(v) == 4));
        let text = g.to_edge_list();
        assert_eq!(Graph::parse_edge_list(&text).unwrap().edges(), g.edges());

        let b = generate(&GenSpec::new(Family::BridgedPair, 40).with_seed(seed)).unwrap();
        assert_eq!(b.edge_count(), 20 * 4 / 2 + 20 + 1);
        assert!(b.is_connected());
    }
    let t = generate(&GenSpec::new(Family::Torus2d, 16)).unwrap();
    assert!((0..16).all(|v| t.degree(v) == 4));
    assert_eq!(t.edge_count(), 32);
}
