//! Fixtures and the golden-file case list shared by the CLI test targets.

use std::path::{Path, PathBuf};

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn fixture(name: &str) -> String {
    dir().join("fixtures").join(name).to_str().unwrap().to_string()
}

/// (golden file name, arguments) for every pinned command.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let c6 = fixture("c6.txt");
    let k2 = fixture("k2.txt");
    let p4 = fixture("path4_isolated.txt");
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        ("gen_cycle_3.txt", s(&["gen", "--family", "cycle", "--n", "3"])),
        ("gen_random_regular_10.txt", s(&["gen", "--family", "random_regular", "--n", "10", "--d", "3", "--seed", "1"])),
        ("gen_bridged_pair_20.txt", s(&["gen", "--family", "bridged_pair", "--n", "20", "--seed", "7"])),
        ("gen_torus2d_16.txt", s(&["gen", "--family", "torus2d", "--n", "16"])),
        ("cheeger_c6.json", s(&["cheeger", &c6])),
        ("cheeger_k2.json", s(&["cheeger", &k2])),
        ("cheeger_c6_upper.json", s(&["cheeger", &c6, "--mode", "upper"])),
        ("scan_c6.csv", s(&["scan", &c6, "--p-grid", "0:1:0.1", "--alpha", "0.5", "--trials", "200", "--seed", "5"])),
        ("scan_c6.json", s(&["scan", &c6, "--p-grid", "0,0.5,1", "--alpha", "0.5", "--trials", "50", "--seed", "5", "--format", "json"])),
        ("scan_c6.svg", s(&["scan", &c6, "--p-grid", "0:1:0.25", "--alpha", "0.5", "--trials", "50", "--seed", "5", "--format", "svg"])),
        ("survival_tree_3_1.json", s(&["survival", "--tree-d", "3", "--radius", "1", "--p", "0.5", "--trials", "10000", "--seed", "1"])),
        ("survival_c6.json", s(&["survival", &c6, "--root", "2", "--radius", "3", "--p", "0.7", "--trials", "1000", "--seed", "4"])),
        ("reach_path4.json", s(&["reach", &p4, "--root", "1", "--radius", "2", "--p", "0.5", "--trials", "1000", "--seed", "2"])),
        ("balls_c6.json", s(&["balls", &c6, "--radius", "1"])),
        ("balls_path4_sampled.json", s(&["balls", &p4, "--radius", "1", "--mode", "sampled", "--samples", "40", "--seed", "3"])),
        ("flow_c6.json", s(&["flow", &c6, "--a1", "0", "--a2", "3"])),
        ("verify_locality.txt", s(&["verify-locality", "--n-list", "1000,10000", "--p-grid", "0.2,0.5,0.8", "--trials", "20", "--seed", "3"])),
        ("verify_locality.csv", s(&["verify-locality", "--n-list", "1000,10000", "--p-grid", "0.2,0.5,0.8", "--trials", "20", "--seed", "3", "--format", "csv"])),
        ("verify_constancy.json", s(&["verify-constancy", "--n", "1000", "--n-positive", "20000", "--seed", "2", "--format", "json"])),
    ]
}

