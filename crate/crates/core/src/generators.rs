//! Seeded graph families used by the experiments.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::SplitMix64;

/// Configuration-model samples tried before giving up on a simple graph.
pub const REJECTION_CAP: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cycle,
    Complete,
    Torus2d,
    RandomRegular,
    /// Random 4-regular graph and a cycle, each on n/2 vertices, joined by one
    /// edge. Cheeger constant at most 2/n: the non-expander control.
    BridgedPair,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Torus2d => "torus2d",
            Family::RandomRegular => "random_regular",
            Family::BridgedPair => "bridged_pair",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cycle" => Family::Cycle,
            "complete" => Family::Complete,
            "torus2d" => Family::Torus2d,
            "random_regular" => Family::RandomRegular,
            "bridged_pair" => Family::BridgedPair,
            other => return Err(Error::InfeasibleSpec(format!("unknown family `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    /// Degree for `random_regular`; ignored otherwise.
    pub d: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize) -> Self {
        Self {
            family,
            n,
            d: 3,
            seed: 0,
        }
    }

    pub fn with_degree(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InfeasibleSpec(msg));
        let n = self.n;
        match self.family {
            Family::Cycle if n < 3 => bad(format!("cycle needs n >= 3, got {n}")),
            Family::Complete if n < 2 => bad(format!("complete graph needs n >= 2, got {n}")),
            Family::Torus2d => {
                let side = isqrt(n);
                if side * side != n {
                    bad(format!("torus2d needs a perfect square n, got {n}"))
                } else if side < 3 {
                    bad(format!("torus2d needs side >= 3, got {side}"))
                } else {
                    Ok(())
                }
            }
            Family::RandomRegular => {
                let d = self.d;
                if d < 3 {
                    bad(format!("random_regular needs d >= 3, got {d}"))
                } else if !(n * d).is_multiple_of(2) {
                    bad(format!("random_regular needs n*d even, got n={n}, d={d}"))
                } else if n <= d {
                    bad(format!("random_regular needs n > d, got n={n}, d={d}"))
                } else {
                    Ok(())
                }
            }
            Family::BridgedPair if !n.is_multiple_of(2) => bad(format!("bridged_pair needs even n, got {n}")),
            Family::BridgedPair if n < 10 => bad(format!("bridged_pair needs n >= 10, got {n}")),
            _ => Ok(()),
        }
    }

    /// Flat `key=value` block, one pair per line.
    pub fn to_key_values(&self) -> String {
        let mut s = format!("family={}\nn={}\n", self.family, self.n);
        if self.family == Family::RandomRegular {
            s.push_str(&format!("d={}\n", self.d));
        }
        s.push_str(&format!("seed={}\n", self.seed));
        s
    }

    pub fn from_key_values(text: &str) -> Result<Self> {
        let map = parse_key_values(text)?;
        let get = |k: &str| map.get(k).map(String::as_str);
        let family: Family = get("family")
            .ok_or_else(|| Error::InfeasibleSpec("missing `family`".into()))?
            .parse()?;
        let num = |k: &str| -> Result<Option<u64>> {
            get(k)
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|_| Error::InfeasibleSpec(format!("`{k}` must be an integer, got `{v}`")))
                })
                .transpose()
        };
        let n = num("n")?.ok_or_else(|| Error::InfeasibleSpec("missing `n`".into()))? as usize;
        let d = num("d")?.unwrap_or(3) as usize;
        let seed = num("seed")?.unwrap_or(0);
        for key in map.keys() {
            if !matches!(key.as_str(), "family" | "n" | "d" | "seed") {
                return Err(Error::InfeasibleSpec(format!("unknown key `{key}`")));
            }
        }
        Ok(GenSpec { family, n, d, seed })
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected key=value, got `{line}`"),
        })?;
        let key = k.trim().to_string();
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(map)
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    match spec.family {
        Family::Cycle => Graph::from_edges(n, cycle_edges(0, n), Some(2)),
        Family::Complete => Graph::from_edges(
            n,
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
            Some(n - 1),
        ),
        Family::Torus2d => {
            let side = isqrt(n);
            let at = |r: usize, c: usize| (r % side) * side + (c % side);
            let edges = (0..side).flat_map(|r| {
                (0..side).flat_map(move |c| [(at(r, c), at(r, c + 1)), (at(r, c), at(r + 1, c))])
            });
            Graph::from_edges(n, edges, Some(4))
        }
        Family::RandomRegular => {
            let mut rng = SplitMix64::new(spec.seed);
            let edges = configuration_model(n, spec.d, &mut rng)?;
            Graph::from_edges(n, edges, Some(spec.d))
        }
        Family::BridgedPair => {
            let half = n / 2;
            let mut rng = SplitMix64::new(spec.seed);
            let mut edges = configuration_model(half, 4, &mut rng)?;
            edges.extend(cycle_edges(half, half));
            edges.push((0, half));
            Graph::from_edges(n, edges, Some(5))
        }
    }
}

fn cycle_edges(offset: usize, len: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..len).map(move |i| (offset + i, offset + (i + 1) % len))
}

/// Uniform simple `d`-regular graph on `n` vertices: shuffle the `n·d`
/// half-edges, pair consecutive ones, reject any pairing with a loop or a
/// repeated edge.
fn configuration_model(n: usize, d: usize, rng: &mut SplitMix64) -> Result<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut edges = Vec::with_capacity(n * d / 2);
    'attempt: for _ in 0..REJECTION_CAP {
        for (i, s) in stubs.iter_mut().enumerate() {
            *s = i / d;
        }
        rng.shuffle(&mut stubs);
        edges.clear();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'attempt;
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Ok(edges);
    }
    Err(Error::RejectionCapExceeded {
        attempts: REJECTION_CAP,
    })
}

/// The radius-`r` ball around the root of the infinite `d`-regular tree, as an
/// explicit graph with the root at vertex 0 and vertices numbered level by level.
pub fn regular_tree_ball(d: usize, r: usize) -> Result<Graph> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("tree degree must be >= 2, got {d}")));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;
    for depth in 0..r {
        let mut next = Vec::new();
        for &v in &frontier {
            let children = if depth == 0 { d } else { d - 1 };
            for _ in 0..children {
                edges.push((v, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    Graph::from_edges(next_id, edges, Some(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_three_is_triangle() {
        let g = generate(&GenSpec::new(Family::Cycle, 3)).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!((0..3).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn random_regular_is_regular_and_deterministic() {
        let spec = GenSpec::new(Family::RandomRegular, 10).with_degree(3).with_seed(1);
        let g = generate(&spec).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert_eq!(generate(&spec).unwrap(), g);
        let other = generate(&spec.clone().with_seed(2)).unwrap();
        assert_ne!(other, g);
    }

    #[test]
    fn bridged_pair_counts() {
        let g = generate(&GenSpec::new(Family::BridgedPair, 20).with_seed(7)).unwrap();
        assert_eq!(g.edge_count(), 31);
        assert_eq!(g.delta_bound(), 5);
        let mut odd: Vec<(usize, usize)> = (0..20)
            .filter(|&v| g.degree(v) != 4 && g.degree(v) != 2)
            .map(|v| (v, g.degree(v)))
            .collect();
        odd.sort();
        assert_eq!(odd, vec![(0, 5), (10, 3)]);
        assert!(g.has_edge(0, 10));
    }

    #[test]
    fn torus_and_complete() {
        let t = generate(&GenSpec::new(Family::Torus2d, 16)).unwrap();
        assert_eq!(t.edge_count(), 32);
        assert!((0..16).all(|v| t.degree(v) == 4));
        let k = generate(&GenSpec::new(Family::Complete, 5)).unwrap();
        assert_eq!(k.edge_count(), 10);
        assert_eq!(k.delta_bound(), 4);
    }

    #[test]
    fn infeasible_specs() {
        let cases = [
            GenSpec::new(Family::RandomRegular, 7).with_degree(3),
            GenSpec::new(Family::RandomRegular, 8).with_degree(2),
            GenSpec::new(Family::Torus2d, 15),
            GenSpec::new(Family::Torus2d, 4),
            GenSpec::new(Family::BridgedPair, 21),
            GenSpec::new(Family::Cycle, 2),
        ];
        for spec in cases {
            assert!(
                matches!(generate(&spec), Err(Error::InfeasibleSpec(_))),
                "{spec:?}"
            );
        }
    }

    #[test]
    fn key_values_round_trip() {
        let spec = GenSpec::new(Family::RandomRegular, 10).with_degree(3).with_seed(42);
        let text = spec.to_key_values();
        assert_eq!(text, "family=random_regular\nn=10\nd=3\nseed=42\n");
        assert_eq!(GenSpec::from_key_values(&text).unwrap(), spec);
        assert!(GenSpec::from_key_values("family=cycle\nn=5\ncolour=red\n").is_err());
        assert!(GenSpec::from_key_values("family=cycle\nn=five\n").is_err());
        assert!(GenSpec::from_key_values("n=5\n").is_err());
    }

    #[test]
    fn tree_ball_sizes() {
        let b = regular_tree_ball(3, 2).unwrap();
        assert_eq!(b.n(), 10);
        assert_eq!(b.degree(0), 3);
        assert_eq!(b.degree(1), 3);
        assert_eq!(b.degree(9), 1);
        assert_eq!(regular_tree_ball(3, 0).unwrap().n(), 1);
    }
}
