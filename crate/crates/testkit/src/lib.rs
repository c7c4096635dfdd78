//! Slow reference computations for cross-checking the library: exhaustive
//! isomorphism search, subset enumeration, path packing, and exact
//! percolation probabilities by summing over all `2^E` edge configurations.
//!
//! Nothing here calls into the algorithms under test; `Graph` is used only as
//! an adjacency container and `SplitMix64` only as a random source.

use std::collections::{HashMap, VecDeque};

use perclab_core::rng::SplitMix64;
use perclab_core::Graph;

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)), None).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)), None).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))), None).unwrap()
}

/// Random spanning tree plus up to `extra` random chords, all degrees at most
/// `max_deg` (which must be at least 2).
pub fn random_connected(rng: &mut SplitMix64, n: usize, extra: usize, max_deg: usize) -> Graph {
    assert!(max_deg >= 2 && n >= 1);
    let mut deg = vec![0usize; n];
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| deg[u] < max_deg).collect();
        let u = open[rng.next_below(open.len() as u64) as usize];
        deg[u] += 1;
        deg[v] += 1;
        adj[u][v] = true;
        adj[v][u] = true;
        edges.push((u, v));
    }
    for _ in 0..extra {
        let u = rng.next_below(n as u64) as usize;
        let v = rng.next_below(n as u64) as usize;
        if u != v && !adj[u][v] && deg[u] < max_deg && deg[v] < max_deg {
            deg[u] += 1;
            deg[v] += 1;
            adj[u][v] = true;
            adj[v][u] = true;
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges, None).unwrap()
}

/// Erdős–Rényi `G(n, q)`.
pub fn random_graph(rng: &mut SplitMix64, n: usize, q: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_f64() < q {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges, None).unwrap()
}

/// `perm[v]` is the new name of `v`.
pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.n(), g.edges().iter().map(|&(u, v)| (perm[u], perm[v])), None).unwrap()
}

pub fn random_permutation(rng: &mut SplitMix64, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        p.swap(i, j);
    }
    p
}

fn bfs(g: &Graph, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n()]; g.n()];
    for &(u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

struct IsoSearch {
    a1: Vec<Vec<bool>>,
    a2: Vec<Vec<bool>>,
    label1: Vec<(usize, usize)>,
    label2: Vec<(usize, usize)>,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl IsoSearch {
    fn extend(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let v = self.order[i];
        for w in 0..self.a2.len() {
            if self.used[w] || self.label1[v] != self.label2[w] {
                continue;
            }
            let consistent = self.order[..i]
                .iter()
                .all(|&u| self.a1[v][u] == self.a2[w][self.map[u]]);
            if !consistent {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.extend(i + 1) {
                return true;
            }
            self.used[w] = false;
        }
        false
    }
}

/// Exhaustive search for a bijection preserving adjacency and, when `roots`
/// is given, sending one root to the other.
pub fn brute_isomorphic(g1: &Graph, g2: &Graph, roots: Option<(usize, usize)>) -> bool {
    let n = g1.n();
    if n != g2.n() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let mut d1: Vec<usize> = (0..n).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..n).map(|v| g2.degree(v)).collect();
    d1.sort();
    d2.sort();
    if d1 != d2 {
        return false;
    }
    // Vertex labels: (degree, distance from the root or 0).
    let (dist1, dist2) = match roots {
        Some((r1, r2)) => (bfs(g1, r1), bfs(g2, r2)),
        None => (vec![0; n], vec![0; n]),
    };
    let label1: Vec<(usize, usize)> = (0..n).map(|v| (g1.degree(v), dist1[v])).collect();
    let label2: Vec<(usize, usize)> = (0..n).map(|v| (g2.degree(v), dist2[v])).collect();
    let mut l1 = label1.clone();
    let mut l2 = label2.clone();
    l1.sort();
    l2.sort();
    if l1 != l2 {
        return false;
    }
    // Visit g1 in BFS order so each new vertex has a mapped neighbour.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let starts: Vec<usize> = roots.map(|(r, _)| r).into_iter().chain(0..n).collect();
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for &w in g1.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    let mut search = IsoSearch {
        a1: matrix(g1),
        a2: matrix(g2),
        label1,
        label2,
        order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    search.extend(0)
}

/// Isomorphism-invariant key of a rooted graph: equal keys are necessary for
/// a rooted isomorphism.
pub fn rooted_invariant(g: &Graph, root: usize) -> Vec<usize> {
    let dist = bfs(g, root);
    let mut profile: Vec<(usize, usize, Vec<usize>)> = (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w) * 64 + dist[w]).collect();
            nd.sort();
            (dist[v], g.degree(v), nd)
        })
        .collect();
    profile.sort();
    let mut key = vec![g.n(), g.edge_count()];
    for (d, deg, nd) in profile {
        key.push(d);
        key.push(deg);
        key.push(nd.len());
        key.extend(nd);
    }
    key
}

fn invariant(g: &Graph) -> Vec<usize> {
    let mut rows: Vec<Vec<usize>> = (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort();
            nd.insert(0, g.degree(v));
            nd
        })
        .collect();
    rows.sort();
    let mut key = vec![g.n(), g.edge_count()];
    for r in rows {
        key.push(r.len());
        key.extend(r);
    }
    key
}

/// All connected graphs with `1..=max_n` vertices and maximum degree at most
/// `max_deg`, one per isomorphism class. Every connected graph has a vertex
/// whose removal leaves it connected, so adding one vertex at a time with a
/// nonempty neighbourhood reaches each class.
pub fn connected_graphs(max_n: usize, max_deg: usize) -> Vec<Graph> {
    let mut all = Vec::new();
    let mut level = vec![Graph::from_edges(1, std::iter::empty(), Some(max_deg.max(1))).unwrap()];
    for n in 2..=max_n {
        all.append(&mut level.clone());
        let mut buckets: HashMap<Vec<usize>, Vec<Graph>> = HashMap::new();
        let mut next = Vec::new();
        for g in &level {
            let free: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) < max_deg).collect();
            for mask in 1u32..(1 << free.len()) {
                if mask.count_ones() as usize > max_deg {
                    continue;
                }
                let new = n - 1;
                let extra = free
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &u)| (u, new));
                let h = Graph::from_edges(n, g.edges().iter().copied().chain(extra), None).unwrap();
                let bucket = buckets.entry(invariant(&h)).or_default();
                if !bucket.iter().any(|b| brute_isomorphic(b, &h, None)) {
                    bucket.push(h.clone());
                    next.push(h);
                }
            }
        }
        level = next;
    }
    all.append(&mut level);
    all
}

/// Minimum of `|∂A| / |A|` over nonempty `A` with `|A| <= n/2`, as a reduced
/// fraction.
pub fn brute_cheeger(g: &Graph) -> (u64, u64) {
    let n = g.n();
    assert!((2..=20).contains(&n));
    let mut best = (u64::MAX, 1u64);
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as u64;
        if size as usize > n / 2 {
            continue;
        }
        let cut = g
            .edges()
            .iter()
            .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
            .count() as u64;
        if best.0 == u64::MAX || cut * best.1 < best.0 * size {
            best = (cut, size);
        }
    }
    let g_ = gcd(best.0, best.1);
    (best.0 / g_, best.1 / g_)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Largest number of pairwise edge-disjoint paths from `a1` to `a2`, by
/// enumerating every simple path whose interior avoids both sets and packing
/// them exhaustively. Needs at most 20 edges.
pub fn brute_disjoint_paths(g: &Graph, a1: &[usize], a2: &[usize]) -> usize {
    assert!(g.edge_count() <= 20);
    let mut side = vec![0u8; g.n()];
    a1.iter().for_each(|&v| side[v] = 1);
    a2.iter().for_each(|&v| side[v] = 2);
    let edge_index: HashMap<(usize, usize), usize> =
        g.edges().iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let id = |u: usize, v: usize| edge_index[&(u.min(v), u.max(v))];

    let mut masks = Vec::new();
    for &s in a1 {
        let mut on_path = vec![false; g.n()];
        on_path[s] = true;
        walk(g, s, 0, &side, &mut on_path, &id, &mut masks);
    }
    masks.sort();
    masks.dedup();
    let mut memo = HashMap::new();
    pack(0, &masks, &mut memo)
}

fn walk(
    g: &Graph,
    u: usize,
    mask: u32,
    side: &[u8],
    on_path: &mut [bool],
    id: &dyn Fn(usize, usize) -> usize,
    out: &mut Vec<u32>,
) {
    for &w in g.neighbors(u) {
        if on_path[w] || side[w] == 1 {
            continue;
        }
        let m = mask | 1 << id(u, w);
        if side[w] == 2 {
            out.push(m);
            continue;
        }
        on_path[w] = true;
        walk(g, w, m, side, on_path, id, out);
        on_path[w] = false;
    }
}

fn pack(used: u32, masks: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
    if let Some(&v) = memo.get(&used) {
        return v;
    }
    let best = masks
        .iter()
        .filter(|&&m| m & used == 0)
        .map(|&m| 1 + pack(used | m, masks, memo))
        .max()
        .unwrap_or(0);
    memo.insert(used, best);
    best
}

fn components_sizes(n: usize, edges: &[(usize, usize)], open: u32) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    // Label propagation until stable.
    loop {
        let mut changed = false;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if open >> i & 1 == 1 && label[u] != label[v] {
                let m = label[u].min(label[v]);
                label[u] = m;
                label[v] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut sizes = vec![0usize; n];
    label.iter().for_each(|&l| sizes[l] += 1);
    sizes
}

fn weight(open: u32, m: usize, p: f64) -> f64 {
    let k = open.count_ones() as i32;
    p.powi(k) * (1.0 - p).powi(m as i32 - k)
}

/// `P(largest open component >= k)` for `k = 0..=n`.
pub fn exact_largest_tail(g: &Graph, p: f64) -> Vec<f64> {
    let m = g.edge_count();
    assert!(m <= 20);
    let mut law = vec![0.0; g.n() + 1];
    for open in 0u32..(1 << m) {
        let largest = components_sizes(g.n(), g.edges(), open).into_iter().max().unwrap_or(0);
        law[largest] += weight(open, m, p);
    }
    let mut tail = vec![0.0; g.n() + 1];
    let mut acc = 0.0;
    for k in (0..=g.n()).rev() {
        acc += law[k];
        tail[k] = acc;
    }
    tail
}

struct BallEdges {
    dist: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

fn ball_edges(g: &Graph, o: usize, radius: usize) -> BallEdges {
    let dist = bfs(g, o);
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| dist[u] <= radius && dist[v] <= radius)
        .collect();
    BallEdges { dist, edges }
}

/// Open-edge BFS from `o` using edges selected by `open`; returns hop counts.
fn open_bfs(n: usize, edges: &[(usize, usize)], open: u32, o: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if open >> i & 1 == 1 {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut hops = vec![usize::MAX; n];
    hops[o] = 0;
    let mut q = VecDeque::from([o]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if hops[w] == usize::MAX {
                hops[w] = hops[u] + 1;
                q.push_back(w);
            }
        }
    }
    hops
}

/// Probability that `o` is joined to a vertex at distance exactly `radius` by
/// an open path inside the ball of that radius.
pub fn exact_ball_survival(g: &Graph, o: usize, radius: usize, p: f64) -> f64 {
    let b = ball_edges(g, o, radius);
    let m = b.edges.len();
    assert!(m <= 20);
    (0u32..(1 << m))
        .filter(|&open| {
            let hops = open_bfs(g.n(), &b.edges, open, o);
            (0..g.n()).any(|v| hops[v] != usize::MAX && b.dist[v] == radius)
        })
        .map(|open| weight(open, m, p))
        .sum()
}

/// Law of the number of vertices joined to `o` by an open path of at most
/// `radius` edges, indexed by that number.
pub fn exact_reach_law(g: &Graph, o: usize, radius: usize, p: f64) -> Vec<f64> {
    let b = ball_edges(g, o, radius);
    let m = b.edges.len();
    assert!(m <= 20);
    let mut law = vec![0.0; g.n() + 1];
    for open in 0u32..(1 << m) {
        let hops = open_bfs(g.n(), &b.edges, open, o);
        let reached = hops.iter().filter(|&&h| h <= radius).count();
        law[reached] += weight(open, m, p);
    }
    law
}

/// Labelled simple 3-regular graphs on 6 vertices, split by isomorphism type:
/// (copies of K_{3,3}, copies of the triangular prism).
pub fn cubic_six_census() -> (Vec<Vec<(usize, usize)>>, Vec<Vec<(usize, usize)>>) {
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).collect();
    let (mut bip, mut prism) = (Vec::new(), Vec::new());
    for mask in 0u32..(1 << pairs.len()) {
        if mask.count_ones() != 9 {
            continue;
        }
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let mut deg = [0; 6];
        edges.iter().for_each(|&(u, v)| {
            deg[u] += 1;
            deg[v] += 1;
        });
        if deg.iter().any(|&d| d != 3) {
            continue;
        }
        let has_triangle = edges.iter().any(|&(u, v)| {
            (0..6).any(|w| edges.contains(&(u.min(w), u.max(w))) && edges.contains(&(v.min(w), v.max(w))))
        });
        if has_triangle {
            prism.push(edges);
        } else {
            bip.push(edges);
        }
    }
    (bip, prism)
}
