use num_rational::Ratio;

use super::{ExpansionReport, Method};
use crate::error::{Error, Result};
use crate::expansion::spectral;
use crate::graph::Graph;

/// Largest graph handled by exhaustive subset enumeration.
pub const EXACT_CAP: usize = 24;

/// Exact Cheeger constant by enumerating every `A` with `0 < |A| <= n/2`.
///
/// Subsets are visited in Gray-code order so each step updates the cut size in
/// O(degree). Ties between equal ratios go to the lexicographically smallest
/// sorted vertex list. A disconnected graph reports `h = 0` witnessed by its
/// lexicographically smallest component of size at most `n/2`.
pub fn cheeger_exact(g: &Graph) -> Result<ExpansionReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Cheeger constant needs at least 2 vertices, got {n}"
        )));
    }
    if let Some(component) = small_component(g) {
        return Ok(ExpansionReport::exact(Ratio::from_integer(0), component));
    }
    if n > EXACT_CAP {
        return Err(Error::CheegerCap { n, cap: EXACT_CAP });
    }

    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let half = (n / 2) as u32;
    let mut set = 0u32;
    let mut cut = 0u64;
    let mut best: Option<(u64, u32, u32)> = None; // (cut, size, mask)
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let inside = (adj[v] & set).count_ones() as u64;
        let deg = adj[v].count_ones() as u64;
        if set & bit == 0 {
            cut = cut + deg - 2 * inside;
        } else {
            cut = cut + 2 * inside - deg;
        }
        set ^= bit;
        let size = set.count_ones();
        if size > half {
            continue;
        }
        let better = match best {
            None => true,
            Some((bc, bs, bm)) => {
                let lhs = cut * bs as u64;
                let rhs = bc * size as u64;
                lhs < rhs || (lhs == rhs && lex_less(set, bm))
            }
        };
        if better {
            best = Some((cut, size, set));
        }
    }
    let (cut, size, mask) = best.expect("n >= 2 admits a singleton");
    let witness = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
    Ok(ExpansionReport::exact(Ratio::new(cut, size as u64), witness))
}

/// Lexicographic comparison of the sorted element lists of two bitsets.
fn lex_less(mut a: u32, mut b: u32) -> bool {
    loop {
        match (a == 0, b == 0) {
            (true, true) => return false,
            (true, false) => return true,
            (false, true) => return false,
            (false, false) => {
                let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
                if la != lb {
                    return la < lb;
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

fn small_component(g: &Graph) -> Option<Vec<usize>> {
    let labels = g.components();
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    if count <= 1 {
        return None;
    }
    let mut members = vec![Vec::new(); count];
    for (v, &c) in labels.iter().enumerate() {
        members[c].push(v);
    }
    members
        .into_iter()
        .filter(|m| 2 * m.len() <= g.n())
        .min()
}

/// `|E(A, V∖A)| / min(|A|, |V∖A|)` for a proper nonempty subset, as an upper
/// bound on `h(G)` witnessed by the smaller side.
pub fn cut_witness(g: &Graph, set: &[usize]) -> Result<ExpansionReport> {
    let n = g.n();
    let mut inside = vec![false; n];
    for &v in set {
        g.check_vertex(v)?;
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == n {
        return Err(Error::InvalidArgument(
            "cut witness must be a proper nonempty subset".into(),
        ));
    }
    let boundary = g
        .edges()
        .iter()
        .filter(|&&(u, v)| inside[u] != inside[v])
        .count() as u64;
    let small_side = 2 * size <= n;
    let witness: Vec<usize> = (0..n).filter(|&v| inside[v] == small_side).collect();
    let ratio = Ratio::new(boundary, witness.len() as u64);
    Ok(ExpansionReport {
        method: Method::CutWitness,
        lower: 0.0,
        upper: ratio_f64(ratio),
        lower_exact: Some(Ratio::from_integer(0)),
        upper_exact: Some(ratio),
        witness_cut: Some(witness),
        residual: None,
    })
}

/// Best cut found among bridge cuts, BFS-prefix sweeps and (for graphs small
/// enough for the dense eigensolver) a Fiedler-vector sweep. Always a valid
/// upper bound on `h(G)`; not necessarily tight.
pub fn cheeger_upper_search(g: &Graph) -> Result<ExpansionReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Cheeger constant needs at least 2 vertices, got {n}"
        )));
    }
    if let Some(component) = small_component(g) {
        return cut_witness(g, &component);
    }
    let mut best: Option<(Ratio<u64>, Vec<usize>)> = None;
    let mut offer = |set: Vec<usize>| -> Result<()> {
        let report = cut_witness(g, &set)?;
        let ratio = report.upper_exact.unwrap();
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, report.witness_cut.unwrap()));
        }
        Ok(())
    };

    for (u, v) in bridges(g) {
        let side = side_of(g, u, (u, v));
        offer(side)?;
    }

    let starts: Vec<usize> = if n <= 256 {
        (0..n).collect()
    } else {
        (0..64).map(|i| i * n / 64).collect()
    };
    for s in starts {
        let order: Vec<usize> = bfs_order(g, s);
        offer_best_prefix(g, &order, &mut offer)?;
    }
    if n <= spectral::DENSE_LIMIT {
        let (_, vector, _) = spectral::dense_fiedler(g);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vector[a].total_cmp(&vector[b]).then(a.cmp(&b)));
        offer_best_prefix(g, &order, &mut offer)?;
    }
    let (_, witness) = best.expect("at least one BFS sweep ran");
    cut_witness(g, &witness)
}

fn offer_best_prefix(
    g: &Graph,
    order: &[usize],
    offer: &mut impl FnMut(Vec<usize>) -> Result<()>,
) -> Result<()> {
    let n = g.n();
    let mut inside = vec![false; n];
    let mut cut: i64 = 0;
    let mut best: Option<(i64, usize)> = None;
    for (k, &v) in order.iter().enumerate().take(n - 1) {
        let into = g.neighbors(v).iter().filter(|&&w| inside[w]).count() as i64;
        cut += g.degree(v) as i64 - 2 * into;
        inside[v] = true;
        let size = (k + 1).min(n - k - 1) as i64;
        if best.is_none_or(|(bc, bs)| cut * (bs as i64) < bc * size) {
            best = Some((cut, k + 1));
        }
    }
    if let Some((_, len)) = best {
        offer(order[..len].to_vec())?;
    }
    Ok(())
}

fn bfs_order(g: &Graph, s: usize) -> Vec<usize> {
    let dist = g.distances_from(s);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (dist[v].unwrap_or(usize::MAX), v));
    order
}

/// Vertices reachable from `start` without crossing `skip`.
fn side_of(g: &Graph, start: usize, skip: (usize, usize)) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            let e = (u.min(w), u.max(w));
            if e == skip || seen[w] {
                continue;
            }
            seen[w] = true;
            stack.push(w);
        }
    }
    (0..g.n()).filter(|&v| seen[v]).collect()
}

/// Bridges by iterative low-link DFS.
pub fn bridges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut out = Vec::new();
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, parent edge id, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (u, parent_edge, ref mut next)) = stack.last_mut() {
            if let Some((w, e)) = g.incident(u).nth(*next) {
                *next += 1;
                if e == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, e, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        out.push((p.min(u), p.max(u)));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub(crate) fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, GenSpec};

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)), None).unwrap()
    }

    fn complete(n: usize) -> Graph {
        generate(&GenSpec::new(Family::Complete, n)).unwrap()
    }

    /// Independent oracle: direct enumeration of all subsets with boundary
    /// counted edge by edge.
    fn brute_force_h(g: &Graph) -> Ratio<u64> {
        let n = g.n();
        let mut best: Option<Ratio<u64>> = None;
        for mask in 1u32..(1 << n) {
            let size = mask.count_ones() as u64;
            if 2 * size > n as u64 {
                continue;
            }
            let cut = g
                .edges()
                .iter()
                .filter(|&&(u, v)| ((mask >> u) & 1) != ((mask >> v) & 1))
                .count() as u64;
            let r = Ratio::new(cut, size);
            best = Some(best.map_or(r, |b: Ratio<u64>| b.min(r)));
        }
        best.unwrap()
    }

    #[test]
    fn k2() {
        let r = cheeger_exact(&complete(2)).unwrap();
        assert_eq!(r.upper_exact, Some(Ratio::from_integer(1)));
        assert_eq!(r.witness_cut, Some(vec![0]));
    }

    #[test]
    fn c6_is_two_thirds() {
        let r = cheeger_exact(&cycle(6)).unwrap();
        assert_eq!(brute_force_h(&cycle(6)), Ratio::new(2, 3));
        assert_eq!(r.lower_exact, Some(Ratio::new(2, 3)));
        assert_eq!(r.upper_exact, Some(Ratio::new(2, 3)));
        assert_eq!(r.witness_cut, Some(vec![0, 1, 2]));
        assert_eq!(r.method, Method::Exact);
    }

    #[test]
    fn k4_is_two() {
        assert_eq!(brute_force_h(&complete(4)), Ratio::from_integer(2));
        let r = cheeger_exact(&complete(4)).unwrap();
        assert_eq!(r.upper_exact, Some(Ratio::from_integer(2)));
        assert_eq!(r.witness_cut, Some(vec![0, 1]));
    }

    #[test]
    fn matches_brute_force_on_small_families() {
        let graphs = vec![
            cycle(7),
            complete(5),
            generate(&GenSpec::new(Family::Torus2d, 9)).unwrap(),
            generate(&GenSpec::new(Family::RandomRegular, 12).with_degree(3).with_seed(3)).unwrap(),
            generate(&GenSpec::new(Family::BridgedPair, 12).with_seed(1)).unwrap(),
        ];
        for g in graphs {
            let r = cheeger_exact(&g).unwrap();
            assert_eq!(r.upper_exact.unwrap(), brute_force_h(&g));
            let w = r.witness_cut.unwrap();
            let check = cut_witness(&g, &w).unwrap();
            assert_eq!(check.upper_exact, r.upper_exact);
        }
    }

    #[test]
    fn disconnected_reports_zero_with_component() {
        let g = Graph::from_edges(5, [(0, 4), (1, 2), (2, 3)], None).unwrap();
        let r = cheeger_exact(&g).unwrap();
        assert_eq!(r.upper_exact, Some(Ratio::from_integer(0)));
        assert_eq!(r.witness_cut, Some(vec![0, 4]));
    }

    #[test]
    fn size_cap() {
        assert_eq!(
            cheeger_exact(&cycle(25)).unwrap_err(),
            Error::CheegerCap { n: 25, cap: 24 }
        );
    }

    #[test]
    fn bridges_found() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)], None)
            .unwrap();
        assert_eq!(bridges(&g), vec![(2, 3)]);
        assert!(bridges(&cycle(5)).is_empty());
    }

    #[test]
    fn bridged_pair_upper_search_hits_bridge_cut() {
        for n in [20usize, 40, 200] {
            let g = generate(&GenSpec::new(Family::BridgedPair, n).with_seed(7)).unwrap();
            let r = cheeger_upper_search(&g).unwrap();
            assert!(r.upper_exact.unwrap() <= Ratio::new(1, n as u64 / 2));
            if n <= 24 {
                let exact = cheeger_exact(&g).unwrap();
                assert!(exact.upper_exact.unwrap() <= r.upper_exact.unwrap());
            }
        }
    }
}
