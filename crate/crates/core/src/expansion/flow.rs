//! Edge-disjoint path counts between vertex sets (Menger) by unit-capacity
//! max-flow with BFS augmenting paths.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowResult {
    /// Maximum number of edge-disjoint `a1`-to-`a2` paths.
    pub value: usize,
    /// Edges `(u, v)`, `u < v`, of a minimum separating cut.
    pub min_cut: Vec<(usize, usize)>,
    /// A decomposition into `value` edge-disjoint paths, each meeting `a1` only
    /// at its first vertex and `a2` only at its last, ordered by length.
    pub paths: Vec<Vec<usize>>,
}

impl FlowResult {
    /// Number of edges on each path, in the order of `paths`.
    pub fn path_lengths(&self) -> Vec<usize> {
        self.paths.iter().map(|p| p.len() - 1).collect()
    }
}

struct Network {
    head: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds arc `u -> v` with capacity `c` and its partner `v -> u` with
    /// capacity `back`; the pair are each other's reverse (`a ^ 1`).
    fn add(&mut self, u: usize, v: usize, c: u64, back: u64) -> usize {
        let a = self.head.len();
        self.head.push(v);
        self.cap.push(c);
        self.adj[u].push(a);
        self.head.push(u);
        self.cap.push(back);
        self.adj[v].push(a + 1);
        a
    }
}

pub fn edge_disjoint_paths(g: &Graph, a1: &[usize], a2: &[usize]) -> Result<FlowResult> {
    let n = g.n();
    let mut side = vec![0u8; n];
    for &v in a1 {
        g.check_vertex(v)?;
        side[v] = 1;
    }
    for &v in a2 {
        g.check_vertex(v)?;
        if side[v] == 1 {
            return Err(Error::OverlappingTerminals(v));
        }
        side[v] = 2;
    }
    if a1.is_empty() || a2.is_empty() {
        return Err(Error::InvalidArgument("terminal sets must be nonempty".into()));
    }

    let (source, sink) = (n, n + 1);
    let big = g.edge_count() as u64 + 1;
    let mut net = Network::new(n + 2);
    // An undirected unit edge is a pair of unit arcs that are each other's reverse.
    let edge_arc: Vec<usize> = g
        .edges()
        .iter()
        .map(|&(u, v)| net.add(u, v, 1, 1))
        .collect();
    let mut terminal_arc = vec![usize::MAX; n];
    for v in 0..n {
        match side[v] {
            1 => terminal_arc[v] = net.add(source, v, big, 0),
            2 => terminal_arc[v] = net.add(v, sink, big, 0),
            _ => {}
        }
    }

    let mut value = 0usize;
    let mut pred = vec![usize::MAX; n + 2];
    loop {
        pred.iter_mut().for_each(|p| *p = usize::MAX);
        let mut queue = VecDeque::from([source]);
        let mut reached = false;
        'bfs: while let Some(u) = queue.pop_front() {
            for &a in &net.adj[u] {
                let w = net.head[a];
                if net.cap[a] > 0 && w != source && pred[w] == usize::MAX {
                    pred[w] = a;
                    if w == sink {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if !reached {
            break;
        }
        let mut v = sink;
        while v != source {
            let a = pred[v];
            net.cap[a] -= 1;
            net.cap[a ^ 1] += 1;
            v = net.head[a ^ 1];
        }
        value += 1;
    }

    // Source side of the minimum cut: residual reachability.
    let mut reach = vec![false; n + 2];
    reach[source] = true;
    let mut stack = vec![source];
    while let Some(u) = stack.pop() {
        for &a in &net.adj[u] {
            let w = net.head[a];
            if net.cap[a] > 0 && !reach[w] {
                reach[w] = true;
                stack.push(w);
            }
        }
    }
    let min_cut: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| reach[u] != reach[v])
        .collect();

    // Net flow per undirected edge: +1 means u -> v, -1 means v -> u.
    let mut out_flow: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let a = edge_arc[e];
        match net.cap[a ^ 1] as i64 - net.cap[a] as i64 {
            2 => out_flow[u].push(v),
            -2 => out_flow[v].push(u),
            _ => {}
        }
    }
    let mut leaving = vec![0u64; n];
    let mut arriving = vec![0u64; n];
    for v in 0..n {
        let a = terminal_arc[v];
        if a == usize::MAX {
            continue;
        }
        let used = big - net.cap[a];
        if side[v] == 1 {
            leaving[v] = used;
        } else {
            arriving[v] = used;
        }
    }
    let paths = decompose(n, &side, &mut out_flow, &mut leaving, &mut arriving, value);

    Ok(FlowResult {
        value,
        min_cut,
        paths,
    })
}

/// Peels `count` unit paths off the flow, shortest first (BFS from every
/// `a1` vertex with remaining outflow).
fn decompose(
    n: usize,
    side: &[u8],
    out_flow: &mut [Vec<usize>],
    leaving: &mut [u64],
    arriving: &mut [u64],
    count: usize,
) -> Vec<Vec<usize>> {
    let mut paths = Vec::with_capacity(count);
    let mut pred = vec![usize::MAX; n];
    for _ in 0..count {
        pred.iter_mut().for_each(|p| *p = usize::MAX);
        let mut queue: VecDeque<usize> = VecDeque::new();
        for v in 0..n {
            if leaving[v] > 0 {
                pred[v] = v;
                queue.push_back(v);
            }
        }
        let mut end = None;
        while let Some(u) = queue.pop_front() {
            if arriving[u] > 0 {
                end = Some(u);
                break;
            }
            for &w in &out_flow[u] {
                if pred[w] == usize::MAX {
                    pred[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let Some(end) = end else { break };
        let mut path = vec![end];
        let mut v = end;
        while pred[v] != v {
            v = pred[v];
            path.push(v);
        }
        path.reverse();
        leaving[path[0]] -= 1;
        arriving[end] -= 1;
        for w in path.windows(2) {
            let row = &mut out_flow[w[0]];
            let pos = row.iter().position(|&x| x == w[1]).unwrap();
            row.swap_remove(pos);
        }
        // Keep only the segment from the last a1 vertex to the first a2 vertex after it.
        let start = path.iter().rposition(|&v| side[v] == 1).unwrap();
        let stop = start + path[start..].iter().position(|&v| side[v] == 2).unwrap();
        paths.push(path[start..=stop].to_vec());
    }
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    paths
}
