//! Finite simple undirected graphs with a declared degree bound, plus the
//! shared edge-list text format.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Finite simple undirected graph on vertices `0..n`.
///
/// Adjacency is stored in CSR form with neighbors sorted ascending. Every
/// adjacency entry also carries the index of its edge in [`Graph::edges`], which
/// is sorted lexicographically over pairs `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    edge_ids: Vec<usize>,
    edges: Vec<(usize, usize)>,
    delta_bound: usize,
}

impl Graph {
    /// Builds a graph from an edge list. With `delta_bound = None` the bound is
    /// the observed maximum degree (at least 1).
    pub fn from_edges<I>(n: usize, edges: I, delta_bound: Option<usize>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &list {
            degree[u] += 1;
            degree[v] += 1;
        }
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        let delta_bound = match delta_bound {
            Some(bound) => {
                if let Some(vertex) = (0..n).find(|&v| degree[v] > bound) {
                    return Err(Error::DegreeBound {
                        vertex,
                        degree: degree[vertex],
                        bound,
                    });
                }
                bound
            }
            None => max_degree.max(1),
        };

        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        let mut edge_ids = vec![0usize; offsets[n]];
        // Edges are sorted, so each vertex receives its neighbors in ascending order:
        // smaller neighbors arrive as the second endpoint of earlier edges.
        for (id, &(u, v)) in list.iter().enumerate() {
            targets[fill[u]] = v;
            edge_ids[fill[u]] = id;
            fill[u] += 1;
            targets[fill[v]] = u;
            edge_ids[fill[v]] = id;
            fill[v] += 1;
        }
        Ok(Graph {
            n,
            offsets,
            targets,
            edge_ids,
            edges: list,
            delta_bound,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn delta_bound(&self) -> usize {
        self.delta_bound
    }

    /// Edges `(u, v)` with `u < v`, sorted; the position is the edge index.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbors of `v` paired with the index of the connecting edge.
    #[inline]
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.edge_ids[range].iter().copied())
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Returns a copy with a different declared degree bound.
    pub fn with_delta_bound(&self, bound: usize) -> Result<Self> {
        Graph::from_edges(self.n, self.edges.iter().copied(), Some(bound))
    }

    /// BFS distances from `source`, `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Component label per vertex, labels assigned in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().iter().all(|&c| c == 0)
    }

    /// Parses the edge-list text format.
    ///
    /// One `u v` pair per line; `#` starts a comment line; an optional first
    /// `n <count>` line fixes the vertex count, otherwise it is `max id + 1`.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared_n = None;
        let mut seen_edge = false;
        let mut edges = Vec::new();
        let mut lines_of = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            if fields[0] == "n" {
                if seen_edge || declared_n.is_some() {
                    return Err(parse_err("header must precede all edges".into()));
                }
                if fields.len() != 2 {
                    return Err(parse_err("expected `n <count>`".into()));
                }
                declared_n = Some(parse_id(fields[1]).map_err(parse_err)?);
                continue;
            }
            if fields.len() != 2 {
                return Err(parse_err(format!("expected two vertex ids, got `{line}`")));
            }
            let u = parse_id(fields[0]).map_err(parse_err)?;
            let v = parse_id(fields[1]).map_err(parse_err)?;
            if u == v {
                return Err(parse_err(format!("self-loop at vertex {u}")));
            }
            seen_edge = true;
            edges.push((u.min(v), u.max(v)));
            lines_of.push(line_no);
        }

        let max_id = edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
        let n = match declared_n {
            Some(n) if n < max_id => {
                let line = edges
                    .iter()
                    .zip(&lines_of)
                    .find(|((_, v), _)| *v >= n)
                    .map(|(_, &l)| l)
                    .unwrap_or(0);
                return Err(Error::Parse {
                    line,
                    message: format!("vertex id exceeds declared n = {n}"),
                });
            }
            Some(n) => n,
            None => max_id,
        };

        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| (edges[i], lines_of[i]));
        for w in order.windows(2) {
            if edges[w[0]] == edges[w[1]] {
                let (u, v) = edges[w[1]];
                return Err(Error::Parse {
                    line: lines_of[w[1]],
                    message: format!("duplicate edge {u}-{v}"),
                });
            }
        }
        Graph::from_edges(n, edges, None)
    }

    /// Serializes to the edge-list format. The `n` header is written only when
    /// trailing isolated vertices would otherwise be lost.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let implied = self.edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
        if implied != self.n {
            writeln!(out, "n {}", self.n).unwrap();
        }
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

const MAX_ID: u64 = u32::MAX as u64;

fn parse_id(token: &str) -> std::result::Result<usize, String> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{token}` is not a decimal vertex id"));
    }
    match token.parse::<u64>() {
        Ok(x) if x <= MAX_ID => Ok(x as usize),
        _ => Err(format!("vertex id `{token}` overflows")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)), None).unwrap()
    }

    #[test]
    fn csr_rows_sorted_and_symmetric() {
        let g = Graph::from_edges(5, [(4, 0), (2, 0), (1, 0), (3, 2), (1, 4)], None).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 4]);
        assert_eq!(g.neighbors(4), &[0, 1]);
        for u in 0..5 {
            for (v, e) in g.incident(u) {
                assert!(g.neighbors(v).contains(&u));
                let (a, b) = g.edges()[e];
                assert_eq!((a, b), (u.min(v), u.max(v)));
            }
        }
        assert_eq!(g.delta_bound(), 3);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::from_edges(3, [(1, 1)], None),
            Err(Error::SelfLoop(1))
        );
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)], None),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)], None),
            Err(Error::VertexOutOfRange { vertex: 3, .. })
        ));
        assert!(matches!(
            Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)], Some(2)),
            Err(Error::DegreeBound { vertex: 0, .. })
        ));
    }

    #[test]
    fn parse_path() {
        let g = Graph::parse_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn parse_header_and_comments() {
        let g = Graph::parse_edge_list("# comment\nn 4\n0 1\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(2), 0);
        assert_eq!(g.degree(3), 0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Graph::parse_edge_list("0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = Graph::parse_edge_list("0 1\n# x\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Graph::parse_edge_list("0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Graph::parse_edge_list("0 99999999999\n").unwrap_err();
        assert!(err.to_string().contains("overflow"), "{err}");
        let err = Graph::parse_edge_list("n 2\n0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Graph::parse_edge_list("0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn edge_list_round_trip_keeps_isolated_vertices() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3)], None).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("n 6\n"));
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
        assert_eq!(cycle(3).to_edge_list(), "0 1\n0 2\n1 2\n");
    }

    #[test]
    fn distances_and_components() {
        let g = cycle(6);
        let d = g.distances_from(0);
        assert_eq!(d[3], Some(3));
        assert!(g.is_connected());
        let h = Graph::from_edges(4, [(0, 1)], None).unwrap();
        assert_eq!(h.components(), vec![0, 0, 1, 2]);
        assert!(!h.is_connected());
    }
}
