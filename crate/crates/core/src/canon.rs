//! Canonical certificates for connected rooted graphs.
//!
//! Two stages:
//!
//! 1. Pendant trees are peeled off (repeatedly removing non-root vertices of
//!    degree one) and summarized by their AHU parenthesis codes. Each surviving
//!    vertex is labelled with the code of the forest hanging from it.
//! 2. If only the root survives, the ball is a tree and the root's code is the
//!    certificate. Otherwise the labelled core is canonized exactly by colour
//!    refinement plus individualization, keeping the lexicographically smallest
//!    adjacency encoding over all leaves of the search tree. Automorphisms found
//!    at equal leaves prune sibling branches in the same orbit.
//!
//! The certificate is a byte string: equal certificates iff a root-preserving
//! isomorphism exists. It never depends on vertex numbering, hashing or
//! platform.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::Graph;

/// Default cap on the number of vertices a ball may have before
/// canonicalization is refused.
pub const DEFAULT_CANON_CAP: usize = 10_000;

const TAG_TREE: u8 = 0x01;
const TAG_CORE: u8 = 0x02;
const OPEN: u8 = b'(';
const CLOSE: u8 = b')';

/// Canonical form of a rooted graph, ordered bytewise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        let mut s = String::with_capacity(self.0.len() * 2);
        for &b in &self.0 {
            s.push(DIGITS[(b >> 4) as usize] as char);
            s.push(DIGITS[(b & 0xf) as usize] as char);
        }
        s
    }

    pub fn from_hex(hex: &str) -> Option<Self> {
        if !hex.len().is_multiple_of(2) {
            return None;
        }
        let digit = |c: u8| match c {
            b'0'..=b'9' => Some(c - b'0'),
            b'a'..=b'f' => Some(c - b'a' + 10),
            _ => None,
        };
        hex.as_bytes()
            .chunks(2)
            .map(|pair| Some(digit(pair[0])? << 4 | digit(pair[1])?))
            .collect::<Option<Vec<u8>>>()
            .map(Certificate)
    }

    /// True if the certified rooted graph is a tree.
    pub fn is_tree(&self) -> bool {
        self.0.first() == Some(&TAG_TREE)
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Certificate({})", self.to_hex())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Certificate::from_hex(&s)
            .ok_or_else(|| serde::de::Error::custom("certificate must be lowercase hex"))
    }
}

/// Certificate of the rooted graph `(g, root)`. Every vertex of `g` must be
/// reachable from `root`.
pub fn certify(g: &Graph, root: usize) -> Certificate {
    let n = g.n();
    debug_assert!(root < n);

    // Stage 1: peel pendant trees.
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut hanging: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| v != root && degree[v] == 1).collect();
    while let Some(v) = queue.pop() {
        removed[v] = true;
        let code = tree_code(std::mem::take(&mut hanging[v]));
        let parent = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| !removed[w])
            .expect("pendant vertex keeps one live neighbor in a connected graph");
        hanging[parent].push(code);
        degree[parent] -= 1;
        if parent != root && degree[parent] == 1 {
            queue.push(parent);
        }
    }

    let core: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    if core.len() == 1 {
        let mut bytes = vec![TAG_TREE];
        bytes.extend(tree_code(std::mem::take(&mut hanging[root])));
        return Certificate(bytes);
    }

    // Stage 2: canonize the labelled core.
    let mut local = vec![usize::MAX; n];
    for (i, &v) in core.iter().enumerate() {
        local[v] = i;
    }
    let adj: Vec<Vec<usize>> = core
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| !removed[w])
                .map(|&w| local[w])
                .collect()
        })
        .collect();
    let labels: Vec<Vec<u8>> = core
        .iter()
        .map(|&v| tree_code(std::mem::take(&mut hanging[v])))
        .collect();
    let root_local = local[root];

    let keys: Vec<(bool, &[u8])> = (0..core.len())
        .map(|i| (i != root_local, labels[i].as_slice()))
        .collect();
    let initial = rank(&keys);

    let mut search = Search::new(&adj);
    let start = refine(&adj, initial);
    search.explore(start, &mut Vec::new());
    let (encoding, order) = search.best.expect("search visits at least one leaf");

    let k = core.len();
    let mut bytes = vec![TAG_CORE];
    bytes.extend((k as u32).to_le_bytes());
    for &v in &order {
        bytes.extend((labels[v].len() as u32).to_le_bytes());
        bytes.extend(&labels[v]);
    }
    bytes.extend(encoding);
    Certificate(bytes)
}

fn tree_code(mut children: Vec<Vec<u8>>) -> Vec<u8> {
    children.sort_unstable();
    let len = 2 + children.iter().map(Vec::len).sum::<usize>();
    let mut code = Vec::with_capacity(len);
    code.push(OPEN);
    for c in children {
        code.extend(c);
    }
    code.push(CLOSE);
    code
}

/// Dense ranks of `keys` (equal keys share a rank, order preserved).
fn rank<K: Ord>(keys: &[K]) -> Vec<u32> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut out = vec![0u32; keys.len()];
    let mut r = 0u32;
    for w in 0..idx.len() {
        if w > 0 && keys[idx[w]] != keys[idx[w - 1]] {
            r += 1;
        }
        out[idx[w]] = r;
    }
    out
}

fn cell_count(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// 1-dimensional Weisfeiler-Leman refinement to the coarsest equitable
/// partition. New colours sort first by old colour, so refinement never
/// reorders existing cells.
fn refine(adj: &[Vec<usize>], mut colors: Vec<u32>) -> Vec<u32> {
    let mut cells = cell_count(&colors);
    loop {
        if cells == colors.len() {
            return colors;
        }
        let sigs: Vec<(u32, Vec<u32>)> = (0..adj.len())
            .map(|v| {
                let mut nb: Vec<u32> = adj[v].iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let next_cells = cell_count(&next);
        if next_cells == cells {
            return colors;
        }
        colors = next;
        cells = next_cells;
    }
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let keys: Vec<(u32, bool)> = colors
        .iter()
        .enumerate()
        .map(|(w, &c)| (c, w != v))
        .collect();
    rank(&keys)
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        Self {
            adj,
            best: None,
            automorphisms: Vec::new(),
        }
    }

    fn explore(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let k = colors.len();
        if cell_count(&colors) == k {
            self.leaf(&colors);
            return;
        }
        // Target cell: the non-singleton cell with the smallest colour.
        let mut size = vec![0usize; k];
        for &c in &colors {
            size[c as usize] += 1;
        }
        let target = (0..k).find(|&c| size[c] > 1).unwrap() as u32;
        let cell: Vec<usize> = (0..k).filter(|&v| colors[v] == target).collect();

        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if !tried.is_empty() {
                let orbits = self.orbits_fixing(prefix);
                if tried.iter().any(|&w| orbits.same(w, v)) {
                    continue;
                }
            }
            tried.push(v);
            prefix.push(v);
            let next = refine(self.adj, individualize(&colors, v));
            self.explore(next, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, colors: &[u32]) {
        let k = colors.len();
        let mut order = vec![0usize; k];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let encoding = encode(self.adj, colors);
        match &self.best {
            None => self.best = Some((encoding, order)),
            Some((best, best_order)) => match encoding.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((encoding, order)),
                std::cmp::Ordering::Equal => {
                    let mut gamma = vec![0usize; k];
                    for i in 0..k {
                        gamma[best_order[i]] = order[i];
                    }
                    if gamma.iter().enumerate().any(|(i, &g)| i != g) {
                        self.automorphisms.push(gamma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Orbits of the group generated by known automorphisms that fix every
    /// vertex of `prefix`.
    fn orbits_fixing(&self, prefix: &[usize]) -> Orbits {
        let k = self.adj.len();
        let mut orbits = Orbits::new(k);
        for gamma in &self.automorphisms {
            if prefix.iter().all(|&p| gamma[p] == p) {
                for (v, &w) in gamma.iter().enumerate() {
                    orbits.union(v, w);
                }
            }
        }
        orbits
    }
}

/// Upper-triangle adjacency bits in colour order, packed MSB first.
fn encode(adj: &[Vec<usize>], colors: &[u32]) -> Vec<u8> {
    let k = adj.len();
    let bits = k * (k - 1) / 2;
    let mut out = vec![0u8; bits.div_ceil(8)];
    // Bit index of pair (i, j), i < j, in row-major upper-triangle order.
    let index = |i: usize, j: usize| i * (2 * k - i - 1) / 2 + (j - i - 1);
    for (v, nbrs) in adj.iter().enumerate() {
        let i = colors[v] as usize;
        for &w in nbrs {
            let j = colors[w] as usize;
            if i < j {
                let b = index(i, j);
                out[b / 8] |= 0x80 >> (b % 8);
            }
        }
    }
    out
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(k: usize) -> Self {
        Self {
            parent: (0..k).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn same(&self, a: usize, b: usize) -> bool {
        let find = |mut v: usize| {
            while self.parent[v] != v {
                v = self.parent[v];
            }
            v
        };
        find(a) == find(b)
    }
}
