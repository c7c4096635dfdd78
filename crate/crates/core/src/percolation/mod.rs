//! Bernoulli bond percolation on finite graphs.
//!
//! Edge `e` of trial `t` is open iff `U(seed, t, e) < p`, where `U` is the
//! keyed uniform from [`crate::rng`]. The uniforms do not depend on `p`, so for
//! a fixed trial the open set grows monotonically with `p` and every scan is a
//! monotone coupling.

mod oracle;
mod union_find;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

pub use oracle::{sprinkle_base, sprinkle_combined, tree_critical_probability, tree_survival_oracle};
pub use union_find::UnionFind;

use crate::ball::ball_vertices;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::keyed_uniform;
use oracle::check_probability;

/// z-score of the two-sided 95% normal interval.
pub const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercConfig {
    pub p: f64,
    pub seed: u64,
    pub trials: usize,
}

impl PercConfig {
    pub fn new(p: f64, seed: u64, trials: usize) -> Self {
        Self { p, seed, trials }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        Ok(())
    }
}

#[inline]
fn is_open(seed: u64, trial: usize, edge: usize, p: f64) -> bool {
    keyed_uniform(seed, trial as u64, edge as u64) < p
}

/// Bitmask over a graph's edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenEdges {
    words: Vec<u64>,
    len: usize,
}

impl OpenEdges {
    fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, e: usize) {
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.len && self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Edge `e` is bit `e % 8` (LSB first) of byte `e / 8`, bytes as lowercase hex.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.len.div_ceil(8) * 2);
        for byte in 0..self.len.div_ceil(8) {
            let b = (self.words[byte / 8] >> (8 * (byte % 8))) as u8;
            write!(s, "{b:02x}").unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PercolationSample {
    pub open_edges: OpenEdges,
    pub largest_component: usize,
    /// Component size → number of components of that size.
    pub component_histogram: BTreeMap<usize, usize>,
}

/// One Bernoulli(p) configuration, reproducible from `(g, cfg, trial)`.
pub fn percolate(g: &Graph, cfg: &PercConfig, trial: usize) -> Result<PercolationSample> {
    cfg.validate()?;
    if trial >= cfg.trials {
        return Err(Error::InvalidArgument(format!(
            "trial index {trial} out of range for {} trials",
            cfg.trials
        )));
    }
    let mut open = OpenEdges::new(g.edge_count());
    let mut uf = UnionFind::new(g.n());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if is_open(cfg.seed, trial, e, cfg.p) {
            open.set(e);
            uf.union(u, v);
        }
    }
    let mut histogram = BTreeMap::new();
    for size in uf.component_sizes() {
        *histogram.entry(size).or_insert(0) += 1;
    }
    Ok(PercolationSample {
        open_edges: open,
        largest_component: uf.largest(),
        component_histogram: histogram,
    })
}

fn largest_component(g: &Graph, cfg: &PercConfig, trial: usize) -> usize {
    let mut uf = UnionFind::new(g.n());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if is_open(cfg.seed, trial, e, cfg.p) {
            uf.union(u, v);
        }
    }
    uf.largest()
}

/// Binomial proportion with a 95% normal-approximation interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let estimate = successes as f64 / trials as f64;
        let half_width = Z95 * (estimate * (1.0 - estimate) / trials as f64).sqrt();
        Self {
            successes,
            trials,
            estimate,
            half_width,
        }
    }

    pub fn ci_low(&self) -> f64 {
        (self.estimate - self.half_width).max(0.0)
    }

    pub fn ci_high(&self) -> f64 {
        (self.estimate + self.half_width).min(1.0)
    }

    /// Binomial standard error at the estimate.
    pub fn std_error(&self) -> f64 {
        self.half_width / Z95
    }
}

/// Smallest component size counted as "at least alpha·n".
pub fn giant_threshold(n: usize, alpha: f64) -> usize {
    ((alpha * n as f64) - 1e-9).ceil().max(0.0) as usize
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

/// Fraction of trials whose largest open component has at least `alpha·n`
/// vertices.
pub fn giant_probability(g: &Graph, cfg: &PercConfig, alpha: f64) -> Result<Estimate> {
    cfg.validate()?;
    check_alpha(alpha)?;
    let threshold = giant_threshold(g.n(), alpha);
    let hits: u64 = (0..cfg.trials)
        .into_par_iter()
        .map(|t| u64::from(largest_component(g, cfg, t) >= threshold))
        .sum();
    Ok(Estimate::from_counts(hits, cfg.trials as u64))
}

/// The ball `B_g(o, R)` with global edge ids, for trial-by-trial exploration.
struct LocalBall {
    dist: Vec<usize>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl LocalBall {
    fn new(g: &Graph, o: usize, radius: usize) -> Result<Self> {
        let members = ball_vertices(g, o, radius)?;
        let local: HashMap<usize, usize> = members
            .iter()
            .enumerate()
            .map(|(i, &(v, _))| (v, i))
            .collect();
        let adj = members
            .iter()
            .map(|&(v, _)| {
                g.incident(v)
                    .filter_map(|(w, e)| local.get(&w).map(|&j| (j, e)))
                    .collect()
            })
            .collect();
        Ok(Self {
            dist: members.into_iter().map(|(_, d)| d).collect(),
            adj,
        })
    }

    /// Open-path BFS from the root (local 0). With `max_steps`, only paths of
    /// at most that many edges count. Returns (reached count, reached the sphere).
    fn explore(&self, seed: u64, trial: usize, p: f64, max_steps: Option<usize>, sphere: usize) -> (usize, bool) {
        let k = self.adj.len();
        let mut depth = vec![usize::MAX; k];
        depth[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        let mut touched_sphere = self.dist[0] == sphere;
        while let Some(u) = queue.pop_front() {
            if max_steps.is_some_and(|m| depth[u] >= m) {
                continue;
            }
            for &(w, e) in &self.adj[u] {
                if depth[w] == usize::MAX && is_open(seed, trial, e, p) {
                    depth[w] = depth[u] + 1;
                    reached += 1;
                    touched_sphere |= self.dist[w] == sphere;
                    queue.push_back(w);
                }
            }
        }
        (reached, touched_sphere)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalEstimate {
    pub radius: usize,
    pub p: f64,
    pub point_estimate: f64,
    pub trials: usize,
    pub half_width: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Probability that an open path inside `B_g(o, R)` joins `o` to the sphere
/// of vertices at distance exactly `R`. Only the ball's edges are sampled.
pub fn ball_survival(g: &Graph, o: usize, radius: usize, cfg: &PercConfig) -> Result<SurvivalEstimate> {
    cfg.validate()?;
    if radius == 0 {
        return Err(Error::InvalidArgument("survival radius must be at least 1".into()));
    }
    let ball = LocalBall::new(g, o, radius)?;
    let hits: u64 = (0..cfg.trials)
        .into_par_iter()
        .map(|t| u64::from(ball.explore(cfg.seed, t, cfg.p, None, radius).1))
        .sum();
    let est = Estimate::from_counts(hits, cfg.trials as u64);
    Ok(SurvivalEstimate {
        radius,
        p: cfg.p,
        point_estimate: est.estimate,
        trials: cfg.trials,
        half_width: est.half_width,
        ci_low: est.ci_low(),
        ci_high: est.ci_high(),
    })
}

/// Empirical law of `|B'_p(o, R)|`, the number of vertices joined to `o` by an
/// open path of at most `R` edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachDistribution {
    pub radius: usize,
    pub p: f64,
    pub trials: usize,
    /// Size → number of trials.
    pub counts: BTreeMap<usize, u64>,
    /// `P(|B'| >= R)`.
    pub at_least_radius: Estimate,
}

impl ReachDistribution {
    pub fn probability(&self, size: usize) -> f64 {
        self.counts.get(&size).copied().unwrap_or(0) as f64 / self.trials as f64
    }
}

pub fn reach_set_size(g: &Graph, o: usize, radius: usize, cfg: &PercConfig) -> Result<ReachDistribution> {
    cfg.validate()?;
    if radius == 0 {
        return Err(Error::InvalidArgument("reach radius must be at least 1".into()));
    }
    let ball = LocalBall::new(g, o, radius)?;
    let sizes: Vec<usize> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| ball.explore(cfg.seed, t, cfg.p, Some(radius), radius).0)
        .collect();
    let mut counts = BTreeMap::new();
    for &s in &sizes {
        *counts.entry(s).or_insert(0u64) += 1;
    }
    let big = sizes.iter().filter(|&&s| s >= radius).count() as u64;
    Ok(ReachDistribution {
        radius,
        p: cfg.p,
        trials: cfg.trials,
        counts,
        at_least_radius: Estimate::from_counts(big, cfg.trials as u64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: f64,
    pub alpha: f64,
    pub prob: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
}

pub const SCAN_CSV_HEADER: &str = "p,alpha,prob,ci_low,ci_high,trials,seed";

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(SCAN_CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.p, r.alpha, r.prob, r.ci_low, r.ci_high, r.trials, r.seed
            )
            .unwrap();
        }
        s
    }

    pub fn prob_at(&self, p: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.p == p).map(|r| r.prob)
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    for &p in grid {
        check_probability(p)?;
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("p grid must be sorted ascending".into()));
    }
    Ok(())
}

/// Largest open component for every `(trial, p)` pair. Edges of a trial are
/// added in order of their uniforms, so each row is non-decreasing in `p`.
pub fn scan_largest_components(g: &Graph, grid: &[f64], seed: u64, trials: usize) -> Result<Vec<Vec<usize>>> {
    check_grid(grid)?;
    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let mut order: Vec<(f64, usize)> = (0..g.edge_count())
                .map(|e| (keyed_uniform(seed, t as u64, e as u64), e))
                .collect();
            order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut uf = UnionFind::new(g.n());
            let mut next = 0;
            grid.iter()
                .map(|&p| {
                    while next < order.len() && order[next].0 < p {
                        let (u, v) = g.edges()[order[next].1];
                        uf.union(u, v);
                        next += 1;
                    }
                    uf.largest()
                })
                .collect()
        })
        .collect())
}

/// Giant-component probability at each grid point, trials shared across `p`.
pub fn threshold_scan(g: &Graph, grid: &[f64], alpha: f64, seed: u64, trials: usize) -> Result<ScanTable> {
    check_alpha(alpha)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let largest = scan_largest_components(g, grid, seed, trials)?;
    let threshold = giant_threshold(g.n(), alpha);
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let hits = largest.iter().filter(|row| row[i] >= threshold).count() as u64;
            let est = Estimate::from_counts(hits, trials as u64);
            ScanRow {
                p,
                alpha,
                prob: est.estimate,
                ci_low: est.ci_low(),
                ci_high: est.ci_high(),
                trials,
                seed,
            }
        })
        .collect();
    Ok(ScanTable { rows })
}
