//! Empirical local weak limits: laws of the radius-`R` ball around a uniform
//! root, total-variation distance between them, and vertex classes.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{ball_vertices, extract_ball, RootedBall};
use crate::canon::Certificate;
use crate::error::{Error, Result};
use crate::expansion::{constant_k, edge_disjoint_paths};
use crate::graph::Graph;
use crate::rng::SplitMix64;

/// Counts of ball classes at a fixed radius. `counts` sums to `total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallDistribution {
    pub radius: usize,
    pub total: u64,
    pub counts: BTreeMap<Certificate, u64>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    cert_hex: String,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    radius: usize,
    total: u64,
    entries: Vec<Entry>,
}

impl BallDistribution {
    pub fn from_certificates<I: IntoIterator<Item = Certificate>>(radius: usize, certs: I) -> Self {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for c in certs {
            *counts.entry(c).or_insert(0) += 1;
            total += 1;
        }
        Self { radius, total, counts }
    }

    /// All mass on one class.
    pub fn point_mass(radius: usize, cert: Certificate) -> Self {
        Self {
            radius,
            total: 1,
            counts: BTreeMap::from([(cert, 1)]),
        }
    }

    pub fn probability(&self, cert: &Certificate) -> f64 {
        self.counts.get(cert).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// Most frequent class and its mass; ties go to the smaller certificate.
    pub fn dominant(&self) -> Option<(&Certificate, f64)> {
        let mut best: Option<(&Certificate, u64)> = None;
        for (c, &k) in &self.counts {
            if best.is_none_or(|(_, b)| k > b) {
                best = Some((c, k));
            }
        }
        best.map(|(c, k)| (c, k as f64 / self.total as f64))
    }

    pub fn to_json(&self) -> String {
        let wire = Wire {
            radius: self.radius,
            total: self.total,
            entries: self
                .counts
                .iter()
                .map(|(c, &count)| Entry {
                    cert_hex: c.to_hex(),
                    count,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("distribution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: Wire = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("ball distribution JSON: {e}")))?;
        let mut counts = BTreeMap::new();
        for e in wire.entries {
            let cert = Certificate::from_hex(&e.cert_hex)
                .ok_or_else(|| Error::InvalidArgument(format!("bad certificate hex {:?}", e.cert_hex)))?;
            if counts.insert(cert, e.count).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate certificate {}", e.cert_hex)));
            }
        }
        let sum: u64 = counts.values().sum();
        if sum != wire.total || sum == 0 {
            return Err(Error::InvalidArgument(format!(
                "entry counts sum to {sum}, total says {}",
                wire.total
            )));
        }
        Ok(Self {
            radius: wire.radius,
            total: wire.total,
            counts,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// One ball per vertex.
    Exhaustive,
    /// `k` roots drawn uniformly with replacement.
    Sampled { k: usize, seed: u64 },
}

pub fn ball_distribution(g: &Graph, radius: usize, mode: SampleMode) -> Result<BallDistribution> {
    if g.n() == 0 {
        return Err(Error::InvalidArgument("graph has no vertices".into()));
    }
    let roots: Vec<usize> = match mode {
        SampleMode::Exhaustive => (0..g.n()).collect(),
        SampleMode::Sampled { k, seed } => {
            if k == 0 {
                return Err(Error::InvalidArgument("sample size must be positive".into()));
            }
            let mut rng = SplitMix64::new(seed);
            (0..k).map(|_| rng.next_below(g.n() as u64) as usize).collect()
        }
    };
    let certs: Vec<Certificate> = roots
        .into_par_iter()
        .map(|v| extract_ball(g, v, radius).map(|b| b.certificate().clone()))
        .collect::<Result<_>>()?;
    Ok(BallDistribution::from_certificates(radius, certs))
}

/// Half the L1 distance between the two class laws.
pub fn tv_distance(d1: &BallDistribution, d2: &BallDistribution) -> Result<f64> {
    if d1.radius != d2.radius {
        return Err(Error::RadiusMismatch(d1.radius, d2.radius));
    }
    if d1.total == 0 || d2.total == 0 {
        return Err(Error::InvalidArgument("empty distribution".into()));
    }
    let mut sum = 0.0;
    for c in d1.counts.keys() {
        sum += (d1.probability(c) - d2.probability(c)).abs();
    }
    for c in d2.counts.keys() {
        if !d1.counts.contains_key(c) {
            sum += d2.probability(c);
        }
    }
    Ok((sum / 2.0).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub tv_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub radius: usize,
    pub reference: BallDistribution,
    pub rows: Vec<ConvergenceRow>,
}

/// Exhaustive radius-`R` law of each graph against `reference`, in input order.
pub fn convergence_report(graphs: &[Graph], radius: usize, reference: &BallDistribution) -> Result<ConvergenceReport> {
    if reference.radius != radius {
        return Err(Error::RadiusMismatch(reference.radius, radius));
    }
    let rows = graphs
        .iter()
        .map(|g| {
            let d = ball_distribution(g, radius, SampleMode::Exhaustive)?;
            Ok(ConvergenceRow {
                n: g.n(),
                tv_distance: tv_distance(&d, reference)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceReport {
        radius,
        reference: reference.clone(),
        rows,
    })
}

/// Vertices `v` with `B_g(v, R) ≅ target`, ascending.
pub fn class_members(g: &Graph, target: &RootedBall) -> Result<Vec<usize>> {
    let r = target.radius();
    let hits: Vec<Option<usize>> = (0..g.n())
        .into_par_iter()
        .map(|v| extract_ball(g, v, r).map(|b| (b.certificate() == target.certificate()).then_some(v)))
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

pub fn class_count(g: &Graph, target: &RootedBall) -> Result<usize> {
    class_members(g, target).map(|m| m.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFlowOutcome {
    /// The two targets are the same class; there is nothing to separate.
    SameClass,
    /// A class holds fewer than `n·p0/4` vertices.
    HypothesisFailure,
    Completed,
}

/// The containment step along one short path from `v1 ∈ A1` to `v2 ∈ A2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearbyBall {
    pub v1: usize,
    pub v2: usize,
    pub path_length: usize,
    /// `B(v2, R) ⊆ B(v1, R + K)` as vertex sets.
    pub contained: bool,
    /// The radius-`R` ball of `v2` read inside `B(v1, R + K)` is isomorphic to
    /// the target class of `v2`.
    pub isomorphic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFlowReport {
    pub outcome: ClassFlowOutcome,
    pub radius: usize,
    pub n: usize,
    pub a1_size: usize,
    pub a2_size: usize,
    /// `n·p0/4`.
    pub required_class_size: f64,
    pub k: f64,
    pub flow_value: Option<usize>,
    pub min_cut_size: Option<usize>,
    pub short_paths: Option<usize>,
    pub path_lengths: Vec<usize>,
    /// `None` when no path has length at most `K`.
    pub nearby: Option<NearbyBall>,
}

/// Runs the class-separation chain: classes `A1`, `A2` of the two targets,
/// their edge-disjoint path count `L`, the short paths among them, and the
/// nearby-ball containment along the shortest one.
pub fn disjoint_class_flow(g: &Graph, t1: &RootedBall, t2: &RootedBall, c: f64, p0: f64) -> Result<ClassFlowReport> {
    if t1.radius() != t2.radius() {
        return Err(Error::RadiusMismatch(t1.radius(), t2.radius()));
    }
    let radius = t1.radius();
    let k = constant_k(g.delta_bound(), c, p0)?;
    let required = g.n() as f64 * p0 / 4.0;
    let mut report = ClassFlowReport {
        outcome: ClassFlowOutcome::SameClass,
        radius,
        n: g.n(),
        a1_size: 0,
        a2_size: 0,
        required_class_size: required,
        k,
        flow_value: None,
        min_cut_size: None,
        short_paths: None,
        path_lengths: Vec::new(),
        nearby: None,
    };
    let a1 = class_members(g, t1)?;
    report.a1_size = a1.len();
    if t1.certificate() == t2.certificate() {
        report.a2_size = a1.len();
        return Ok(report);
    }
    let a2 = class_members(g, t2)?;
    report.a2_size = a2.len();
    if (a1.len() as f64) < required || (a2.len() as f64) < required || a1.is_empty() || a2.is_empty() {
        report.outcome = ClassFlowOutcome::HypothesisFailure;
        return Ok(report);
    }

    let flow = edge_disjoint_paths(g, &a1, &a2)?;
    let lengths = flow.path_lengths();
    report.outcome = ClassFlowOutcome::Completed;
    report.flow_value = Some(flow.value);
    report.min_cut_size = Some(flow.min_cut.len());
    report.short_paths = Some(lengths.iter().filter(|&&l| l as f64 <= k).count());
    report.path_lengths = lengths;
    // Paths are sorted by length, so the first one is the shortest.
    if let Some(path) = flow.paths.first().filter(|p| (p.len() - 1) as f64 <= k) {
        let (v1, v2) = (path[0], *path.last().unwrap());
        report.nearby = Some(nearby_ball(g, v1, v2, path.len() - 1, radius, k.floor() as usize, t2)?);
    }
    Ok(report)
}

fn nearby_ball(
    g: &Graph,
    v1: usize,
    v2: usize,
    path_length: usize,
    radius: usize,
    k: usize,
    t2: &RootedBall,
) -> Result<NearbyBall> {
    let outer = ball_vertices(g, v1, radius + k)?;
    let local: HashMap<usize, usize> = outer.iter().enumerate().map(|(i, &(v, _))| (v, i)).collect();
    let contained = ball_vertices(g, v2, radius)?
        .iter()
        .all(|(v, _)| local.contains_key(v));
    let edges = g
        .edges()
        .iter()
        .filter_map(|&(u, v)| Some((*local.get(&u)?, *local.get(&v)?)));
    let induced = Graph::from_edges(outer.len(), edges, Some(g.delta_bound()))?;
    let inner = extract_ball(&induced, local[&v2], radius)?;
    Ok(NearbyBall {
        v1,
        v2,
        path_length,
        contained,
        isomorphic: inner.certificate() == t2.certificate(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, GenSpec};

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)), None).unwrap()
    }

    fn z_ball(r: usize) -> RootedBall {
        extract_ball(&cycle(2 * r + 3), 0, r).unwrap()
    }

    #[test]
    fn distribution_examples() {
        let d = ball_distribution(&cycle(6), 1, SampleMode::Exhaustive).unwrap();
        assert_eq!(d.total, 6);
        assert_eq!(d.counts.len(), 1);
        assert_eq!(d.counts.values().next(), Some(&6));

        let k4 = generate(&GenSpec::new(Family::Complete, 4)).unwrap();
        let d = ball_distribution(&k4, 1, SampleMode::Exhaustive).unwrap();
        assert_eq!(d.counts.values().copied().collect::<Vec<_>>(), vec![4]);

        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)], None).unwrap();
        let d = ball_distribution(&p3, 1, SampleMode::Exhaustive).unwrap();
        let mut counts: Vec<u64> = d.counts.values().copied().collect();
        counts.sort();
        assert_eq!(counts, vec![1, 2]);
        let centre = extract_ball(&p3, 1, 1).unwrap();
        assert_eq!(d.counts[centre.certificate()], 1);
    }

    #[test]
    fn sampled_mode() {
        let d = ball_distribution(&cycle(20), 2, SampleMode::Sampled { k: 50, seed: 3 }).unwrap();
        assert_eq!(d.total, 50);
        assert_eq!(d.counts.len(), 1);
        assert!(ball_distribution(&cycle(20), 2, SampleMode::Sampled { k: 0, seed: 3 }).is_err());
    }

    #[test]
    fn tv_examples() {
        let a = z_ball(1).certificate().clone();
        let b = extract_ball(&cycle(3), 0, 1).unwrap().certificate().clone();
        let half = BallDistribution::from_certificates(1, [a.clone(), b.clone()]);
        let point = BallDistribution::point_mass(1, a.clone());
        assert_eq!(tv_distance(&half, &half).unwrap(), 0.0);
        assert_eq!(tv_distance(&half, &point).unwrap(), 0.5);
        assert_eq!(tv_distance(&point, &BallDistribution::point_mass(1, b)).unwrap(), 1.0);
        assert!(tv_distance(&point, &BallDistribution::point_mass(2, a)).is_err());
    }

    #[test]
    fn convergence_examples() {
        let reference = BallDistribution::point_mass(2, z_ball(2).certificate().clone());
        let graphs = [cycle(10), cycle(100), cycle(1000)];
        let r = convergence_report(&graphs, 2, &reference).unwrap();
        assert!(r.rows.iter().all(|row| row.tv_distance == 0.0));
        assert_eq!(r.rows.iter().map(|row| row.n).collect::<Vec<_>>(), vec![10, 100, 1000]);

        let k4 = generate(&GenSpec::new(Family::Complete, 4)).unwrap();
        let reference = BallDistribution::point_mass(1, z_ball(1).certificate().clone());
        let r = convergence_report(&[k4], 1, &reference).unwrap();
        assert_eq!(r.rows[0].tv_distance, 1.0);
    }

    #[test]
    fn json_round_trip() {
        let g = generate(&GenSpec::new(Family::BridgedPair, 20).with_seed(7)).unwrap();
        let d = ball_distribution(&g, 1, SampleMode::Exhaustive).unwrap();
        let back = BallDistribution::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        let hexes: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["cert_hex"].as_str().unwrap()).collect();
        let mut sorted = hexes.clone();
        sorted.sort();
        assert_eq!(hexes, sorted);
        assert!(BallDistribution::from_json(r#"{"radius":1,"total":3,"entries":[{"cert_hex":"012829","count":2}]}"#).is_err());
    }

    #[test]
    fn class_count_examples() {
        let c6 = cycle(6);
        assert_eq!(class_count(&c6, &z_ball(1)).unwrap(), 6);
        let triangle = extract_ball(&cycle(3), 0, 1).unwrap();
        assert_eq!(class_count(&c6, &triangle).unwrap(), 0);
        let point = extract_ball(&c6, 0, 0).unwrap();
        let k4 = generate(&GenSpec::new(Family::Complete, 4)).unwrap();
        assert_eq!(class_count(&k4, &point).unwrap(), 4);
    }

    #[test]
    fn class_flow_on_bridged_pair() {
        let g = generate(&GenSpec::new(Family::BridgedPair, 200).with_seed(1)).unwrap();
        // Tree-like 4-regular star class against the cycle path class.
        let t1 = (1..100)
            .filter(|&v| g.degree(v) == 4 && !g.has_edge(v, 0))
            .map(|v| extract_ball(&g, v, 1).unwrap())
            .find(|b| b.certificate().is_tree())
            .unwrap();
        let t2 = extract_ball(&g, 150, 1).unwrap();
        let r = disjoint_class_flow(&g, &t1, &t2, 0.5, 0.5).unwrap();
        assert_eq!(r.outcome, ClassFlowOutcome::Completed);
        assert_eq!(r.flow_value, Some(1));
        assert_eq!(r.min_cut_size, Some(1));
        assert_eq!(r.k, 5.0 * 4.0 / 0.25);

        // K below the bridge-crossing distance: no short path.
        let r = disjoint_class_flow(&g, &t1, &t2, 10.0, 1.0).unwrap();
        assert_eq!(r.k, 2.0);
        assert_eq!(r.short_paths, Some(0));
        assert!(r.nearby.is_none());
    }

    #[test]
    fn class_flow_same_class_and_small_class() {
        let g = cycle(12);
        let t = z_ball(1);
        let r = disjoint_class_flow(&g, &t, &t, 1.0, 1.0).unwrap();
        assert_eq!(r.outcome, ClassFlowOutcome::SameClass);
        assert_eq!(r.a1_size, 12);

        let p = Graph::from_edges(20, (0..19).map(|i| (i, i + 1)), None).unwrap();
        let end = extract_ball(&p, 0, 1).unwrap();
        let mid = extract_ball(&p, 2, 1).unwrap();
        let r = disjoint_class_flow(&p, &end, &mid, 1.0, 1.0).unwrap();
        assert_eq!(r.outcome, ClassFlowOutcome::HypothesisFailure);
        assert_eq!((r.a1_size, r.a2_size), (2, 18));
        assert!(r.flow_value.is_none());
    }

    #[test]
    fn nearby_check_finds_pair() {
        let p = Graph::from_edges(8, (0..7).map(|i| (i, i + 1)), None).unwrap();
        let end = extract_ball(&p, 0, 1).unwrap();
        let mid = extract_ball(&p, 3, 1).unwrap();
        let r = disjoint_class_flow(&p, &end, &mid, 1.0, 0.5).unwrap();
        assert_eq!(r.outcome, ClassFlowOutcome::Completed);
        assert_eq!(r.flow_value, Some(2));
        let near = r.nearby.unwrap();
        assert_eq!(near.path_length, 1);
        assert!(near.contained && near.isomorphic);
    }
}
