//! Rooted balls, rooted isomorphism, and the local metric on rooted graphs.

use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::Ratio;
use serde::Serialize;

use crate::canon::{certify, Certificate, DEFAULT_CANON_CAP};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// The closed ball `B_G(o, r)`: induced subgraph on all vertices within
/// distance `r` of `o`, relabelled in BFS order so the root is vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBall {
    graph: Graph,
    radius: usize,
    certificate: Certificate,
    origin: Vec<usize>,
}

impl RootedBall {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Always 0: balls are relabelled so the root comes first.
    pub fn root(&self) -> usize {
        0
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    /// Vertex ids in the source graph, indexed by local id.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.graph.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Vertices within distance `r` of `o` in BFS order (neighbors ascending),
/// with their distances.
pub fn ball_vertices(g: &Graph, o: usize, r: usize) -> Result<Vec<(usize, usize)>> {
    g.check_vertex(o)?;
    let mut seen = HashSet::from([o]);
    let mut order = vec![(o, 0)];
    let mut queue = VecDeque::from([(o, 0usize)]);
    while let Some((u, d)) = queue.pop_front() {
        if d == r {
            continue;
        }
        for &w in g.neighbors(u) {
            if seen.insert(w) {
                order.push((w, d + 1));
                queue.push_back((w, d + 1));
            }
        }
    }
    Ok(order)
}

pub fn extract_ball(g: &Graph, o: usize, r: usize) -> Result<RootedBall> {
    extract_ball_capped(g, o, r, DEFAULT_CANON_CAP)
}

/// [`extract_ball`] with an explicit canonicalization size cap.
pub fn extract_ball_capped(g: &Graph, o: usize, r: usize, cap: usize) -> Result<RootedBall> {
    let members = ball_vertices(g, o, r)?;
    if members.len() > cap {
        return Err(Error::CanonicalizationCap {
            size: members.len(),
            cap,
        });
    }
    let local: HashMap<usize, usize> = members
        .iter()
        .enumerate()
        .map(|(i, &(v, _))| (v, i))
        .collect();
    let mut edges = Vec::new();
    for (i, &(v, _)) in members.iter().enumerate() {
        for &w in g.neighbors(v) {
            if let Some(&j) = local.get(&w) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let graph = Graph::from_edges(members.len(), edges, Some(g.delta_bound()))?;
    let certificate = certify(&graph, 0);
    Ok(RootedBall {
        graph,
        radius: r,
        certificate,
        origin: members.into_iter().map(|(v, _)| v).collect(),
    })
}

/// Certificate of `B_g(o, r)`.
pub fn canonical_certificate(ball: &RootedBall) -> &Certificate {
    ball.certificate()
}

pub fn rooted_isomorphic(b1: &RootedBall, b2: &RootedBall) -> Result<bool> {
    if b1.radius != b2.radius {
        return Err(Error::RadiusMismatch(b1.radius, b2.radius));
    }
    Ok(b1.certificate == b2.certificate)
}

/// Does `(g, o)` lie in the neighbourhood of rooted graphs whose
/// `target.radius()`-ball is isomorphic to `target`?
pub fn ball_class_member(g: &Graph, o: usize, target: &RootedBall) -> Result<bool> {
    let ball = extract_ball(g, o, target.radius)?;
    Ok(ball.certificate == target.certificate)
}

/// Largest radius at which two rooted graphs have isomorphic balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Finite(usize),
    /// The rooted graphs are isomorphic in full.
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootedDistance {
    pub agreement: Agreement,
    /// Agreement held up to the search limit without certifying full
    /// isomorphism; `agreement` is then only a lower bound.
    pub truncated: bool,
}

impl RootedDistance {
    /// `1/(1+t)`, or 0 when the rooted graphs are isomorphic.
    pub fn d(&self) -> Ratio<u64> {
        match self.agreement {
            Agreement::Finite(t) => Ratio::new(1, 1 + t as u64),
            Agreement::Infinite => Ratio::from_integer(0),
        }
    }

    pub fn d_f64(&self) -> f64 {
        let d = self.d();
        *d.numer() as f64 / *d.denom() as f64
    }
}

fn eccentricity(g: &Graph, o: usize) -> usize {
    g.distances_from(o).into_iter().flatten().max().unwrap_or(0)
}

/// Agreement radius `t = sup{s : B(o1, s) ≅ B(o2, s)}`, scanned for
/// `s = 1..=s_max`.
///
/// Radius-0 balls always agree, so `t = 0` when already the radius-1 balls
/// differ. `Infinite` is reported when agreement reaches a radius covering both
/// components entirely.
pub fn distinguishing_radius(
    g1: &Graph,
    o1: usize,
    g2: &Graph,
    o2: usize,
    s_max: usize,
) -> Result<RootedDistance> {
    g1.check_vertex(o1)?;
    g2.check_vertex(o2)?;
    if s_max == 0 {
        return Err(Error::InvalidArgument("s_max must be at least 1".into()));
    }
    let full = eccentricity(g1, o1).max(eccentricity(g2, o2));
    for s in 1..=s_max {
        let b1 = extract_ball(g1, o1, s)?;
        let b2 = extract_ball(g2, o2, s)?;
        if b1.certificate != b2.certificate {
            return Ok(RootedDistance {
                agreement: Agreement::Finite(s - 1),
                truncated: false,
            });
        }
        if s >= full {
            return Ok(RootedDistance {
                agreement: Agreement::Infinite,
                truncated: false,
            });
        }
    }
    Ok(RootedDistance {
        agreement: Agreement::Finite(s_max),
        truncated: true,
    })
}

/// `D((g1, o1), (g2, o2)) = 1/(1+t)`; see [`distinguishing_radius`].
pub fn metric_d(
    g1: &Graph,
    o1: usize,
    g2: &Graph,
    o2: usize,
    s_max: usize,
) -> Result<RootedDistance> {
    distinguishing_radius(g1, o1, g2, o2, s_max)
}
