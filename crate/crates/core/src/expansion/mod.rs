//! Edge expansion: Cheeger constant (exact, spectral, witnessed cuts) and
//! Menger edge-disjoint path counts between vertex classes.

mod cheeger;
mod flow;
pub mod spectral;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

pub use cheeger::{bridges, cheeger_exact, cheeger_upper_search, cut_witness, EXACT_CAP};
pub use flow::{edge_disjoint_paths, FlowResult};
pub use spectral::cheeger_spectral_bounds;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Spectral,
    CutWitness,
}

/// Bounds `lower <= h(G) <= upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub method: Method,
    pub lower: f64,
    pub upper: f64,
    #[serde(serialize_with = "ratio_string", skip_serializing_if = "Option::is_none")]
    pub lower_exact: Option<Ratio<u64>>,
    #[serde(serialize_with = "ratio_string", skip_serializing_if = "Option::is_none")]
    pub upper_exact: Option<Ratio<u64>>,
    /// Sorted vertex set `A` attaining `upper`.
    #[serde(rename = "witness", skip_serializing_if = "Option::is_none")]
    pub witness_cut: Option<Vec<usize>>,
    /// Eigensolver residual used to widen spectral bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

fn ratio_string<S: Serializer>(r: &Option<Ratio<u64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

impl ExpansionReport {
    fn exact(h: Ratio<u64>, witness: Vec<usize>) -> Self {
        let value = cheeger::ratio_f64(h);
        Self {
            method: Method::Exact,
            lower: value,
            upper: value,
            lower_exact: Some(h),
            upper_exact: Some(h),
            witness_cut: Some(witness),
            residual: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Edges with exactly one endpoint in `a`.
pub fn edge_boundary(g: &Graph, a: &[usize]) -> Result<Vec<(usize, usize)>> {
    let mut inside = vec![false; g.n()];
    for &v in a {
        g.check_vertex(v)?;
        inside[v] = true;
    }
    Ok(g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| inside[u] != inside[v])
        .collect())
}

/// Path-length scale `K = 4Δ / (c·p0)` from the constancy argument.
pub fn constant_k(delta: usize, c: f64, p0: f64) -> Result<f64> {
    if delta == 0 || !(c > 0.0) || !(p0 > 0.0 && p0 <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "constant K needs Δ > 0, c > 0, 0 < p0 <= 1 (got Δ={delta}, c={c}, p0={p0})"
        )));
    }
    Ok(4.0 * delta as f64 / (c * p0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MengerParams {
    /// Claimed lower bound on the Cheeger constant.
    pub c: f64,
    /// Path-length threshold.
    pub k: f64,
    /// Class-density parameter; when set, both sets must hold at least
    /// `n·p0/4` vertices.
    pub p0: Option<f64>,
}

/// Status of the claimed Cheeger lower bound `c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheegerClaim {
    Verified { h_exact: f64 },
    Refuted { h_exact: f64 },
    /// Graph too large for the exact computation.
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MengerReport {
    pub flow_value: usize,
    pub a1_size: usize,
    pub a2_size: usize,
    pub c: f64,
    /// `c · min(|a1|, |a2|)`.
    pub required: f64,
    pub expander_bound_holds: bool,
    pub normalized_by_min: f64,
    /// `L / (n·p0/4)` when `p0` is given.
    pub normalized_by_p0: Option<f64>,
    /// Whether `|a1|, |a2| >= n·p0/4` when `p0` is given.
    pub class_sizes_ok: Option<bool>,
    pub k: f64,
    pub short_paths: usize,
    /// At most `Δ·n / (2K)` disjoint paths can be longer than `K`.
    pub long_path_allowance: f64,
    pub averaging_holds: bool,
    pub cheeger_claim: CheegerClaim,
    pub path_lengths: Vec<usize>,
}

/// Checks the flow lower bound `L >= c·min(|a1|, |a2|)` implied by a Cheeger
/// bound `c`, and the averaging step: all but `Δn/(2K)` of the `L` disjoint
/// paths have length at most `K`.
pub fn menger_expander_bound(
    g: &Graph,
    a1: &[usize],
    a2: &[usize],
    params: MengerParams,
) -> Result<MengerReport> {
    if !(params.c > 0.0) || !(params.k > 0.0) {
        return Err(Error::InvalidArgument("c and K must be positive".into()));
    }
    let flow = edge_disjoint_paths(g, a1, a2)?;
    let n = g.n() as f64;
    let min_side = a1.len().min(a2.len());
    let required = params.c * min_side as f64;
    let lengths = flow.path_lengths();
    let short_paths = lengths.iter().filter(|&&l| l as f64 <= params.k).count();
    let long_path_allowance = g.delta_bound() as f64 * n / (2.0 * params.k);
    let quarter = params.p0.map(|p0| n * p0 / 4.0);

    let cheeger_claim = if g.n() <= EXACT_CAP && g.n() >= 2 {
        let h = cheeger_exact(g)?.lower;
        if h + 1e-12 >= params.c {
            CheegerClaim::Verified { h_exact: h }
        } else {
            CheegerClaim::Refuted { h_exact: h }
        }
    } else {
        CheegerClaim::Unchecked
    };

    Ok(MengerReport {
        flow_value: flow.value,
        a1_size: a1.len(),
        a2_size: a2.len(),
        c: params.c,
        required,
        expander_bound_holds: flow.value as f64 + 1e-9 >= required,
        normalized_by_min: flow.value as f64 / min_side as f64,
        normalized_by_p0: quarter.map(|q| flow.value as f64 / q),
        class_sizes_ok: quarter.map(|q| a1.len() as f64 >= q && a2.len() as f64 >= q),
        k: params.k,
        short_paths,
        long_path_allowance,
        averaging_holds: short_paths as f64 + 1e-9 >= flow.value as f64 - long_path_allowance,
        cheeger_claim,
        path_lengths: lengths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, GenSpec};

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)), None).unwrap()
    }

    #[test]
    fn boundaries() {
        let k4 = generate(&GenSpec::new(Family::Complete, 4)).unwrap();
        assert_eq!(edge_boundary(&k4, &[0]).unwrap().len(), 3);
        assert_eq!(edge_boundary(&cycle(6), &[0, 1, 2]).unwrap(), vec![(0, 5), (2, 3)]);
        assert!(edge_boundary(&k4, &[0, 1, 2, 3]).unwrap().is_empty());
        assert!(edge_boundary(&k4, &[4]).is_err());
    }

    #[test]
    fn constant_k_values() {
        assert_eq!(constant_k(4, 0.5, 0.25).unwrap(), 128.0);
        assert_eq!(constant_k(1, 4.0, 1.0).unwrap(), 1.0);
        assert!((constant_k(3, 0.1, 0.2).unwrap() - 600.0).abs() < 1e-9);
        assert!(constant_k(0, 1.0, 1.0).is_err());
        assert!(constant_k(3, 0.0, 0.5).is_err());
        assert!(constant_k(3, 1.0, 1.5).is_err());
    }

    #[test]
    fn menger_examples() {
        let k4 = generate(&GenSpec::new(Family::Complete, 4)).unwrap();
        let params = MengerParams { c: 2.0, k: 3.0, p0: None };
        let r = menger_expander_bound(&k4, &[0, 1], &[2, 3], params).unwrap();
        assert_eq!(r.flow_value, 4);
        assert!(r.expander_bound_holds);
        assert_eq!(r.cheeger_claim, CheegerClaim::Verified { h_exact: 2.0 });

        let params = MengerParams { c: 2.0 / 3.0, k: 3.0, p0: None };
        let r = menger_expander_bound(&cycle(6), &[0], &[3], params).unwrap();
        assert_eq!(r.flow_value, 2);
        assert!(r.expander_bound_holds);
        assert_eq!(r.short_paths, 2);
        assert!(r.averaging_holds);

        let g = generate(&GenSpec::new(Family::BridgedPair, 20).with_seed(7)).unwrap();
        let a1: Vec<usize> = (0..10).collect();
        let a2: Vec<usize> = (10..20).collect();
        let params = MengerParams { c: 0.2, k: 5.0, p0: Some(1.0) };
        let r = menger_expander_bound(&g, &a1, &a2, params).unwrap();
        assert_eq!(r.flow_value, 1);
        assert!(!r.expander_bound_holds);
        assert!(matches!(r.cheeger_claim, CheegerClaim::Refuted { .. }));
        assert_eq!(r.class_sizes_ok, Some(true));
        assert_eq!(r.normalized_by_p0, Some(0.2));
    }

    #[test]
    fn report_json_schema() {
        let r = cheeger_exact(&cycle(6)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["method"], "exact");
        assert_eq!(v["upper_exact"], "2/3");
        assert_eq!(v["witness"], serde_json::json!([0, 1, 2]));
    }
}
