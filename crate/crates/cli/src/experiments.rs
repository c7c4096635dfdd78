//! The two verification experiments: locality of the giant-component
//! threshold on random regular graphs, and constancy of the critical
//! probability for expanders against a non-expanding control.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;

use perclab_core::ball::extract_ball;
use perclab_core::expansion::{bridges, cut_witness, edge_disjoint_paths};
use perclab_core::generators::{generate, regular_tree_ball, Family, GenSpec};
use perclab_core::locallimit::{ball_distribution, disjoint_class_flow, ClassFlowReport, SampleMode};
use perclab_core::percolation::{threshold_scan, tree_critical_probability, ScanTable, Z95};
use perclab_core::rng::derive;
use perclab_core::{Error, Graph, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// No grid point fell outside the margin around `p_c`.
    Vacuous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "VACUOUS",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Fail => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalityParams {
    pub d: usize,
    pub n_list: Vec<usize>,
    pub grid: Vec<f64>,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    pub margin: f64,
    pub fail_low: f64,
    pub pass_high: f64,
}

impl LocalityParams {
    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::InvalidArgument(format!(
                "degree must be at least 3 (d = {} gives cycles, which do not expand)",
                self.d
            )));
        }
        if self.n_list.is_empty() || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("n list must be nonempty and strictly increasing".into()));
        }
        for &n in &self.n_list {
            GenSpec::new(Family::RandomRegular, n).with_degree(self.d).validate()?;
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidArgument("p grid is empty".into()));
        }
        if !(self.margin >= 0.0) || ![self.fail_low, self.pass_high].iter().all(|x| (0.0..=1.0).contains(x)) {
            return Err(Error::InvalidArgument("margin must be >= 0 and thresholds in [0, 1]".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Subcritical,
    Supercritical,
    Window,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalityRun {
    pub n: usize,
    pub graph_seed: u64,
    /// Largest subcritical probability plus the largest supercritical shortfall
    /// from 1.
    pub gap: f64,
    pub ok: bool,
    #[serde(skip)]
    pub table: ScanTable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalityReport {
    pub d: usize,
    pub p_c: f64,
    pub margin: f64,
    pub fail_low: f64,
    pub pass_high: f64,
    /// Slack allowed when comparing gaps across `n`: one 95% half-width at
    /// probability 1/2.
    pub gap_allowance: f64,
    pub gap_shrinks: bool,
    pub runs: Vec<LocalityRun>,
    pub verdict: Verdict,
}

impl LocalityReport {
    pub fn side(&self, p: f64) -> Side {
        if p <= self.p_c - self.margin + 1e-12 {
            Side::Subcritical
        } else if p >= self.p_c + self.margin - 1e-12 {
            Side::Supercritical
        } else {
            Side::Window
        }
    }

    /// All scan rows with the graph size and side.
    pub fn evidence_csv(&self) -> String {
        let mut s = String::from("n,p,alpha,prob,ci_low,ci_high,trials,seed,side\n");
        for run in &self.runs {
            for r in &run.table.rows {
                let side = match self.side(r.p) {
                    Side::Subcritical => "subcritical",
                    Side::Supercritical => "supercritical",
                    Side::Window => "window",
                };
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    run.n, r.p, r.alpha, r.prob, r.ci_low, r.ci_high, r.trials, r.seed, side
                )
                .unwrap();
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "random {}-regular graphs, tree p_c = {}", self.d, self.p_c).unwrap();
        writeln!(
            s,
            "checks: prob <= {} for p <= {}, prob >= {} for p >= {}",
            self.fail_low,
            self.p_c - self.margin,
            self.pass_high,
            self.p_c + self.margin
        )
        .unwrap();
        for run in &self.runs {
            writeln!(
                s,
                "n={} graph_seed={} gap={} {}",
                run.n,
                run.graph_seed,
                run.gap,
                if run.ok { "ok" } else { "violated" }
            )
            .unwrap();
        }
        writeln!(s, "gap shrinks (allowance {}): {}", self.gap_allowance, self.gap_shrinks).unwrap();
        writeln!(s, "verdict: {}", self.verdict.as_str()).unwrap();
        s
    }
}

/// Scans a fresh random `d`-regular graph per size. The graph for the `i`-th
/// size uses seed `derive(seed, i)`; percolation trials use `seed` itself.
pub fn verify_locality(params: &LocalityParams) -> Result<LocalityReport> {
    params.validate()?;
    let p_c = tree_critical_probability(params.d)?;
    let mut report = LocalityReport {
        d: params.d,
        p_c,
        margin: params.margin,
        fail_low: params.fail_low,
        pass_high: params.pass_high,
        gap_allowance: Z95 * 0.5 / (params.trials as f64).sqrt(),
        gap_shrinks: true,
        runs: Vec::new(),
        verdict: Verdict::Vacuous,
    };
    let checked = params.grid.iter().any(|&p| report.side(p) != Side::Window);
    for (i, &n) in params.n_list.iter().enumerate() {
        let graph_seed = derive(params.seed, i as u64);
        let g = generate(&GenSpec::new(Family::RandomRegular, n).with_degree(params.d).with_seed(graph_seed))?;
        let table = threshold_scan(&g, &params.grid, params.alpha, params.seed, params.trials)?;
        let mut low: f64 = 0.0;
        let mut short: f64 = 0.0;
        let mut ok = true;
        for r in &table.rows {
            match report.side(r.p) {
                Side::Subcritical => {
                    low = low.max(r.prob);
                    ok &= r.prob <= params.fail_low;
                }
                Side::Supercritical => {
                    short = short.max(1.0 - r.prob);
                    ok &= r.prob >= params.pass_high;
                }
                Side::Window => {}
            }
        }
        report.runs.push(LocalityRun {
            n,
            graph_seed,
            gap: low + short,
            ok,
            table,
        });
    }
    report.gap_shrinks = report
        .runs
        .windows(2)
        .all(|w| w[1].gap <= w[0].gap + report.gap_allowance);
    report.verdict = if !checked {
        Verdict::Vacuous
    } else if report.gap_shrinks && report.runs.iter().all(|r| r.ok) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstancyParams {
    /// Size of the non-expanding control graph.
    pub n: usize,
    /// Size of the random 3-regular graph.
    pub n_positive: usize,
    pub seed: u64,
    pub c: f64,
    pub p0: f64,
}

pub const POSITIVE_RADIUS: usize = 2;
/// Radius for the control. Short cycles in the 4-regular half would split its
/// radius-2 mass across many classes at desk-scale `n`.
pub const NEGATIVE_RADIUS: usize = 1;
pub const MASS_WINDOW: (f64, f64) = (0.45, 0.55);
pub const POSITIVE_MASS: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositiveSide {
    pub n: usize,
    pub seed: u64,
    pub radius: usize,
    pub classes: usize,
    pub dominant_mass: f64,
    pub dominant_is_tree_ball: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeSide {
    pub n: usize,
    pub seed: u64,
    pub radius: usize,
    pub classes: usize,
    /// Masses of the two largest classes.
    pub class_masses: [f64; 2],
    pub masses_ok: bool,
    /// Best bridge cut ratio, as "a/b".
    pub bridge_cut_bound: String,
    pub two_over_n: String,
    pub cheeger_ok: bool,
    pub halves_flow: usize,
    pub flow_ok: bool,
    pub class_flow: ClassFlowReport,
    pub p_c_cycle_half: f64,
    pub p_c_regular_half: f64,
    pub p_c_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstancyReport {
    pub positive: PositiveSide,
    pub negative: NegativeSide,
    pub verdict: Verdict,
}

fn ratio_string(r: Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// The smaller side of the best bridge cut, with its ratio.
fn best_bridge_cut(g: &Graph) -> Result<Option<Ratio<u64>>> {
    let mut best: Option<Ratio<u64>> = None;
    for (u, v) in bridges(g) {
        let kept = g.edges().iter().copied().filter(|&e| e != (u, v));
        let h = Graph::from_edges(g.n(), kept, None)?;
        let comp = h.components();
        let side: Vec<usize> = (0..g.n()).filter(|&w| comp[w] == comp[u]).collect();
        let r = cut_witness(g, &side)?.upper_exact.expect("witness ratio");
        if best.is_none_or(|b| r < b) {
            best = Some(r);
        }
    }
    Ok(best)
}

pub fn verify_constancy(params: &ConstancyParams) -> Result<ConstancyReport> {
    if !(params.c > 0.0) || !(params.p0 > 0.0 && params.p0 <= 1.0) {
        return Err(Error::InvalidArgument("need c > 0 and 0 < p0 <= 1".into()));
    }
    let pos_spec = GenSpec::new(Family::RandomRegular, params.n_positive).with_degree(3).with_seed(params.seed);
    let neg_spec = GenSpec::new(Family::BridgedPair, params.n).with_seed(params.seed);
    pos_spec.validate()?;
    neg_spec.validate()?;

    let g = generate(&pos_spec)?;
    let dist = ball_distribution(&g, POSITIVE_RADIUS, SampleMode::Exhaustive)?;
    let tree = regular_tree_ball(3, POSITIVE_RADIUS)?;
    let tree_cert = extract_ball(&tree, 0, POSITIVE_RADIUS)?.certificate().clone();
    let (dominant, mass) = dist.dominant().expect("nonempty distribution");
    let positive = PositiveSide {
        n: params.n_positive,
        seed: params.seed,
        radius: POSITIVE_RADIUS,
        classes: dist.counts.len(),
        dominant_mass: mass,
        dominant_is_tree_ball: *dominant == tree_cert,
        ok: mass >= POSITIVE_MASS && *dominant == tree_cert,
    };

    let g = generate(&neg_spec)?;
    let n = g.n();
    let dist = ball_distribution(&g, NEGATIVE_RADIUS, SampleMode::Exhaustive)?;
    let mut ranked: Vec<(u64, usize)> = Vec::new();
    let mut reps = Vec::new();
    for (i, (cert, &count)) in dist.counts.iter().enumerate() {
        ranked.push((count, i));
        reps.push(cert.clone());
    }
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let top: Vec<usize> = ranked.iter().take(2).map(|&(_, i)| i).collect();
    let masses = [0, 1].map(|j| top.get(j).map_or(0.0, |&i| dist.probability(&reps[i])));
    let in_window = |m: f64| (MASS_WINDOW.0..=MASS_WINDOW.1).contains(&m);

    // Representative balls of the two largest classes.
    let mut targets = Vec::new();
    for &i in &top {
        let v = (0..n)
            .find(|&v| extract_ball(&g, v, NEGATIVE_RADIUS).map(|b| *b.certificate() == reps[i]).unwrap_or(false))
            .expect("class has a member");
        targets.push(extract_ball(&g, v, NEGATIVE_RADIUS)?);
    }
    if targets.len() < 2 {
        return Err(Error::InvalidArgument("control graph has a single ball class".into()));
    }
    let class_flow = disjoint_class_flow(&g, &targets[0], &targets[1], params.c, params.p0)?;

    let bound = best_bridge_cut(&g)?;
    let two_over_n = Ratio::new(2, n as u64);
    let halves: (Vec<usize>, Vec<usize>) = ((0..n / 2).collect(), (n / 2..n).collect());
    let halves_flow = edge_disjoint_paths(&g, &halves.0, &halves.1)?.value;
    let p_c_cycle_half = tree_critical_probability(2)?;
    let p_c_regular_half = tree_critical_probability(4)?;

    let negative = NegativeSide {
        n,
        seed: params.seed,
        radius: NEGATIVE_RADIUS,
        classes: dist.counts.len(),
        class_masses: masses,
        masses_ok: masses.iter().all(|&m| in_window(m)),
        bridge_cut_bound: bound.map_or_else(|| "none".to_string(), ratio_string),
        two_over_n: ratio_string(two_over_n),
        cheeger_ok: bound == Some(two_over_n),
        halves_flow,
        flow_ok: halves_flow == 1 && class_flow.flow_value == Some(1),
        class_flow,
        p_c_cycle_half,
        p_c_regular_half,
        p_c_ok: p_c_cycle_half == 1.0 && (p_c_regular_half - 1.0 / 3.0).abs() < 1e-15,
    };
    let verdict = if positive.ok && negative.masses_ok && negative.cheeger_ok && negative.flow_ok && negative.p_c_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ConstancyReport {
        positive,
        negative,
        verdict,
    })
}

impl ConstancyReport {
    pub fn to_text(&self) -> String {
        let p = &self.positive;
        let q = &self.negative;
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut s = String::new();
        writeln!(s, "expander side: random 3-regular graph, n={} seed={}", p.n, p.seed).unwrap();
        writeln!(
            s,
            "  radius-{} ball classes: {}; dominant class mass {} (3-regular tree ball: {})",
            p.radius,
            p.classes,
            p.dominant_mass,
            yes(p.dominant_is_tree_ball)
        )
        .unwrap();
        writeln!(s, "  one limiting class, so p_c of the limit is the constant 1/2").unwrap();
        writeln!(s, "control side: bridged pair, n={} seed={}", q.n, q.seed).unwrap();
        writeln!(
            s,
            "  radius-{} ball classes: {}; two largest masses {} and {}",
            q.radius, q.classes, q.class_masses[0], q.class_masses[1]
        )
        .unwrap();
        writeln!(s, "  bridge cut Cheeger bound {} (2/n = {})", q.bridge_cut_bound, q.two_over_n).unwrap();
        writeln!(s, "  edge-disjoint paths between the halves: {}", q.halves_flow).unwrap();
        let f = &q.class_flow;
        writeln!(
            s,
            "  class flow: |A1|={} |A2|={} L={} short paths (K={}): {} nearby ball found: {}",
            f.a1_size,
            f.a2_size,
            f.flow_value.map_or("-".to_string(), |v| v.to_string()),
            f.k,
            f.short_paths.map_or("-".to_string(), |v| v.to_string()),
            yes(f.nearby.as_ref().is_some_and(|b| b.contained && b.isomorphic))
        )
        .unwrap();
        writeln!(
            s,
            "  limit halves: cycle p_c = {}, 4-regular tree p_c = {}",
            q.p_c_cycle_half, q.p_c_regular_half
        )
        .unwrap();
        writeln!(s, "verdict: {}", self.verdict.as_str()).unwrap();
        s
    }
}
