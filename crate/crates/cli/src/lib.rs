//! Command-line experiments over the perclab core library.
//!
//! Every command writes data (edge lists, CSV, JSON, SVG, reports) to stdout
//! or to `--output`, and diagnostics to stderr. Exit codes: 0 success,
//! 1 a verification verdict of FAIL, 2 invalid input, 3 a size or iteration
//! cap was hit.

pub mod experiments;
pub mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use perclab_core::expansion::{cheeger_exact, cheeger_spectral_bounds, cheeger_upper_search, edge_disjoint_paths};
use perclab_core::generators::{parse_key_values, regular_tree_ball};
use perclab_core::locallimit::{ball_distribution, tv_distance, BallDistribution, SampleMode};
use perclab_core::percolation::{ball_survival, reach_set_size, threshold_scan, PercConfig};
use perclab_core::{generate, Family, GenSpec, Graph};

use experiments::{verify_constancy, verify_locality, ConstancyParams, LocalityParams};

#[derive(Debug, Parser)]
#[command(name = "perclab", version, about = "Percolation and local-limit experiments on finite graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Cheeger constant: exact, spectral bounds, or a searched upper bound.
    Cheeger(CheegerArgs),
    /// Giant-component probability over a grid of p.
    Scan(ScanArgs),
    /// Probability that the root reaches the boundary of its ball by an open path.
    Survival(SurvivalArgs),
    /// Law of the number of vertices reached by open paths of at most R edges.
    Reach(SurvivalArgs),
    /// Ball-class distribution at a radius.
    Balls(BallsArgs),
    /// Total-variation distance between two ball distributions.
    Tv(TvArgs),
    /// Edge-disjoint paths between two vertex sets.
    Flow(FlowArgs),
    /// Giant-component threshold against the tree p_c on random regular graphs.
    VerifyLocality(LocalityArgs),
    /// Ball-class concentration on an expander against a bridged control.
    VerifyConstancy(ConstancyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheegerMode {
    Exact,
    Spectral,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BallMode {
    Exhaustive,
    Sampled,
}

/// Integer that may be written in scientific notation, e.g. `1e5`.
fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e15 => Ok(x as usize),
        _ => Err(format!("`{s}` is not a nonnegative integer")),
    }
}

fn parse_count_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(|t| parse_count(t.trim())).collect()
}

/// Rounds away binary noise from grid arithmetic.
fn tidy(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

/// `a,b,c` or an inclusive range `start:stop:step`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(format!("range `{s}` must be start:stop:step"));
        };
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if !(step > 0.0) || b < a {
            return Err(format!("range `{s}` needs step > 0 and start <= stop"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| tidy(a + i as f64 * step)).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct GenArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long, value_parser = parse_count)]
    pub n: usize,
    /// Degree for random_regular.
    #[arg(long, default_value = "3", value_parser = parse_count)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct CheegerArgs {
    /// Edge-list file.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: CheegerMode,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ScanArgs {
    pub file: PathBuf,
    /// Comma list or start:stop:step.
    #[arg(long, value_parser = parse_grid)]
    pub p_grid: ::std::vec::Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SurvivalArgs {
    /// Edge-list file; omit when using --tree-d.
    pub file: Option<PathBuf>,
    /// Use the radius-R ball of the d-regular tree instead of a file.
    #[arg(long, value_parser = parse_count)]
    pub tree_d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, alias = "r", value_parser = parse_count)]
    pub radius: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value = "10000", value_parser = parse_count)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct BallsArgs {
    pub file: PathBuf,
    #[arg(long, alias = "r", value_parser = parse_count)]
    pub radius: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: BallMode,
    /// Number of sampled roots in sampled mode.
    #[arg(long, default_value = "1000", value_parser = parse_count)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct TvArgs {
    pub first: PathBuf,
    pub second: PathBuf,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct FlowArgs {
    pub file: PathBuf,
    #[arg(long, value_parser = parse_count_list)]
    pub a1: ::std::vec::Vec<usize>,
    #[arg(long, value_parser = parse_count_list)]
    pub a2: ::std::vec::Vec<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct LocalityArgs {
    #[arg(long, default_value = "3", value_parser = parse_count)]
    pub d: usize,
    #[arg(long, default_value = "1000,10000", value_parser = parse_count_list)]
    pub n_list: ::std::vec::Vec<usize>,
    #[arg(long, default_value = "0.4,0.6", value_parser = parse_grid)]
    pub p_grid: ::std::vec::Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub margin: f64,
    #[arg(long, default_value_t = 0.1)]
    pub fail_low: f64,
    #[arg(long, default_value_t = 0.9)]
    pub pass_high: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Writes the per-graph scan rows as CSV.
    #[arg(long)]
    pub evidence: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ConstancyArgs {
    /// Size of the bridged control graph.
    #[arg(long, default_value = "10000", value_parser = parse_count)]
    pub n: usize,
    /// Size of the random 3-regular graph.
    #[arg(long, default_value = "100000", value_parser = parse_count)]
    pub n_positive: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Expansion constant used for the path-length scale K.
    #[arg(long, default_value_t = 0.1)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p0: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Splices `--config FILE` into the argument list: each `key=value` line
/// becomes `--key value` right after the subcommand, so explicit flags that
/// follow take precedence.
pub fn expand_config(args: Vec<String>) -> anyhow::Result<Vec<String>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().context("--config needs a file path")?);
        } else if let Some(path) = a.strip_prefix("--config=") {
            config = Some(path.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let text = fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let mut injected = Vec::new();
    for (key, value) in parse_key_values(&text)? {
        let flag = format!("--{}", key.to_lowercase().replace('_', "-"));
        match value.as_str() {
            "true" => injected.push(flag),
            "false" => {}
            _ => {
                injected.push(flag);
                injected.push(value);
            }
        }
    }
    let at = rest.len().min(2);
    rest.splice(at..at, injected);
    Ok(rest)
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, output: Option<&Path>, data: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, data).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(data.as_bytes())?,
    }
    Ok(())
}

/// Exit code for an error: 3 for cap errors from the core library, 2 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    err.chain()
        .find_map(|e| e.downcast_ref::<perclab_core::Error>())
        .map_or(2, |e| if e.is_cap() { 3 } else { 2 })
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Gen(a) => {
            let spec = GenSpec::new(a.family, a.n).with_degree(a.d).with_seed(a.seed);
            let g = generate(&spec)?;
            emit(out, a.output.as_deref(), &g.to_edge_list())?;
            writeln!(err, "n={} edges={} max_degree={}", g.n(), g.edge_count(), g.max_degree())?;
        }
        Command::Cheeger(a) => {
            let g = read_graph(&a.file)?;
            let report = match a.mode {
                CheegerMode::Exact => cheeger_exact(&g)?,
                CheegerMode::Spectral => cheeger_spectral_bounds(&g)?,
                CheegerMode::Upper => cheeger_upper_search(&g)?,
            };
            emit(out, a.output.as_deref(), &json(&report))?;
        }
        Command::Scan(a) => {
            if a.p_grid.is_empty() {
                bail!(perclab_core::Error::InvalidArgument("--p-grid is required".into()));
            }
            let g = read_graph(&a.file)?;
            let table = threshold_scan(&g, &a.p_grid, a.alpha, a.seed, a.trials)?;
            let data = match a.format {
                Format::Csv => table.to_csv(),
                Format::Json => json(&table),
                Format::Svg => {
                    let pts: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.p, r.prob)).collect();
                    let title = format!("P(largest component >= {} n), {} trials", a.alpha, a.trials);
                    svg::line_plot(&title, "p", "probability", &pts)
                }
                Format::Text => bail!(perclab_core::Error::InvalidArgument("scan writes csv, json or svg".into())),
            };
            emit(out, a.output.as_deref(), &data)?;
        }
        Command::Survival(a) | Command::Reach(a) if a.file.is_some() == a.tree_d.is_some() => {
            bail!(perclab_core::Error::InvalidArgument(
                "give exactly one of an edge-list file or --tree-d".into()
            ));
        }
        Command::Survival(a) => {
            let (g, root) = survival_graph(&a)?;
            let est = ball_survival(&g, root, a.radius, &PercConfig::new(a.p, a.seed, a.trials))?;
            emit(out, a.output.as_deref(), &json(&est))?;
        }
        Command::Reach(a) => {
            let (g, root) = survival_graph(&a)?;
            let dist = reach_set_size(&g, root, a.radius, &PercConfig::new(a.p, a.seed, a.trials))?;
            emit(out, a.output.as_deref(), &json(&dist))?;
        }
        Command::Balls(a) => {
            let g = read_graph(&a.file)?;
            let mode = match a.mode {
                BallMode::Exhaustive => SampleMode::Exhaustive,
                BallMode::Sampled => SampleMode::Sampled { k: a.samples, seed: a.seed },
            };
            let mut data = ball_distribution(&g, a.radius, mode)?.to_json();
            data.push('\n');
            emit(out, a.output.as_deref(), &data)?;
        }
        Command::Tv(a) => {
            let load = |p: &Path| -> anyhow::Result<BallDistribution> {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(BallDistribution::from_json(&text)?)
            };
            let tv = tv_distance(&load(&a.first)?, &load(&a.second)?)?;
            emit(out, None, &json(&serde_json::json!({ "tv_distance": tv })))?;
        }
        Command::Flow(a) => {
            let g = read_graph(&a.file)?;
            let r = edge_disjoint_paths(&g, &a.a1, &a.a2)?;
            emit(out, a.output.as_deref(), &json(&r))?;
        }
        Command::VerifyLocality(a) => {
            let params = LocalityParams {
                d: a.d,
                n_list: a.n_list,
                grid: a.p_grid,
                alpha: a.alpha,
                trials: a.trials,
                seed: a.seed,
                margin: a.margin,
                fail_low: a.fail_low,
                pass_high: a.pass_high,
            };
            params.validate()?;
            let report = verify_locality(&params)?;
            if let Some(p) = &a.evidence {
                fs::write(p, report.evidence_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            let data = match a.format {
                Format::Text => report.to_text(),
                Format::Json => json(&report),
                Format::Csv => report.evidence_csv(),
                Format::Svg => bail!(perclab_core::Error::InvalidArgument("verify-locality writes text, json or csv".into())),
            };
            emit(out, a.output.as_deref(), &data)?;
            return Ok(report.verdict.exit_code());
        }
        Command::VerifyConstancy(a) => {
            let params = ConstancyParams {
                n: a.n,
                n_positive: a.n_positive,
                seed: a.seed,
                c: a.c,
                p0: a.p0,
            };
            let report = verify_constancy(&params)?;
            let data = match a.format {
                Format::Text => report.to_text(),
                Format::Json => json(&report),
                _ => bail!(perclab_core::Error::InvalidArgument("verify-constancy writes text or json".into())),
            };
            emit(out, a.output.as_deref(), &data)?;
            return Ok(report.verdict.exit_code());
        }
    }
    Ok(0)
}

fn survival_graph(a: &SurvivalArgs) -> anyhow::Result<(Graph, usize)> {
    match (&a.file, a.tree_d) {
        (Some(path), None) => Ok((read_graph(path)?, a.root)),
        (None, Some(d)) => Ok((regular_tree_ball(d, a.radius)?, 0)),
        _ => unreachable!("checked by the caller"),
    }
}
