use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use hmis_core::analysis::{f_check_table, kelsen_constants, potential_report, Variant};
use hmis_core::baseline::{greedy_mis, VertexOrder};
use hmis_core::bl::{run_bl, BlConfig, PMode, Status};
use hmis_core::degree::degree_profile_with_budget;
use hmis_core::gen::{gen, GenKind, GenSize, GenSpec};
use hmis_core::io::{parse_hg, write_hg};
use hmis_core::sbl::{derive_params, edge_bound, run_sbl, FailPolicy, SblConfig, DEFAULT_MAX_RETRIES};
use hmis_core::{Hypergraph, Vertex, VertexSet};

mod experiment;

#[derive(Parser)]
#[command(name = "hmis", version, about = "Maximal independent sets in hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random hypergraph in .hg format.
    Gen(GenArgs),
    /// Compute a maximal independent set.
    Solve(SolveArgs),
    /// Check that a set is independent and maximal (exit 0) or not (exit 1).
    Verify { input: PathBuf, mis: PathBuf },
    /// Degree profile, potentials, bound constants, and the F table as JSON.
    Analyze(AnalyzeArgs),
    /// Monte Carlo experiments, one CSV row per run.
    Experiment(experiment::ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    UniformD,
    MixedDims,
    Linear,
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    #[arg(long)]
    n: Vertex,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Edge size for uniform-d and linear.
    #[arg(long)]
    dim: Option<usize>,
    /// Edge size range for mixed-dims, e.g. 2-5.
    #[arg(long)]
    dim_range: Option<String>,
    #[arg(long, conflicts_with = "edge_prob", required_unless_present = "edge_prob")]
    m: Option<usize>,
    #[arg(long)]
    edge_prob: Option<f64>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Algo {
    Greedy,
    Bl,
    Sbl,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Policy {
    Abort,
    FallbackGreedy,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    seed: u64,
    /// Write the per-round trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Marking (bl) or sampling (sbl) probability.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    d_cap: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    stop_threshold: Option<usize>,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
    retries: usize,
    #[arg(long, value_enum, default_value = "fallback-greedy")]
    fail_policy: Policy,
    /// Keep BL's marking probability at its round-1 value.
    #[arg(long)]
    fixed_p: bool,
    /// Greedy scans a seeded random order instead of ascending ids.
    #[arg(long)]
    shuffle: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    input: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum VariantArg {
    Original,
    Modified,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Original => Variant::KelsenOriginal,
            VariantArg::Modified => Variant::ModifiedD2,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct AnalyzeArgs {
    #[arg(long, value_enum, default_value = "modified")]
    variant: VariantArg,
    /// Tail parameter δ of the bound constants (default log² n).
    #[arg(long)]
    delta: Option<f64>,
    /// Maximum number of subset evaluations for the degree profile.
    #[arg(long, default_value_t = 100_000_000)]
    work_budget: u128,
    input: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct MisOutput {
    mis: Vec<Vertex>,
    algo: Algo,
    seed: u64,
    status: Status,
    rounds_used: usize,
    retries_total: usize,
    fallback: Option<String>,
}

#[derive(Deserialize)]
struct MisInput {
    mis: Vec<Vertex>,
}

pub(crate) fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_hg(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Prints the resolved configuration and the edge-count regime to stderr.
pub(crate) fn report_config(command: &str, config: serde_json::Value, h: Option<&Hypergraph>) {
    let mut doc = json!({ "command": command, "config": config });
    if let Some(h) = h {
        let (n, m) = (h.num_vertices(), h.num_edges());
        doc["instance"] = json!({ "n": n, "m": m, "d": h.dimension() });
        match edge_bound(n, m) {
            Some((beta, ok)) => {
                doc["beta"] = json!(beta);
                if !ok {
                    eprintln!("warning: m = {m} exceeds n^beta = {:.3} (beta = {beta:.4}); outside the analysed regime", (n as f64).powf(beta));
                }
            }
            None => eprintln!("warning: beta is undefined at n = {n}; the m <= n^beta regime cannot be checked"),
        }
    }
    eprintln!("run-config: {doc}");
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    let kind = match args.kind {
        Kind::UniformD => GenKind::UniformD { d: args.dim.context("--dim is required for uniform-d")? },
        Kind::Linear => GenKind::Linear { d: args.dim.context("--dim is required for linear")? },
        Kind::MixedDims => {
            let range = args.dim_range.as_deref().context("--dim-range is required for mixed-dims")?;
            let (lo, hi) = range.split_once('-').context("--dim-range must look like LO-HI")?;
            GenKind::MixedDims { lo: lo.trim().parse()?, hi: hi.trim().parse()? }
        }
    };
    let size = match (args.m, args.edge_prob) {
        (Some(m), _) => GenSize::Edges(m),
        (None, Some(q)) => GenSize::Probability(q),
        (None, None) => bail!("one of --m or --edge-prob is required"),
    };
    report_config("gen", serde_json::to_value(args)?, None);
    let h = gen(&GenSpec { n: args.n, kind, size, seed: args.seed })?;
    emit(args.out.as_deref(), &write_hg(&h))
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let h = read_hypergraph(&args.input)?;
    let mut config = serde_json::to_value(args)?;
    let output;
    let trace;
    match args.algo {
        Algo::Greedy => {
            report_config("solve", config, Some(&h));
            let order = if args.shuffle { VertexOrder::shuffled(&h, args.seed) } else { VertexOrder::ascending(&h) };
            let mis = greedy_mis(&h, &order);
            trace = String::new();
            output = MisOutput {
                mis: mis.into_vec(),
                algo: args.algo,
                seed: args.seed,
                status: Status::Ok,
                rounds_used: 0,
                retries_total: 0,
                fallback: None,
            };
        }
        Algo::Bl => {
            let cfg = BlConfig {
                seed: args.seed,
                p_mode: if args.fixed_p { PMode::Fixed } else { PMode::Recompute },
                p_override: args.p,
                max_rounds: args.max_rounds,
            };
            cfg.validate()?;
            config["resolved"] = json!({
                "bl": cfg,
                "max_rounds": cfg.max_rounds.unwrap_or_else(|| hmis_core::bl::default_max_rounds(h.num_vertices())),
            });
            report_config("solve", config, Some(&h));
            let r = run_bl(&h, &cfg)?;
            trace = r.trace_jsonl();
            output = MisOutput {
                mis: r.mis.into_vec(),
                algo: args.algo,
                seed: args.seed,
                status: r.status,
                rounds_used: r.rounds.len(),
                retries_total: 0,
                fallback: None,
            };
        }
        Algo::Sbl => {
            let cfg = SblConfig {
                seed: args.seed,
                alpha_override: args.alpha,
                d_cap_override: args.d_cap,
                p_override: args.p,
                stop_threshold_override: args.stop_threshold,
                max_retries_per_round: args.retries,
                max_rounds: args.max_rounds,
                fail_policy: match args.fail_policy {
                    Policy::Abort => FailPolicy::Abort,
                    Policy::FallbackGreedy => FailPolicy::FallbackGreedy,
                },
                bl_p_mode: if args.fixed_p { PMode::Fixed } else { PMode::Recompute },
            };
            let g = h.normalize();
            let params = if g.num_vertices() >= 2 {
                Some(derive_params(g.num_vertices(), g.num_edges(), &cfg)?)
            } else {
                None
            };
            config["resolved"] = json!({ "sbl": cfg, "params": params });
            report_config("solve", config, Some(&h));
            if let Some(p) = params.as_ref().filter(|p| p.d_clamped) {
                eprintln!(
                    "note: dimension cap formula gives {:.4}; clamped to {}",
                    p.d_formula.unwrap_or(f64::NAN),
                    p.d
                );
            }
            let r = run_sbl(&h, &cfg)?;
            trace = r.trace_jsonl();
            output = MisOutput {
                mis: r.mis.into_vec(),
                algo: args.algo,
                seed: args.seed,
                status: r.status,
                rounds_used: r.rounds.len(),
                retries_total: r.retries_total,
                fallback: Some(serde_json::to_value(r.fallback)?.as_str().unwrap_or_default().to_string()),
            };
        }
    }
    if let Some(path) = &args.trace {
        fs::write(path, &trace).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut text = serde_json::to_string(&output)?;
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    if output.status != Status::Ok {
        bail!("solver stopped at its round limit; the set above is independent but may not be maximal");
    }
    Ok(())
}

fn cmd_verify(input: &Path, mis: &Path) -> Result<bool> {
    let h = read_hypergraph(input)?;
    report_config("verify", json!({ "input": input, "mis": mis }), Some(&h));
    let text = fs::read_to_string(mis).with_context(|| format!("reading {}", mis.display()))?;
    let parsed: MisInput = serde_json::from_str(&text).context("MIS file must be JSON with a \"mis\" array")?;
    let s = VertexSet::from(parsed.mis);
    if let Some(v) = s.iter().find(|&v| !h.vertices().contains(v)) {
        println!("invalid: vertex {v} is not in the hypergraph");
        return Ok(false);
    }
    if let Some(e) = h.edges().iter().find(|e| e.is_subset_of(&s)) {
        println!("not independent: edge {e} lies inside the set");
        return Ok(false);
    }
    if !h.is_maximal_independent(&s) {
        let v = h
            .vertices()
            .iter()
            .find(|&v| !s.contains(v) && h.is_independent(&s.with(v)))
            .expect("a non-maximal set has an addable vertex");
        println!("not maximal: vertex {v} can be added");
        return Ok(false);
    }
    println!("ok: independent and maximal ({} vertices)", s.len());
    Ok(true)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<()> {
    let h = read_hypergraph(&args.input)?;
    report_config("analyze", serde_json::to_value(args)?, Some(&h));
    let h = h.normalize();
    let profile = degree_profile_with_budget(&h, args.work_budget).map_err(|e| match e {
        hmis_core::Error::WorkBudget { needed, budget } => anyhow::anyhow!(
            "degree profile needs {needed} subset evaluations, over the budget of {budget}; raise --work-budget to proceed"
        ),
        e => e.into(),
    })?;
    let variant: Variant = args.variant.into();
    let potential = potential_report(&h, variant).map_err(|e| e.to_string());
    let other = match variant {
        Variant::ModifiedD2 => Variant::KelsenOriginal,
        Variant::KelsenOriginal => Variant::ModifiedD2,
    };
    let potential_other = potential_report(&h, other).map_err(|e| e.to_string());
    let bounds = kelsen_constants(&h, args.delta).map_err(|e| e.to_string());
    let doc = json!({
        "n": h.num_vertices(),
        "m": h.num_edges(),
        "degree_profile": profile,
        "witnesses": profile.witnesses,
        "potential": result_json(potential)?,
        "potential_alternate": result_json(potential_other)?,
        "bound_constants": result_json(bounds)?,
        "f_inequality": f_check_table(3..=8)?,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn result_json<T: Serialize>(r: std::result::Result<T, String>) -> Result<serde_json::Value> {
    Ok(match r {
        Ok(v) => serde_json::to_value(v)?,
        Err(msg) => json!({ "unavailable": msg }),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Gen(args) => cmd_gen(args).map(|_| true),
        Command::Solve(args) => cmd_solve(args).map(|_| true),
        Command::Verify { input, mis } => cmd_verify(input, mis),
        Command::Analyze(args) => cmd_analyze(args).map(|_| true),
        Command::Experiment(args) => experiment::run(args).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
