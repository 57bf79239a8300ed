use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use hmis_core::analysis::{
    estimate_neighborhood_hit, estimate_unmark_given_marked, kelsen_constants, migration_hypergraph, tail_experiment,
    TailEstimate, WeightedHypergraph,
};
use hmis_core::bl::bl_probability;
use hmis_core::degree::degree_profile;
use hmis_core::{Hypergraph, Vertex, VertexSet};

use crate::{read_hypergraph, report_config};

pub const CSV_HEADER: &str = "experiment,params,trials,estimate,wilson_low,wilson_high,paper_bound";

#[derive(Args, Debug, Serialize)]
pub struct ExperimentArgs {
    #[command(subcommand)]
    kind: Kind,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Every estimate is a pure function of the seed.
    #[arg(long)]
    seed: u64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    /// Pr[S > threshold] with unit weights; the default threshold is k(H)·D.
    Tail {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Pr[some vertex of x unmarked | x marked]; claimed below 1/2.
    Lemma1 {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<Vertex>,
        /// Defaults to BL's 1/(2^{d+1} Δ).
        #[arg(long)]
        p: Option<f64>,
    },
    /// Pr[some Y in N_j(x) is added in one round]; claimed at least (1/4)(ε/a)^j.
    Lemma2 {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<Vertex>,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Tail of the migration polynomial at threshold k(H')·D(H').
    Migration {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<Vertex>,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
}

pub struct Row {
    pub experiment: &'static str,
    pub params: String,
    pub estimate: TailEstimate,
    pub paper_bound: Option<f64>,
}

impl Row {
    pub fn csv(&self) -> String {
        let bound = self.paper_bound.map(|b| format!("{b:e}")).unwrap_or_default();
        format!(
            "{},\"{}\",{},{},{},{},{}",
            self.experiment,
            self.params.replace('"', "'"),
            self.estimate.trials,
            self.estimate.point_estimate,
            self.estimate.wilson_low_99,
            self.estimate.wilson_upper_99,
            bound
        )
    }
}

fn bl_p(h: &Hypergraph) -> Result<f64> {
    let prof = degree_profile(h)?;
    Ok(bl_probability(prof.dim, prof.delta))
}

fn vertex_set(h: &Hypergraph, x: &[Vertex]) -> Result<VertexSet> {
    let s = VertexSet::from(x.to_vec());
    if s.len() != x.len() {
        bail!("--x lists a vertex twice");
    }
    if let Some(v) = s.iter().find(|&v| !h.vertices().contains(v)) {
        bail!("vertex {v} of --x is not in the hypergraph");
    }
    Ok(s)
}

/// `min(1, p(H))` and `k(H)·D(H, w, p)` for a weighted hypergraph.
fn kelsen_threshold(wh: &WeightedHypergraph, p: f64, delta: Option<f64>) -> Result<(f64, f64, f64)> {
    let c = kelsen_constants(wh.base(), delta)?;
    let d = wh.eval_d(p);
    let threshold = c.k_h_log2.exp2() * d;
    Ok((threshold, c.p_h_log2.exp2().min(1.0), c.delta_param))
}

pub fn run(args: &ExperimentArgs) -> Result<()> {
    let (input, common) = match &args.kind {
        Kind::Tail { input, common, .. }
        | Kind::Lemma1 { input, common, .. }
        | Kind::Lemma2 { input, common, .. }
        | Kind::Migration { input, common, .. } => (input, common),
    };
    let (trials, seed) = (common.trials, common.seed);
    let h = read_hypergraph(input)?.normalize();
    report_config("experiment", serde_json::to_value(args)?, Some(&h));

    let row = match &args.kind {
        Kind::Tail { p, threshold, delta, .. } => {
            let wh = WeightedHypergraph::unit(h.clone());
            let (threshold, bound, params) = match threshold {
                Some(t) => (*t, None, format!("p={p};threshold={t}")),
                None => {
                    let (t, b, dl) = kelsen_threshold(&wh, *p, *delta)?;
                    (t, Some(b), format!("p={p};threshold=k*D={t};delta={dl}"))
                }
            };
            Row { experiment: "tail", params, estimate: tail_experiment(&wh, *p, threshold, trials, seed)?, paper_bound: bound }
        }
        Kind::Lemma1 { x, p, .. } => {
            let x = vertex_set(&h, x)?;
            let p = match p {
                Some(p) => *p,
                None => bl_p(&h)?,
            };
            Row {
                experiment: "lemma1",
                params: format!("x={x};p={p}"),
                estimate: estimate_unmark_given_marked(&h, &x, p, trials, seed)?,
                paper_bound: Some(0.5),
            }
        }
        Kind::Lemma2 { x, j, p, .. } => {
            let x = vertex_set(&h, x)?;
            let p = match p {
                Some(p) => *p,
                None => bl_p(&h)?,
            };
            let r = estimate_neighborhood_hit(&h, &x, *j, p, trials, seed)?;
            Row {
                experiment: "lemma2",
                params: format!("x={x};j={j};p={p};epsilon={};a={}", r.epsilon, r.a),
                estimate: r.estimate,
                paper_bound: Some(r.paper_bound),
            }
        }
        Kind::Migration { x, j, k, p, delta, .. } => {
            let x = vertex_set(&h, x)?;
            let p = match p {
                Some(p) => *p,
                None => bl_p(&h)?,
            };
            let wh = migration_hypergraph(&h, &x, *j, *k)?;
            if wh.base().num_edges() == 0 {
                bail!("the migration hypergraph for x = {x}, j = {j}, k = {k} has no edges");
            }
            let (threshold, bound, dl) = kelsen_threshold(&wh, p, *delta)?;
            Row {
                experiment: "migration",
                params: format!("x={x};j={j};k={k};p={p};threshold=k*D={threshold};delta={dl};edges={}", wh.base().num_edges()),
                estimate: tail_experiment(&wh, p, threshold, trials, seed)?,
                paper_bound: Some(bound),
            }
        }
    };
    println!("{CSV_HEADER}");
    println!("{}", row.csv());
    Ok(())
}
