//! Sampled BL: solve a random low-dimension slice of the hypergraph with BL,
//! fix that slice's coloring permanently, and repeat on what is left.
//!
//! Each round samples `V'` with probability `p`. If the induced hypergraph
//! `H' = H[V']` has an edge larger than `d` the sample is rejected and
//! redrawn. Otherwise BL colors `V'`: its MIS `I'` is blue and `V' \ I'` is
//! red. Edges meeting a red vertex can never become fully blue and are
//! deleted; the surviving edges lose their blue vertices. Once fewer than
//! `1/p²` vertices remain the greedy solver finishes the residual.
//!
//! `p`, `d` and the stop threshold are fixed from the input size and never
//! recomputed. The asymptotic formulas are degenerate at practical sizes,
//! so `d` is clamped to at least 3 and every parameter can be overridden.

use serde::{Deserialize, Serialize};

use crate::baseline::{greedy_mis, VertexOrder};
use crate::bl::{run_bl, serde_json_line, BlConfig, PMode, Status};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Mask, Vertex, VertexSet};
use crate::rng::CounterRng;

pub const DEFAULT_MAX_RETRIES: usize = 20;
pub const MIN_DIMENSION_CAP: usize = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailPolicy {
    Abort,
    #[default]
    FallbackGreedy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SblConfig {
    pub seed: u64,
    pub alpha_override: Option<f64>,
    pub d_cap_override: Option<usize>,
    pub p_override: Option<f64>,
    pub stop_threshold_override: Option<usize>,
    pub max_retries_per_round: usize,
    /// `None` selects `⌈2 log n / p⌉`.
    pub max_rounds: Option<usize>,
    pub fail_policy: FailPolicy,
    /// Probability schedule of the inner BL runs.
    pub bl_p_mode: PMode,
}

impl SblConfig {
    pub fn new(seed: u64) -> Self {
        SblConfig {
            seed,
            alpha_override: None,
            d_cap_override: None,
            p_override: None,
            stop_threshold_override: None,
            max_retries_per_round: DEFAULT_MAX_RETRIES,
            max_rounds: None,
            fail_policy: FailPolicy::FallbackGreedy,
            bl_p_mode: PMode::Recompute,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.alpha_override {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidConfig(format!("alpha {a} must be positive")));
            }
        }
        if let Some(d) = self.d_cap_override {
            if d < 2 {
                return Err(Error::InvalidConfig(format!("dimension cap {d} must be at least 2")));
            }
        }
        if let Some(p) = self.p_override {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidConfig(format!("p override {p} outside (0, 1]")));
            }
        }
        if self.stop_threshold_override == Some(0) {
            return Err(Error::InvalidConfig("stop threshold must be positive".into()));
        }
        if self.max_rounds == Some(0) {
            return Err(Error::InvalidConfig("max_rounds must be at least 1".into()));
        }
        Ok(())
    }
}

/// Resolved parameters. All logarithms are base 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SblParams {
    pub n: usize,
    pub m: usize,
    pub alpha: Option<f64>,
    pub p: f64,
    /// Unclamped `log⁽²⁾n / (4 log⁽³⁾n)`, when defined.
    pub d_formula: Option<f64>,
    pub d: usize,
    pub d_clamped: bool,
    pub stop_threshold: usize,
    pub max_rounds: usize,
    pub beta: Option<f64>,
    /// `m <= n^β`; `None` when `β` is undefined at this `n`.
    pub within_edge_bound: Option<bool>,
}

pub fn derive_params(n: usize, m: usize, cfg: &SblConfig) -> Result<SblParams> {
    cfg.validate()?;
    if n < 2 {
        return Err(Error::Precondition(format!("parameter derivation needs n >= 2, got {n}")));
    }
    let lg = (n as f64).log2();
    let lg2 = lg.log2();
    let lg3 = lg2.log2();
    let iterated_ok = lg3 > 0.0 && lg3.is_finite();

    let (alpha, p) = match (cfg.p_override, cfg.alpha_override) {
        (Some(p), a) => (a, p),
        (None, Some(a)) => (Some(a), (-a * lg).exp2()),
        (None, None) if iterated_ok => {
            let a = 1.0 / lg3;
            (Some(a), (-a * lg).exp2())
        }
        (None, None) => {
            return Err(Error::DegenerateParams(format!(
                "log log log n = {lg3:.4} <= 0 at n = {n}; override p or alpha"
            )))
        }
    };
    if !(p > 0.0 && p < 1.0) && cfg.p_override.is_none() {
        return Err(Error::DegenerateParams(format!("derived p = {p} not in (0, 1)")));
    }

    let d_formula = iterated_ok.then(|| lg2 / (4.0 * lg3));
    let (d, d_clamped) = match (cfg.d_cap_override, d_formula) {
        (Some(d), _) => (d, false),
        (None, Some(f)) => {
            let floor = f.floor().max(0.0) as usize;
            (floor.max(MIN_DIMENSION_CAP), floor < MIN_DIMENSION_CAP)
        }
        (None, None) => {
            return Err(Error::DegenerateParams(format!(
                "dimension formula undefined at n = {n}; override the dimension cap"
            )))
        }
    };

    let stop_threshold = cfg.stop_threshold_override.unwrap_or_else(|| {
        let inv_sq = match (cfg.p_override, alpha) {
            (None, Some(a)) => (2.0 * a * lg).exp2(),
            _ => 1.0 / (p * p),
        };
        ceil_tolerant(inv_sq) as usize
    });
    let max_rounds = cfg.max_rounds.unwrap_or_else(|| ceil_tolerant(2.0 * lg / p) as usize).max(1);

    let (beta, within_edge_bound) = match edge_bound(n, m) {
        Some((b, ok)) => (Some(b), Some(ok)),
        None => (None, None),
    };

    Ok(SblParams { n, m, alpha, p, d_formula, d, d_clamped, stop_threshold, max_rounds, beta, within_edge_bound })
}

/// `β = log⁽²⁾n / (8 (log⁽³⁾n)²)` and whether `m <= n^β`; `None` where
/// `log⁽³⁾n <= 0`.
pub fn edge_bound(n: usize, m: usize) -> Option<(f64, bool)> {
    let lg = (n as f64).log2();
    let lg2 = lg.log2();
    let lg3 = lg2.log2();
    if !(lg3 > 0.0 && lg3.is_finite()) {
        return None;
    }
    let beta = lg2 / (8.0 * lg3 * lg3);
    Some((beta, m == 0 || (m as f64).log2() <= beta * lg + 1e-12))
}

/// `⌈x⌉`, ignoring float noise just above an integer.
fn ceil_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fallback {
    GreedyRan,
    BlDirectRan,
}

/// Why the sampling loop stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopExit {
    BelowThreshold,
    MaxRounds,
    GateExhausted,
    InnerRoundLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SblRoundRecord {
    pub round: usize,
    pub sampled: VertexSet,
    pub blue: VertexSet,
    pub red: VertexSet,
    pub induced_edges: usize,
    pub induced_dim: usize,
    /// Rejected samples before this one; non-zero means the round restarted.
    pub retries: usize,
    pub bl_rounds: usize,
    pub bl_status: Status,
    pub edges_removed_red: usize,
    pub edges_shrunk: usize,
    pub remaining_n: usize,
    pub remaining_m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SblResult {
    pub mis: VertexSet,
    pub rounds: Vec<SblRoundRecord>,
    pub fallback: Fallback,
    pub status: Status,
    pub loop_exit: Option<LoopExit>,
    pub retries_total: usize,
    pub params: Option<SblParams>,
    /// Vertex count of the hypergraph handed to the final greedy pass.
    pub residual_n: Option<usize>,
}

impl SblResult {
    pub fn trace_jsonl(&self) -> String {
        self.rounds.iter().map(serde_json_line).collect()
    }
}

/// Result of applying a permanent coloring of `sampled` to `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recolored {
    pub next: Hypergraph,
    pub red: VertexSet,
    pub edges_removed_red: usize,
    pub edges_shrunk: usize,
}

/// Deletes edges meeting `sampled \ blue`, removes `blue` from the rest,
/// drops `sampled` from the vertex set, and normalizes. Singleton edges are
/// kept. Fails if some edge lies entirely in `blue`.
pub fn apply_coloring(h: &Hypergraph, sampled: &VertexSet, blue: &VertexSet) -> Result<Recolored> {
    let universe = h.universe();
    let red = sampled.difference(blue);
    let red_mask = Mask::of(universe, &red);
    let blue_mask = Mask::of(universe, blue);
    let sampled_mask = Mask::of(universe, sampled);
    let mut edges = Vec::with_capacity(h.num_edges());
    let (mut removed, mut shrunk) = (0, 0);
    for e in h.edges() {
        if e.iter().any(|v| red_mask.get(v)) {
            removed += 1;
            continue;
        }
        let kept: Vec<Vertex> = e.iter().filter(|&v| !blue_mask.get(v)).collect();
        if kept.is_empty() {
            return Err(Error::InternalInvariant(format!("edge {e} became fully blue")));
        }
        if kept.len() < e.len() {
            shrunk += 1;
        }
        edges.push(VertexSet::from_sorted(kept));
    }
    let vertices = VertexSet::from_sorted(h.vertices().iter().filter(|&v| !sampled_mask.get(v)).collect());
    if let Some(e) = edges.iter().find(|e| e.iter().any(|v| sampled_mask.get(v))) {
        return Err(Error::InternalInvariant(format!("edge {e} still touches the sample")));
    }
    let next = Hypergraph::from_parts(universe, vertices, edges).normalize();
    Ok(Recolored { next, red, edges_removed_red: removed, edges_shrunk: shrunk })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SblRoundOutcome {
    pub blue: VertexSet,
    pub red: VertexSet,
    pub next: Hypergraph,
    pub record: SblRoundRecord,
}

fn bl_config_for(cfg: &SblConfig, rng: CounterRng) -> BlConfig {
    BlConfig { p_mode: cfg.bl_p_mode, ..BlConfig::new(rng.derive(0x626c).bits(0)) }
}

/// Runs BL on `H[sampled]` and applies the resulting coloring. The caller
/// has already checked the dimension gate.
pub fn sbl_round_with_sample(
    h: &Hypergraph,
    sampled: &VertexSet,
    bl_cfg: &BlConfig,
    round: usize,
    retries: usize,
) -> Result<SblRoundOutcome> {
    let induced = h.induce(sampled);
    let bl = run_bl(&induced, bl_cfg)?;
    let blue = bl.mis;
    let recolored = apply_coloring(h, sampled, &blue)?;
    let record = SblRoundRecord {
        round,
        sampled: sampled.clone(),
        blue: blue.clone(),
        red: recolored.red.clone(),
        induced_edges: induced.num_edges(),
        induced_dim: induced.dimension(),
        retries,
        bl_rounds: bl.rounds.len(),
        bl_status: bl.status,
        edges_removed_red: recolored.edges_removed_red,
        edges_shrunk: recolored.edges_shrunk,
        remaining_n: recolored.next.num_vertices(),
        remaining_m: recolored.next.num_edges(),
    };
    Ok(SblRoundOutcome { blue, red: recolored.red, next: recolored.next, record })
}

/// One sampling round. Each rejected sample consumes a fresh stream;
/// after `max_retries_per_round` rejections the round fails with
/// [`Error::DimensionGateExhausted`].
pub fn sbl_round(
    h: &Hypergraph,
    p: f64,
    d: usize,
    cfg: &SblConfig,
    rng: CounterRng,
    round: usize,
) -> Result<SblRoundOutcome> {
    let attempts = cfg.max_retries_per_round + 1;
    for attempt in 0..attempts {
        let stream = rng.derive(attempt as u64);
        let sampled = VertexSet::from_sorted(
            h.vertices().iter().filter(|&v| stream.bernoulli(v as u64, p)).collect(),
        );
        if induced_dimension(h, &sampled) > d {
            continue;
        }
        return sbl_round_with_sample(h, &sampled, &bl_config_for(cfg, stream), round, attempt);
    }
    Err(Error::DimensionGateExhausted { round, attempts })
}

fn induced_dimension(h: &Hypergraph, sampled: &VertexSet) -> usize {
    let mask = Mask::of(h.universe(), sampled);
    h.edges()
        .iter()
        .filter(|e| e.iter().all(|v| mask.get(v)))
        .map(VertexSet::len)
        .max()
        .unwrap_or(0)
}

pub fn run_sbl(h: &Hypergraph, cfg: &SblConfig) -> Result<SblResult> {
    cfg.validate()?;
    let original = h.normalize();
    let base = CounterRng::new(cfg.seed);
    let params = if original.num_vertices() >= 2 {
        Some(derive_params(original.num_vertices(), original.num_edges(), cfg)?)
    } else {
        None
    };

    let direct = params.as_ref().is_none_or(|p| original.dimension() <= p.d);
    if direct {
        let bl = run_bl(&original, &bl_config_for(cfg, base.derive(u64::MAX)))?;
        return Ok(SblResult {
            mis: bl.mis,
            rounds: Vec::new(),
            fallback: Fallback::BlDirectRan,
            status: bl.status,
            loop_exit: None,
            retries_total: 0,
            params,
            residual_n: None,
        });
    }
    let params = params.expect("checked above");

    let mut cur = original.clone();
    let mut blue_all: Vec<Vertex> = Vec::new();
    let mut rounds: Vec<SblRoundRecord> = Vec::new();
    let mut retries_total = 0;
    let mut loop_exit = LoopExit::BelowThreshold;
    while cur.num_vertices() >= params.stop_threshold {
        if rounds.len() == params.max_rounds {
            loop_exit = LoopExit::MaxRounds;
            break;
        }
        let round = rounds.len() + 1;
        let outcome = match sbl_round(&cur, params.p, params.d, cfg, base.derive(round as u64), round) {
            Ok(o) => o,
            Err(Error::DimensionGateExhausted { round, attempts }) => {
                retries_total += attempts;
                match cfg.fail_policy {
                    FailPolicy::Abort => return Err(Error::DimensionGateExhausted { round, attempts }),
                    FailPolicy::FallbackGreedy => {
                        loop_exit = LoopExit::GateExhausted;
                        break;
                    }
                }
            }
            Err(e) => return Err(e),
        };
        retries_total += outcome.record.retries;
        blue_all.extend(outcome.blue.iter());
        let inner_limit = outcome.record.bl_status == Status::RoundLimitExceeded;
        rounds.push(outcome.record);
        cur = outcome.next;
        debug_assert!(original.is_independent(&VertexSet::from(blue_all.clone())));
        if inner_limit {
            return Ok(SblResult {
                mis: VertexSet::from(blue_all),
                rounds,
                fallback: Fallback::GreedyRan,
                status: Status::RoundLimitExceeded,
                loop_exit: Some(LoopExit::InnerRoundLimit),
                retries_total,
                params: Some(params),
                residual_n: None,
            });
        }
    }

    let residual_n = cur.num_vertices();
    let tail = greedy_mis(&cur, &VertexOrder::ascending(&cur));
    blue_all.extend(tail.iter());
    Ok(SblResult {
        mis: VertexSet::from(blue_all),
        rounds,
        fallback: Fallback::GreedyRan,
        status: Status::Ok,
        loop_exit: Some(loop_exit),
        retries_total,
        params: Some(params),
        residual_n: Some(residual_n),
    })
}
