//! Beame–Luby random-marking MIS.
//!
//! Each round marks every live vertex independently with probability `p`,
//! unmarks every vertex of a fully marked edge, and adds the surviving marks
//! to the independent set. The added vertices are then cut out of the
//! hypergraph: edges shrink, supersets are dropped, and each singleton edge
//! `{v}` is removed together with `v`, which can never join the set.
//!
//! With `p = 1/(2^{d+1} Δ)` on a dimension-`d` hypergraph the loop ends after
//! polylogarithmically many rounds for constant `d`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::degree_profile;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Mask, Vertex, VertexSet};
use crate::rng::CounterRng;

/// How the marking probability evolves across rounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PMode {
    /// Recompute `Δ` and `d` at the start of every round.
    #[default]
    Recompute,
    /// Compute `p` once from the input, as the reference pseudocode does.
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlConfig {
    pub seed: u64,
    pub p_mode: PMode,
    pub p_override: Option<f64>,
    /// `None` selects [`default_max_rounds`].
    pub max_rounds: Option<usize>,
}

impl BlConfig {
    pub fn new(seed: u64) -> Self {
        BlConfig { seed, p_mode: PMode::Recompute, p_override: None, max_rounds: None }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.p_override {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidConfig(format!("p override {p} outside (0, 1]")));
            }
        }
        if self.max_rounds == Some(0) {
            return Err(Error::InvalidConfig("max_rounds must be at least 1".into()));
        }
        Ok(())
    }
}

/// `200 · (1 + ⌈log₂ n⌉)³`.
pub fn default_max_rounds(n: usize) -> usize {
    let lg = if n <= 1 { 0 } else { (usize::BITS - (n - 1).leading_zeros()) as usize };
    200 * (1 + lg).pow(3)
}

/// `1 / (2^{d+1} Δ)`.
pub fn bl_probability(dim: usize, delta: f64) -> f64 {
    1.0 / (2f64.powi(dim as i32 + 1) * delta)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    #[default]
    Ok,
    RoundLimitExceeded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlRoundRecord {
    pub round: usize,
    pub marked: VertexSet,
    pub unmarked: VertexSet,
    pub added: VertexSet,
    pub remaining_vertices: usize,
    pub remaining_edges: usize,
    pub delta: f64,
    pub p_used: f64,
    /// Vertices dropped with their singleton edge during cleanup.
    #[serde(skip)]
    pub excluded: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub mis: VertexSet,
    pub rounds: Vec<BlRoundRecord>,
    pub status: Status,
    /// Vertices of singleton edges present in the input.
    #[serde(skip)]
    pub excluded_upfront: VertexSet,
}

impl SolverResult {
    /// One JSON object per round.
    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rounds {
            out.push_str(&serde_json_line(r));
        }
        out
    }
}

pub(crate) fn serde_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("trace records serialize");
    s.push('\n');
    s
}

/// Effect of one mark/unmark/cleanup round.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundOutcome {
    pub marked: VertexSet,
    pub unmarked: VertexSet,
    pub added: VertexSet,
    pub excluded: VertexSet,
    pub next: Hypergraph,
}

impl RoundOutcome {
    pub fn record(&self, round: usize, delta: f64, p_used: f64) -> BlRoundRecord {
        BlRoundRecord {
            round,
            marked: self.marked.clone(),
            unmarked: self.unmarked.clone(),
            added: self.added.clone(),
            remaining_vertices: self.next.num_vertices(),
            remaining_edges: self.next.num_edges(),
            delta,
            p_used,
            excluded: self.excluded.clone(),
        }
    }
}

/// Marks each vertex of `h` with probability `p` using `rng` keyed by
/// vertex id.
pub fn sample_marks(h: &Hypergraph, p: f64, rng: CounterRng) -> VertexSet {
    let ids: Vec<Vertex> = h
        .vertices()
        .as_slice()
        .par_iter()
        .copied()
        .filter(|&v| rng.bernoulli(v as u64, p))
        .collect();
    VertexSet::from_sorted(ids)
}

/// One BL round with freshly sampled marks. `h` must be normalized.
pub fn bl_round(h: &Hypergraph, p: f64, rng: CounterRng) -> RoundOutcome {
    let marked = sample_marks(h, p, rng);
    bl_round_with_marks(h, &marked)
}

/// One BL round with the given marks. `h` must be normalized.
pub fn bl_round_with_marks(h: &Hypergraph, marked: &VertexSet) -> RoundOutcome {
    let universe = h.universe();
    let mark_mask = Mask::of(universe, marked);
    let full: Vec<&VertexSet> = h
        .edges()
        .par_iter()
        .filter(|e| e.iter().all(|v| mark_mask.get(v)))
        .collect();
    let mut unmark_mask = Mask::new(universe);
    for e in &full {
        for v in e.iter() {
            unmark_mask.set(v);
        }
    }
    let unmarked = VertexSet::from_sorted(marked.iter().filter(|&v| unmark_mask.get(v)).collect());
    let added = VertexSet::from_sorted(marked.iter().filter(|&v| !unmark_mask.get(v)).collect());
    let (next, excluded) = remove_added(h, &added);
    RoundOutcome { marked: marked.clone(), unmarked, added, excluded, next }
}

/// Cuts `added` out of `h`, normalizes, then drops singleton edges with
/// their vertices. Returns the new hypergraph and the dropped vertices.
fn remove_added(h: &Hypergraph, added: &VertexSet) -> (Hypergraph, VertexSet) {
    let universe = h.universe();
    let add_mask = Mask::of(universe, added);
    let edges: Vec<VertexSet> = h
        .edges()
        .iter()
        .map(|e| {
            let kept: Vec<Vertex> = e.iter().filter(|&v| !add_mask.get(v)).collect();
            debug_assert!(!kept.is_empty(), "added set swallowed an edge");
            VertexSet::from_sorted(kept)
        })
        .collect();
    let vertices = VertexSet::from_sorted(h.vertices().iter().filter(|&v| !add_mask.get(v)).collect());
    let shrunk = Hypergraph::from_parts(universe, vertices, edges).normalize();
    drop_singletons(&shrunk)
}

/// Removes each singleton edge `{v}` and `v` itself. `h` must be normalized,
/// so `v` lies in no other edge.
pub(crate) fn drop_singletons(h: &Hypergraph) -> (Hypergraph, VertexSet) {
    let mut gone = Mask::new(h.universe());
    let mut excluded = Vec::new();
    let mut edges = Vec::with_capacity(h.num_edges());
    for e in h.edges() {
        if e.len() == 1 {
            let v = e.as_slice()[0];
            gone.set(v);
            excluded.push(v);
        } else {
            edges.push(e.clone());
        }
    }
    if excluded.is_empty() {
        return (h.clone(), VertexSet::new());
    }
    let vertices = VertexSet::from_sorted(h.vertices().iter().filter(|&v| !gone.get(v)).collect());
    (Hypergraph::from_parts(h.universe(), vertices, edges), VertexSet::from(excluded))
}

/// Runs BL to completion or until the round cap.
pub fn run_bl(h: &Hypergraph, cfg: &BlConfig) -> Result<SolverResult> {
    cfg.validate()?;
    let (mut cur, excluded_upfront) = drop_singletons(&h.normalize());
    let max_rounds = cfg.max_rounds.unwrap_or_else(|| default_max_rounds(h.num_vertices()));
    let base = CounterRng::new(cfg.seed);

    let fixed_p = match (cfg.p_override, cfg.p_mode) {
        (Some(p), _) => Some(p),
        (None, PMode::Fixed) if !cur.is_edge_free() => {
            let prof = degree_profile(&cur)?;
            Some(bl_probability(prof.dim, prof.delta))
        }
        _ => None,
    };

    let mut added_all: Vec<Vertex> = Vec::new();
    let mut rounds = Vec::new();
    let mut status = Status::Ok;
    while !cur.vertices().is_empty() {
        if rounds.len() == max_rounds {
            status = Status::RoundLimitExceeded;
            break;
        }
        let round = rounds.len() + 1;
        if cur.is_edge_free() {
            // Nothing can block any remaining vertex.
            let all = cur.vertices().clone();
            added_all.extend(all.iter());
            rounds.push(BlRoundRecord {
                round,
                marked: all.clone(),
                unmarked: VertexSet::new(),
                added: all,
                remaining_vertices: 0,
                remaining_edges: 0,
                delta: 0.0,
                p_used: 1.0,
                excluded: VertexSet::new(),
            });
            break;
        }
        let prof = degree_profile(&cur)?;
        let p = fixed_p.unwrap_or_else(|| bl_probability(prof.dim, prof.delta));
        let outcome = bl_round(&cur, p, base.derive(round as u64));
        added_all.extend(outcome.added.iter());
        rounds.push(outcome.record(round, prof.delta, p));
        cur = outcome.next;
        debug_assert!(h.is_independent(&VertexSet::from(added_all.clone())));
    }
    Ok(SolverResult { mis: VertexSet::from(added_all), rounds, status, excluded_upfront })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h0() -> Hypergraph {
        Hypergraph::new(5, vec![vec![1, 2, 3], vec![3, 4], vec![4, 5]]).unwrap()
    }

    #[test]
    fn fully_marked_edge_unmarks_everything() {
        let h = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        let out = bl_round_with_marks(&h, &VertexSet::from([1, 2]));
        assert_eq!(out.unmarked, VertexSet::from([1, 2]));
        assert!(out.added.is_empty());
        assert_eq!(out.next, h);
    }

    #[test]
    fn single_mark_shrinks_and_cleans_up() {
        let h = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        let out = bl_round_with_marks(&h, &VertexSet::from([1]));
        assert_eq!(out.added, VertexSet::from([1]));
        assert_eq!(out.excluded, VertexSet::from([2]));
        assert!(out.next.is_edge_free());
        assert!(out.next.vertices().is_empty());
    }

    #[test]
    fn no_marks_is_identity() {
        let out = bl_round_with_marks(&h0(), &VertexSet::new());
        assert!(out.added.is_empty() && out.unmarked.is_empty());
        assert_eq!(out.next, h0());
    }

    #[test]
    fn edge_free_finishes_in_one_round() {
        let res = run_bl(&Hypergraph::edge_free(10), &BlConfig::new(1)).unwrap();
        assert_eq!(res.mis, VertexSet::range(1, 10));
        assert_eq!(res.rounds.len(), 1);
        assert_eq!(res.status, Status::Ok);

        let cfg = BlConfig { p_override: Some(1.0), ..BlConfig::new(1) };
        let res = run_bl(&Hypergraph::edge_free(10), &cfg).unwrap();
        assert_eq!((res.rounds.len(), res.mis.len()), (1, 10));
    }

    #[test]
    fn pair_yields_one_endpoint() {
        let h = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        for seed in 0..20 {
            let res = run_bl(&h, &BlConfig::new(seed)).unwrap();
            assert_eq!(res.status, Status::Ok);
            assert!(res.mis == VertexSet::from([1]) || res.mis == VertexSet::from([2]));
        }
    }

    #[test]
    fn round_limit_is_reported() {
        let h = h0();
        let cfg = BlConfig { p_override: Some(1.0), max_rounds: Some(5), ..BlConfig::new(3) };
        let res = run_bl(&h, &cfg).unwrap();
        assert_eq!(res.status, Status::RoundLimitExceeded);
        assert_eq!(res.rounds.len(), 5);
        assert!(res.mis.is_empty());
    }

    #[test]
    fn fixed_mode_keeps_p() {
        let h = h0();
        let cfg = BlConfig { p_mode: PMode::Fixed, ..BlConfig::new(4) };
        let res = run_bl(&h, &cfg).unwrap();
        let p0 = bl_probability(3, 2.0);
        assert!(res.rounds.iter().filter(|r| r.delta > 0.0).all(|r| r.p_used == p0));
        assert!(h.is_maximal_independent(&res.mis));
    }

    #[test]
    fn singleton_input_edges_are_excluded() {
        let h = Hypergraph::new(4, vec![vec![2], vec![1, 3], vec![2, 4]]).unwrap();
        let res = run_bl(&h, &BlConfig::new(8)).unwrap();
        assert_eq!(res.excluded_upfront, VertexSet::from([2]));
        assert!(h.is_maximal_independent(&res.mis));
    }

    #[test]
    fn config_validation() {
        assert!(BlConfig { p_override: Some(0.0), ..BlConfig::new(0) }.validate().is_err());
        assert!(BlConfig { p_override: Some(1.5), ..BlConfig::new(0) }.validate().is_err());
        assert!(BlConfig { max_rounds: Some(0), ..BlConfig::new(0) }.validate().is_err());
    }

    #[test]
    fn default_round_cap() {
        assert_eq!(default_max_rounds(1), 200);
        assert_eq!(default_max_rounds(2), 200 * 8);
        assert_eq!(default_max_rounds(1024), 200 * 11 * 11 * 11);
        assert_eq!(default_max_rounds(1025), 200 * 12 * 12 * 12);
    }

    #[test]
    fn trace_field_names() {
        let res = run_bl(&h0(), &BlConfig::new(2)).unwrap();
        let first = res.trace_jsonl().lines().next().unwrap().to_string();
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["added", "delta", "marked", "p_used", "remaining_edges", "remaining_vertices", "round", "unmarked"]
        );
    }
}
