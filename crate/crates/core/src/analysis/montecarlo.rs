//! Monte Carlo estimates for the marking lemmas and the polynomial tail
//! bound. Trial `t` draws vertex `v`'s coin from `(seed, t, v)`, so results
//! are independent of thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::degree::{degree_profile, neighborhood, normalized_degree};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::rng::CounterRng;

use super::weighted::WeightedHypergraph;

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.5758293035489004;

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let phat = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (phat + z2 / (2.0 * n_f)) / denom;
    let radius = z * (phat * (1.0 - phat) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (center - radius).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + radius).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailEstimate {
    pub trials: u64,
    pub threshold: f64,
    pub exceed_count: u64,
    pub point_estimate: f64,
    pub wilson_low_99: f64,
    pub wilson_upper_99: f64,
}

impl TailEstimate {
    pub fn from_counts(trials: u64, threshold: f64, exceed_count: u64) -> Self {
        let (lo, hi) = wilson_interval(exceed_count, trials, Z99);
        TailEstimate {
            trials,
            threshold,
            exceed_count,
            point_estimate: if trials == 0 { 0.0 } else { exceed_count as f64 / trials as f64 },
            wilson_low_99: lo,
            wilson_upper_99: hi,
        }
    }

    /// Whether `value` lies inside the 99% interval.
    pub fn covers(&self, value: f64) -> bool {
        self.wilson_low_99 <= value && value <= self.wilson_upper_99
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidConfig(format!("probability {p} outside (0, 1]")));
    }
    Ok(())
}

fn count_hits(trials: u64, seed: u64, hit: impl Fn(CounterRng) -> bool + Sync) -> u64 {
    let base = CounterRng::new(seed);
    (0..trials).into_par_iter().filter(|&t| hit(base.derive(t))).count() as u64
}

/// Frequency of `S(H, w, p) > threshold` over independent `p`-colorings.
pub fn tail_experiment(wh: &WeightedHypergraph, p: f64, threshold: f64, trials: u64, seed: u64) -> Result<TailEstimate> {
    check_trials(trials)?;
    check_p(p)?;
    let exceed = count_hits(trials, seed, |rng| {
        let s: f64 = wh
            .weighted_edges()
            .filter(|(e, _)| e.iter().all(|v| rng.bernoulli(v as u64, p)))
            .map(|(_, w)| w)
            .sum();
        s > threshold
    });
    Ok(TailEstimate::from_counts(trials, threshold, exceed))
}

/// `Pr[some vertex of x is unmarked | all of x marked]`: with `x` forced
/// marked, the frequency that some edge meeting `x` has every vertex outside
/// `x` marked.
pub fn estimate_unmark_given_marked(h: &Hypergraph, x: &VertexSet, p: f64, trials: u64, seed: u64) -> Result<TailEstimate> {
    check_trials(trials)?;
    check_p(p)?;
    if let Some(e) = h.edges().iter().find(|e| e.is_subset_of(x)) {
        return Err(Error::Precondition(format!("edge {e} lies inside {x}")));
    }
    if x.len() >= h.dimension().max(1) {
        return Err(Error::Precondition(format!("|x| = {} must be below the dimension {}", x.len(), h.dimension())));
    }
    let outside: Vec<VertexSet> = h
        .edges()
        .iter()
        .filter(|e| !e.is_disjoint(x))
        .map(|e| e.difference(x))
        .collect();
    let exceed = count_hits(trials, seed, |rng| {
        outside.iter().any(|rest| rest.iter().all(|v| rng.bernoulli(v as u64, p)))
    });
    Ok(TailEstimate::from_counts(trials, 0.0, exceed))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeighborhoodHit {
    pub estimate: TailEstimate,
    /// `d_j(x) / Δ(h)`.
    pub epsilon: f64,
    /// `2^{d+1}`.
    pub a: f64,
    /// `(1/4)(ε/a)^j`.
    pub paper_bound: f64,
}

/// Frequency that one full marking round adds every vertex of some
/// `Y ∈ N_j(x)`: all of `Y` marked and none of it unmarked by a fully
/// marked edge.
pub fn estimate_neighborhood_hit(
    h: &Hypergraph,
    x: &VertexSet,
    j: usize,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<NeighborhoodHit> {
    check_trials(trials)?;
    check_p(p)?;
    let targets = neighborhood(h, x, j)?;
    if targets.is_empty() {
        return Err(Error::Precondition(format!("N_{j}({x}) is empty")));
    }
    let relevant: VertexSet = targets.iter().flat_map(|y| y.iter()).collect();
    // Edges that can unmark a vertex of some target.
    let blockers: Vec<&VertexSet> = h.edges().iter().filter(|e| !e.is_disjoint(&relevant)).collect();
    let exceed = count_hits(trials, seed, |rng| {
        let marked = |v: u32| rng.bernoulli(v as u64, p);
        let full: Vec<&VertexSet> = blockers.iter().copied().filter(|e| e.iter().all(marked)).collect();
        targets
            .iter()
            .any(|y| y.iter().all(|v| marked(v) && !full.iter().any(|e| e.contains(v))))
    });
    let prof = degree_profile(h)?;
    let epsilon = normalized_degree(h, x, j).value() / prof.delta;
    let a = 2f64.powi(prof.dim as i32 + 1);
    Ok(NeighborhoodHit {
        estimate: TailEstimate::from_counts(trials, 0.0, exceed),
        epsilon,
        a,
        paper_bound: 0.25 * (epsilon / a).powi(j as i32),
    })
}
