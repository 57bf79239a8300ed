//! Seeded random instance generators.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};
use crate::rng::CounterRng;

/// Candidate edges are listed explicitly only below this count.
pub const ENUMERATION_CAP: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Every edge has exactly `d` vertices.
    UniformD { d: usize },
    /// Edge sizes uniform in `lo..=hi`; no edge contains another.
    MixedDims { lo: usize, hi: usize },
    /// `d`-uniform, any two edges share at most one vertex.
    Linear { d: usize },
}

impl GenKind {
    fn dims(self) -> (usize, usize) {
        match self {
            GenKind::UniformD { d } | GenKind::Linear { d } => (d, d),
            GenKind::MixedDims { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenSize {
    Edges(usize),
    /// Each candidate edge is kept independently with this probability.
    Probability(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub n: Vertex,
    pub kind: GenKind,
    pub size: GenSize,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        let (lo, hi) = self.kind.dims();
        if lo < 2 || lo > hi {
            return Err(Error::InvalidConfig(format!("dimension range {lo}..={hi} invalid (need 2 <= lo <= hi)")));
        }
        if hi > self.n as usize {
            return Err(Error::InvalidConfig(format!("dimension {hi} exceeds n = {}", self.n)));
        }
        if let GenSize::Probability(q) = self.size {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidConfig(format!("edge probability {q} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(x) => x / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Accepts or rejects candidates against the kind's structural constraint.
struct Filter {
    kind: GenKind,
    seen: FxHashSet<Vec<Vertex>>,
    pairs: FxHashSet<(Vertex, Vertex)>,
    kept: Vec<VertexSet>,
}

impl Filter {
    fn new(kind: GenKind) -> Self {
        Filter { kind, seen: FxHashSet::default(), pairs: FxHashSet::default(), kept: Vec::new() }
    }

    fn offer(&mut self, e: VertexSet) -> bool {
        if self.seen.contains(e.as_slice()) {
            return false;
        }
        match self.kind {
            GenKind::UniformD { .. } => {}
            GenKind::MixedDims { .. } => {
                if self.kept.iter().any(|f| f.is_subset_of(&e) || e.is_subset_of(f)) {
                    return false;
                }
            }
            GenKind::Linear { .. } => {
                let ids = e.as_slice();
                let pairs: Vec<(Vertex, Vertex)> = (0..ids.len())
                    .flat_map(|a| ((a + 1)..ids.len()).map(move |b| (ids[a], ids[b])))
                    .collect();
                if pairs.iter().any(|p| self.pairs.contains(p)) {
                    return false;
                }
                self.pairs.extend(pairs);
            }
        }
        self.seen.insert(e.as_slice().to_vec());
        self.kept.push(e);
        true
    }
}

fn candidate_count(n: Vertex, lo: usize, hi: usize) -> u128 {
    (lo..=hi).fold(0u128, |acc, k| acc.saturating_add(binomial(n as u128, k as u128)))
}

fn all_subsets(n: Vertex, lo: usize, hi: usize) -> Vec<VertexSet> {
    let ids: Vec<Vertex> = (1..=n).collect();
    let mut out = Vec::new();
    for k in lo..=hi {
        crate::analysis::for_each_subset_of_size(&ids, k, |s| out.push(VertexSet::from_sorted(s.to_vec())));
    }
    out
}

fn random_subset(rng: &mut ChaCha8Rng, n: Vertex, k: usize) -> VertexSet {
    index::sample(rng, n as usize, k).into_iter().map(|i| i as Vertex + 1).collect()
}

/// Draws a hypergraph according to `spec`. The result is normalized and
/// identical for identical specs.
pub fn gen(spec: &GenSpec) -> Result<Hypergraph> {
    spec.validate()?;
    let (lo, hi) = spec.kind.dims();
    let n = spec.n;
    let mut rng = CounterRng::new(spec.seed).derive(0x67656e).seeded();
    let total = candidate_count(n, lo, hi);
    let mut filter = Filter::new(spec.kind);

    match spec.size {
        GenSize::Probability(q) => {
            if total > ENUMERATION_CAP {
                return Err(Error::Infeasible(format!(
                    "{total} candidate edges; edge-probability mode needs at most {ENUMERATION_CAP}"
                )));
            }
            let mut candidates = all_subsets(n, lo, hi);
            candidates.shuffle(&mut rng);
            for e in candidates {
                if rng.gen_bool(q) {
                    filter.offer(e);
                }
            }
        }
        GenSize::Edges(m) => {
            if m as u128 > total {
                return Err(Error::Infeasible(format!("asked for {m} edges, only {total} candidates exist")));
            }
            if matches!(spec.kind, GenKind::UniformD { .. }) && total <= ENUMERATION_CAP {
                let mut candidates = all_subsets(n, lo, hi);
                let (chosen, _) = candidates.partial_shuffle(&mut rng, m);
                for e in chosen.iter() {
                    filter.offer(e.clone());
                }
            } else {
                let budget = 100 * m as u64 + 10_000;
                let mut attempts = 0u64;
                while filter.kept.len() < m {
                    if attempts == budget {
                        return Err(Error::Infeasible(format!(
                            "placed {} of {m} edges after {budget} attempts",
                            filter.kept.len()
                        )));
                    }
                    attempts += 1;
                    let k = rng.gen_range(lo..=hi);
                    filter.offer(random_subset(&mut rng, n, k));
                }
            }
        }
    }
    let mut edges = filter.kept;
    edges.sort();
    Ok(Hypergraph::from_parts(n, VertexSet::range(1, n), edges).normalize())
}
