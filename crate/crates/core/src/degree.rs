//! Neighborhoods and normalized degrees.
//!
//! For a non-empty vertex set `x`, `N_j(x)` is the family of `j`-sets `y`
//! disjoint from `x` with `x ∪ y` an edge, and `d_j(x) = |N_j(x)|^(1/j)`.
//! `Δ_i` is the largest `d_{i-|x|}(x)` over all `x` with `0 < |x| < i`,
//! and `Δ` the largest `Δ_i` over `2 <= i <= d`.
//!
//! Only subsets of edges can have a non-zero degree, so `degree_profile`
//! enumerates the proper subsets of every edge instead of all of `2^V`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::Hash;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{is_sorted_subset, Hypergraph, Vertex, VertexSet};

/// `count^(1/j)` kept as an exact pair so ties compare exactly.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormDegree {
    pub count: u64,
    pub j: u32,
}

impl NormDegree {
    pub const ZERO: NormDegree = NormDegree { count: 0, j: 1 };

    pub fn value(self) -> f64 {
        match (self.count, self.j) {
            (0, _) => 0.0,
            (c, 1) => c as f64,
            (c, 2) => (c as f64).sqrt(),
            (c, j) => (c as f64).powf(1.0 / j as f64),
        }
    }
}

impl Ord for NormDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.count == 0 || other.count == 0 {
            return self.count.min(1).cmp(&other.count.min(1));
        }
        // a^(1/j) vs b^(1/k)  <=>  a^k vs b^j
        let lhs = (self.count as u128).checked_pow(other.j);
        let rhs = (other.count as u128).checked_pow(self.j);
        match (lhs, rhs) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => {
                let l = (self.count as f64).ln() / self.j as f64;
                let r = (other.count as f64).ln() / other.j as f64;
                l.total_cmp(&r)
            }
        }
    }
}

impl PartialEq for NormDegree {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for NormDegree {}

impl PartialOrd for NormDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Set `x` attaining `Δ_i`, with its neighborhood size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeWitness {
    pub x: VertexSet,
    pub degree: NormDegree,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeProfile {
    pub dim: usize,
    pub delta_i: BTreeMap<usize, f64>,
    pub delta: f64,
    #[serde(skip)]
    pub exact: BTreeMap<usize, NormDegree>,
    #[serde(skip)]
    pub witnesses: BTreeMap<usize, DegreeWitness>,
}

impl DegreeProfile {
    /// Dimension `i` attaining `Δ` (smallest on ties).
    pub fn argmax_dim(&self) -> usize {
        let mut best = (2, NormDegree::ZERO);
        for (&i, &d) in &self.exact {
            if d > best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    pub fn delta_exact(&self) -> NormDegree {
        self.exact.values().copied().max().unwrap_or(NormDegree::ZERO)
    }
}

/// `N_j(x, h)`: all `j`-sets `y` with `x ∩ y = ∅` and `x ∪ y ∈ E`.
pub fn neighborhood(h: &Hypergraph, x: &VertexSet, j: usize) -> Result<Vec<VertexSet>> {
    if x.is_empty() {
        return Err(Error::Precondition("neighborhood of the empty set".into()));
    }
    let d = h.dimension();
    let hi = d.saturating_sub(x.len());
    if j < 1 || j > hi {
        return Err(Error::BadArity { j, lo: 1, hi });
    }
    let mut out: Vec<VertexSet> = h
        .edges()
        .iter()
        .filter(|e| e.len() == x.len() + j && x.is_subset_of(e))
        .map(|e| e.difference(x))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `|N_j(x, h)|` without arity checks; 0 whenever the arity is out of range.
/// Repeated edges are counted with multiplicity (normalize first).
pub fn neighborhood_size(h: &Hypergraph, x: &VertexSet, j: usize) -> usize {
    if j == 0 {
        return 0;
    }
    let size = x.len() + j;
    h.edges()
        .iter()
        .filter(|e| e.len() == size && is_sorted_subset(x.as_slice(), e.as_slice()))
        .count()
}

pub fn normalized_degree(h: &Hypergraph, x: &VertexSet, j: usize) -> NormDegree {
    NormDegree { count: neighborhood_size(h, x, j) as u64, j: j as u32 }
}

pub fn degree_profile(h: &Hypergraph) -> Result<DegreeProfile> {
    degree_profile_with_budget(h, u128::MAX)
}

/// As [`degree_profile`], refusing instances whose subset enumeration would
/// exceed `budget` evaluations.
pub fn degree_profile_with_budget(h: &Hypergraph, budget: u128) -> Result<DegreeProfile> {
    let dim = h.dimension();
    if !h.edges().iter().any(|e| e.len() >= 2) {
        return Err(Error::NoEdges);
    }
    let needed = h.subset_work();
    if needed > budget {
        return Err(Error::WorkBudget { needed, budget });
    }

    let packable = h.universe() < (1 << PACK_BITS) && dim <= MAX_PACKED + 1;
    let best = if packable {
        maxima::<u128>(h, dim)
    } else {
        maxima::<Box<[Vertex]>>(h, dim)
    };

    let mut delta_i = BTreeMap::new();
    let mut exact = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for (i, slot) in best.into_iter().enumerate().skip(2) {
        let (deg, x) = slot.unwrap_or((NormDegree::ZERO, VertexSet::new()));
        delta_i.insert(i, deg.value());
        exact.insert(i, deg);
        witnesses.insert(i, DegreeWitness { x, degree: deg });
    }
    let delta_exact = exact.values().copied().max().unwrap_or(NormDegree::ZERO);
    Ok(DegreeProfile { dim, delta_i, delta: delta_exact.value(), exact, witnesses })
}

const PACK_BITS: u32 = 21;
const MAX_PACKED: usize = 6;

trait SubsetKey: Hash + Eq + Sized {
    fn from_ids(ids: &[Vertex]) -> Self;
    fn to_set(&self) -> VertexSet;
}

impl SubsetKey for u128 {
    fn from_ids(ids: &[Vertex]) -> Self {
        ids.iter().fold(0u128, |acc, &v| (acc << PACK_BITS) | v as u128)
    }

    fn to_set(&self) -> VertexSet {
        let mut ids = Vec::new();
        let mut k = *self;
        let mask = (1u128 << PACK_BITS) - 1;
        while k != 0 {
            ids.push((k & mask) as Vertex);
            k >>= PACK_BITS;
        }
        VertexSet::from(ids)
    }
}

impl SubsetKey for Box<[Vertex]> {
    fn from_ids(ids: &[Vertex]) -> Self {
        ids.into()
    }

    fn to_set(&self) -> VertexSet {
        VertexSet::from(self.to_vec())
    }
}

/// Per edge size `i`, the best `(d_{i-|x|}(x), x)`; ties go to the
/// lexicographically smallest `x`.
fn maxima<K: SubsetKey>(h: &Hypergraph, dim: usize) -> Vec<Option<(NormDegree, VertexSet)>> {
    let mut counts: Vec<FxHashMap<K, (u64, u32)>> = (0..=dim).map(|_| FxHashMap::default()).collect();
    let mut buf = Vec::with_capacity(dim);
    for e in h.edges() {
        let k = e.len();
        if k < 2 {
            continue;
        }
        let ids = e.as_slice();
        let full = (1u64 << k) - 1;
        for mask in 1..full {
            buf.clear();
            for (b, &v) in ids.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    buf.push(v);
                }
            }
            counts[k].entry(K::from_ids(&buf)).or_insert((0, buf.len() as u32)).0 += 1;
        }
    }
    let mut best: Vec<Option<(NormDegree, VertexSet)>> = vec![None; dim + 1];
    for (i, table) in counts.into_iter().enumerate() {
        let mut top: Option<(NormDegree, K)> = None;
        for (key, (count, xlen)) in table {
            let deg = NormDegree { count, j: i as u32 - xlen };
            top = match top {
                None => Some((deg, key)),
                Some((bd, bk)) => match deg.cmp(&bd) {
                    Ordering::Greater => Some((deg, key)),
                    Ordering::Equal if key.to_set() < bk.to_set() => Some((deg, key)),
                    _ => Some((bd, bk)),
                },
            };
        }
        best[i] = top.map(|(d, k)| (d, k.to_set()));
    }
    best
}
