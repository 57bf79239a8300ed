//! Weighted hypergraphs and the edge polynomial
//! `S(H, w, p) = Σ_e w(e) · C_e`, where `C_e` is the indicator that every
//! vertex of `e` is colored (each independently with probability `p`).

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::degree::{neighborhood, neighborhood_size};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Mask, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedHypergraph {
    base: Hypergraph,
    weights: Vec<f64>,
}

impl WeightedHypergraph {
    pub fn new(base: Hypergraph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != base.num_edges() {
            return Err(Error::InvalidConfig(format!(
                "{} weights for {} edges",
                weights.len(),
                base.num_edges()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidConfig(format!("edge weight {w} is not positive")));
        }
        Ok(WeightedHypergraph { base, weights })
    }

    pub fn unit(base: Hypergraph) -> Self {
        let weights = vec![1.0; base.num_edges()];
        WeightedHypergraph { base, weights }
    }

    pub fn base(&self) -> &Hypergraph {
        &self.base
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weighted_edges(&self) -> impl Iterator<Item = (&VertexSet, f64)> + '_ {
        self.base.edges().iter().zip(self.weights.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        WeightedHypergraph::new(self.base.clone(), self.weights.iter().map(|w| w * c).collect())
    }

    /// `S` at a fixed coloring: total weight of edges inside `coloring`.
    pub fn eval_s(&self, coloring: &VertexSet) -> f64 {
        let mask = Mask::of(self.base.universe(), coloring);
        self.weighted_edges()
            .filter(|(e, _)| e.iter().all(|v| mask.get(v)))
            .map(|(_, w)| w)
            .sum()
    }

    /// `P(x) = Σ_{e ⊇ x} w(e) p^{|e|-|x|}`, the expectation of `S`'s partial
    /// derivative at `x`. `P(∅) = E[S]`.
    pub fn eval_p(&self, p: f64, x: &VertexSet) -> f64 {
        self.weighted_edges()
            .filter(|(e, _)| x.is_subset_of(e))
            .map(|(e, w)| w * p.powi((e.len() - x.len()) as i32))
            .sum()
    }

    /// `D = max_x P(x)`. Only `∅` and subsets of edges can be non-zero.
    pub fn eval_d(&self, p: f64) -> f64 {
        self.eval_d_with_argmax(p).0
    }

    /// `D` together with a lexicographically smallest maximizing `x`.
    pub fn eval_d_with_argmax(&self, p: f64) -> (f64, VertexSet) {
        let mut acc: FxHashMap<Vec<Vertex>, f64> = FxHashMap::default();
        acc.insert(Vec::new(), 0.0);
        let mut buf = Vec::new();
        for (e, w) in self.weighted_edges() {
            let ids = e.as_slice();
            let k = ids.len();
            assert!(k < 64, "edge too large for subset enumeration");
            for mask in 0..(1u64 << k) {
                buf.clear();
                for (b, &v) in ids.iter().enumerate() {
                    if mask & (1 << b) != 0 {
                        buf.push(v);
                    }
                }
                *acc.entry(buf.clone()).or_insert(0.0) += w * p.powi((k - buf.len()) as i32);
            }
        }
        let mut best: Option<(f64, Vec<Vertex>)> = None;
        for (x, val) in acc {
            best = match best {
                Some((bv, bx)) if bv > val || (bv == val && bx <= x) => Some((bv, bx)),
                _ => Some((val, x)),
            };
        }
        let (val, x) = best.expect("empty set always present");
        (val, VertexSet::from_sorted(x))
    }
}

/// Edges of size `|x| + k` around `x` that can shrink to size `|x| + j`:
/// every `(k - j)`-subset `Y` of a member of `N_k(x)`, weighted by
/// `|N_j(x ∪ Y)|`. Zero-weight candidates are dropped. `j = 0` is the limit
/// case where `Y` ranges over the members of `N_k(x)` themselves, each with
/// weight 1.
pub fn migration_hypergraph(h: &Hypergraph, x: &VertexSet, j: usize, k: usize) -> Result<WeightedHypergraph> {
    let hi = h.dimension().saturating_sub(x.len());
    if k < 1 || k > hi {
        return Err(Error::BadArity { j: k, lo: 1, hi });
    }
    if j >= k {
        return Err(Error::BadArity { j, lo: 0, hi: k - 1 });
    }
    let members = neighborhood(h, x, k)?;
    let width = k - j;
    let mut candidates: BTreeSet<VertexSet> = BTreeSet::new();
    for z in &members {
        for_each_subset_of_size(z.as_slice(), width, |y| {
            candidates.insert(VertexSet::from_sorted(y.to_vec()));
        });
    }
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for y in candidates {
        let w = if j == 0 { 1 } else { neighborhood_size(h, &x.union(&y), j) };
        if w > 0 {
            edges.push(y);
            weights.push(w as f64);
        }
    }
    let base = Hypergraph::from_parts(h.universe(), h.vertices().clone(), edges);
    Ok(WeightedHypergraph { base, weights })
}

pub(crate) fn for_each_subset_of_size(ids: &[Vertex], size: usize, mut f: impl FnMut(&[Vertex])) {
    fn rec(ids: &[Vertex], size: usize, start: usize, buf: &mut Vec<Vertex>, f: &mut dyn FnMut(&[Vertex])) {
        if buf.len() == size {
            f(buf);
            return;
        }
        let need = size - buf.len();
        for i in start..=ids.len().saturating_sub(need) {
            if i >= ids.len() {
                break;
            }
            buf.push(ids[i]);
            rec(ids, size, i + 1, buf, f);
            buf.pop();
        }
    }
    if size > ids.len() {
        return;
    }
    let mut buf = Vec::with_capacity(size);
    rec(ids, size, 0, &mut buf, &mut f);
}

/// Serializable view used in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedEdge {
    pub edge: VertexSet,
    pub weight: f64,
}

impl WeightedHypergraph {
    pub fn listing(&self) -> Vec<WeightedEdge> {
        self.weighted_edges().map(|(e, w)| WeightedEdge { edge: e.clone(), weight: w }).collect()
    }
}
