//! Sequential greedy MIS and the exhaustive MIS enumerator used as an
//! oracle in tests.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};
use crate::rng::CounterRng;

/// Largest vertex count accepted by [`enumerate_all_mis`].
pub const ENUMERATION_LIMIT: usize = 20;

/// A permutation of a hypergraph's vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder(Vec<Vertex>);

impl VertexOrder {
    pub fn ascending(h: &Hypergraph) -> Self {
        VertexOrder(h.vertices().as_slice().to_vec())
    }

    pub fn shuffled(h: &Hypergraph, seed: u64) -> Self {
        let mut ids = h.vertices().as_slice().to_vec();
        ids.shuffle(&mut CounterRng::new(seed).derive(0x006f_7264_6572).seeded());
        VertexOrder(ids)
    }

    /// Checks that `ids` lists every vertex of `h` exactly once.
    pub fn for_hypergraph(h: &Hypergraph, ids: Vec<Vertex>) -> Result<Self> {
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted.as_slice() != h.vertices().as_slice() {
            return Err(Error::InvalidConfig("order is not a permutation of the vertex set".into()));
        }
        Ok(VertexOrder(ids))
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }
}

/// Scans `order`, adding each vertex whose addition keeps the set
/// independent. Runs in `O(n + Σ|e|)`.
pub fn greedy_mis(h: &Hypergraph, order: &VertexOrder) -> VertexSet {
    let universe = h.universe() as usize;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); universe + 1];
    for (i, e) in h.edges().iter().enumerate() {
        for v in e.iter() {
            incident[v as usize].push(i);
        }
    }
    // Vertices of each edge not yet in the set.
    let mut missing: Vec<usize> = h.edges().iter().map(VertexSet::len).collect();
    let mut chosen = Vec::new();
    for &v in order.as_slice() {
        let blocked = incident[v as usize].iter().any(|&i| missing[i] == 1);
        if !blocked {
            chosen.push(v);
            for &i in &incident[v as usize] {
                missing[i] -= 1;
            }
        }
    }
    VertexSet::from(chosen)
}

/// Every maximal independent set of `h`, sorted lexicographically.
pub fn enumerate_all_mis(h: &Hypergraph) -> Result<Vec<VertexSet>> {
    let n = h.num_vertices();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { n, limit: ENUMERATION_LIMIT });
    }
    let ids = h.vertices().as_slice();
    let bit_of = |v: Vertex| ids.binary_search(&v).expect("edge vertex in vertex set");
    let edge_masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |m, v| m | (1 << bit_of(v))))
        .collect();
    // closers[b]: masks of e \ {b} over edges e containing b.
    let mut closers: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &m in &edge_masks {
        for (b, slot) in closers.iter_mut().enumerate() {
            if m & (1 << b) != 0 {
                slot.push(m & !(1 << b));
            }
        }
    }

    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut out = Vec::new();
    for s in 0..=full {
        if edge_masks.iter().any(|&e| e & !s == 0) {
            continue;
        }
        let maximal = (0..n)
            .filter(|&b| s & (1 << b) == 0)
            .all(|b| closers[b].iter().any(|&c| c & !s == 0));
        if maximal {
            out.push(VertexSet::from_iter((0..n).filter(|&b| s & (1 << b) != 0).map(|b| ids[b])));
        }
    }
    out.sort();
    Ok(out)
}
