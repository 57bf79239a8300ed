//! Hypergraph representation, normalization, and independence checks.
//!
//! Vertices are dense 1-based ids. A hypergraph carries its id universe
//! `1..=n` together with its current vertex set, which may be a strict
//! subset of the universe after induction or vertex removal. Ids are never
//! renumbered.

use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Sorted set of vertex ids, strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Caller guarantees `ids` is strictly increasing.
    pub(crate) fn from_sorted(ids: Vec<Vertex>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet(ids)
    }

    pub fn range(lo: Vertex, hi: Vertex) -> Self {
        VertexSet((lo..=hi).collect())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn max(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn with(&self, v: Vertex) -> VertexSet {
        let mut ids = self.0.clone();
        if let Err(pos) = ids.binary_search(&v) {
            ids.insert(pos, v);
        }
        VertexSet(ids)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(mut ids: Vec<Vertex>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }
}

impl From<VertexSet> for Vec<Vertex> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(ids: [Vertex; N]) -> Self {
        VertexSet::from(ids.to_vec())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &v in small {
        while j < big.len() && big[j] < v {
            j += 1;
        }
        if j == big.len() || big[j] != v {
            return false;
        }
        j += 1;
    }
    true
}

/// Membership bitmap over the id universe `0..=n`.
pub(crate) struct Mask(Vec<bool>);

impl Mask {
    pub(crate) fn new(universe: Vertex) -> Self {
        Mask(vec![false; universe as usize + 1])
    }

    pub(crate) fn of(universe: Vertex, s: &VertexSet) -> Self {
        let mut m = Mask::new(universe);
        for v in s.iter() {
            m.set(v);
        }
        m
    }

    #[inline]
    pub(crate) fn set(&mut self, v: Vertex) {
        if let Some(slot) = self.0.get_mut(v as usize) {
            *slot = true;
        }
    }

    #[inline]
    pub(crate) fn get(&self, v: Vertex) -> bool {
        self.0.get(v as usize).copied().unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    universe: Vertex,
    vertices: VertexSet,
    edges: Vec<VertexSet>,
}

impl Hypergraph {
    /// Hypergraph on vertices `1..=n`. Edges must be non-empty lists of
    /// distinct ids in range; each is stored sorted.
    pub fn new(n: Vertex, edges: Vec<Vec<Vertex>>) -> Result<Self> {
        Self::with_vertices(n, VertexSet::range(1, n), edges)
    }

    /// Hypergraph over the id universe `1..=n` whose vertex set is `vertices`.
    pub fn with_vertices(n: Vertex, vertices: VertexSet, edges: Vec<Vec<Vertex>>) -> Result<Self> {
        if let Some(&v) = vertices.as_slice().iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let mut out = Vec::with_capacity(edges.len());
        for (index, mut e) in edges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(Error::EmptyEdge { index });
            }
            e.sort_unstable();
            if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex { index, vertex: w[0] });
            }
            if let Some(&v) = e.iter().find(|&&v| !vertices.contains(v)) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            out.push(VertexSet::from_sorted(e));
        }
        Ok(Hypergraph { universe: n, vertices, edges: out })
    }

    pub(crate) fn from_parts(universe: Vertex, vertices: VertexSet, edges: Vec<VertexSet>) -> Self {
        debug_assert!(edges.iter().all(|e| !e.is_empty() && e.is_subset_of(&vertices)));
        Hypergraph { universe, vertices, edges }
    }

    pub fn edge_free(n: Vertex) -> Self {
        Hypergraph { universe: n, vertices: VertexSet::range(1, n), edges: Vec::new() }
    }

    /// Largest admissible vertex id.
    pub fn universe(&self) -> Vertex {
        self.universe
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Maximum edge size; 0 when there are no edges.
    pub fn dimension(&self) -> usize {
        self.edges.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    pub fn is_edge_free(&self) -> bool {
        self.edges.is_empty()
    }

    /// Collapses duplicate edges and drops every edge that strictly contains
    /// another edge. Edges come back in lexicographic order.
    pub fn normalize(&self) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        edges.dedup();
        let edges = remove_supersets(edges);
        Hypergraph { universe: self.universe, vertices: self.vertices.clone(), edges }
    }

    pub fn is_normalized(&self) -> bool {
        let n = self.normalize();
        n.edges == self.edges
    }

    /// Sub-hypergraph on `vs ∩ V` keeping only edges fully inside `vs`.
    pub fn induce(&self, vs: &VertexSet) -> Hypergraph {
        let vertices = self.vertices.intersection(vs);
        let mask = Mask::of(self.universe, &vertices);
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|v| mask.get(v)))
            .cloned()
            .collect();
        Hypergraph { universe: self.universe, vertices, edges }
    }

    /// True iff no edge lies entirely inside `s`.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        if s.is_empty() {
            return true;
        }
        let mask = Mask::of(self.universe, s);
        !self.edges.iter().any(|e| e.iter().all(|v| mask.get(v)))
    }

    /// True iff `s` is independent and no vertex of `V \ s` can join it.
    pub fn is_maximal_independent(&self, s: &VertexSet) -> bool {
        let mask = Mask::of(self.universe, s);
        let mut blocked = Mask::new(self.universe);
        for e in &self.edges {
            let mut outside = None;
            let mut count = 0;
            for v in e.iter() {
                if !mask.get(v) {
                    count += 1;
                    outside = Some(v);
                    if count > 1 {
                        break;
                    }
                }
            }
            match count {
                0 => return false,
                1 => blocked.set(outside.expect("counted one outside vertex")),
                _ => {}
            }
        }
        self.vertices.iter().all(|v| mask.get(v) || blocked.get(v))
    }

    /// Sum over edges of `2^|e|`, the subset-enumeration cost of degree
    /// and potential computations.
    pub fn subset_work(&self) -> u128 {
        self.edges
            .iter()
            .map(|e| 1u128.checked_shl(e.len() as u32).unwrap_or(u128::MAX))
            .fold(0u128, u128::saturating_add)
    }
}

/// Removes edges that strictly contain another edge. Input must be sorted
/// and deduplicated; output keeps that order.
fn remove_supersets(edges: Vec<VertexSet>) -> Vec<VertexSet> {
    if edges.len() < 2 {
        return edges;
    }
    let present: FxHashSet<&[Vertex]> = edges.iter().map(|e| e.as_slice()).collect();
    // Edges keyed by their smallest vertex: any f ⊆ e has min(f) ∈ e.
    let mut by_min: FxHashMap<Vertex, Vec<usize>> = FxHashMap::default();
    for (i, e) in edges.iter().enumerate() {
        by_min.entry(e.as_slice()[0]).or_default().push(i);
    }
    let mut keep = vec![true; edges.len()];
    for (i, e) in edges.iter().enumerate() {
        let k = e.len();
        if k == 1 {
            continue;
        }
        let scan_cost: usize = e
            .iter()
            .map(|v| by_min.get(&v).map_or(0, Vec::len))
            .sum();
        let has_sub = if k <= 16 && (1usize << k) <= scan_cost {
            proper_subset_is_edge(e.as_slice(), &present)
        } else {
            e.iter().any(|v| {
                by_min.get(&v).is_some_and(|cands| {
                    cands.iter().any(|&c| {
                        let f = edges[c].as_slice();
                        f.len() < k && is_sorted_subset(f, e.as_slice())
                    })
                })
            })
        };
        if has_sub {
            keep[i] = false;
        }
    }
    edges
        .into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

fn proper_subset_is_edge(e: &[Vertex], present: &FxHashSet<&[Vertex]>) -> bool {
    let k = e.len();
    let full = (1u32 << k) - 1;
    let mut buf = Vec::with_capacity(k);
    for mask in 1..full {
        buf.clear();
        for (b, &v) in e.iter().enumerate() {
            if mask & (1 << b) != 0 {
                buf.push(v);
            }
        }
        if present.contains(buf.as_slice()) {
            return true;
        }
    }
    false
}
