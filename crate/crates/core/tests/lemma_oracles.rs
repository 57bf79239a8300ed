//! Monte Carlo estimators checked against exact probabilities obtained by
//! enumerating every coloring of the vertices involved.

use hmis_core::analysis::{estimate_neighborhood_hit, estimate_unmark_given_marked, tail_experiment, WeightedHypergraph};
use hmis_core::degree::neighborhood;
use hmis_core::gen::{gen, GenKind, GenSize, GenSpec};
use hmis_core::{Hypergraph, Vertex, VertexSet};

fn colorings(vs: &[Vertex], p: f64) -> impl Iterator<Item = (VertexSet, f64)> + '_ {
    (0..(1u32 << vs.len())).map(move |mask| {
        let on: VertexSet = (0..vs.len()).filter(|&b| mask & (1 << b) != 0).map(|b| vs[b]).collect();
        let k = on.len() as i32;
        (on, p.powi(k) * (1.0 - p).powi(vs.len() as i32 - k))
    })
}

fn exact_unmark(h: &Hypergraph, x: &VertexSet, p: f64) -> f64 {
    let rest = h.vertices().difference(x);
    colorings(rest.as_slice(), p)
        .filter(|(on, _)| {
            h.edges()
                .iter()
                .any(|e| !e.is_disjoint(x) && e.difference(x).is_subset_of(on))
        })
        .map(|(_, w)| w)
        .sum()
}

fn exact_hit(h: &Hypergraph, x: &VertexSet, j: usize, p: f64) -> f64 {
    let targets = neighborhood(h, x, j).unwrap();
    colorings(h.vertices().as_slice(), p)
        .filter(|(marked, _)| {
            let full: Vec<&VertexSet> = h.edges().iter().filter(|e| e.is_subset_of(marked)).collect();
            targets
                .iter()
                .any(|y| y.is_subset_of(marked) && full.iter().all(|e| e.is_disjoint(y)))
        })
        .map(|(_, w)| w)
        .sum()
}

fn instances() -> Vec<Hypergraph> {
    (0..6)
        .map(|seed| {
            gen(&GenSpec {
                n: 9,
                kind: GenKind::MixedDims { lo: 2, hi: 4 },
                size: GenSize::Edges(8),
                seed,
            })
            .unwrap()
        })
        .collect()
}

#[test]
fn unmark_estimates_cover_exact_values() {
    for (i, h) in instances().iter().enumerate() {
        let x = VertexSet::from([h.edges()[0].as_slice()[0]]);
        for &p in &[0.1, 0.3] {
            let exact = exact_unmark(h, &x, p);
            let est = estimate_unmark_given_marked(h, &x, p, 40_000, i as u64).unwrap();
            assert!(est.covers(exact), "instance {i}, p = {p}: exact {exact}, {est:?}");
        }
    }
}

#[test]
fn neighborhood_hit_estimates_cover_exact_values() {
    for (i, h) in instances().iter().enumerate() {
        let e = &h.edges()[0];
        let x = VertexSet::from([e.as_slice()[0]]);
        let j = e.len() - 1;
        for &p in &[0.2, 0.5] {
            let exact = exact_hit(h, &x, j, p);
            let r = estimate_neighborhood_hit(h, &x, j, p, 40_000, 100 + i as u64).unwrap();
            assert!(r.estimate.covers(exact), "instance {i}, p = {p}: exact {exact}, {r:?}");
        }
    }
}

#[test]
fn tail_estimate_covers_exact_value() {
    let h = instances().remove(0);
    let weights: Vec<f64> = (0..h.num_edges()).map(|k| 1.0 + k as f64).collect();
    let wh = WeightedHypergraph::new(h.clone(), weights).unwrap();
    let p = 0.6;
    let threshold = 3.5;
    let exact: f64 = colorings(h.vertices().as_slice(), p)
        .filter(|(on, _)| wh.eval_s(on) > threshold)
        .map(|(_, w)| w)
        .sum();
    let t = tail_experiment(&wh, p, threshold, 40_000, 9).unwrap();
    assert!(t.covers(exact), "exact {exact}, {t:?}");
}

#[test]
fn single_edge_tail_matches_closed_form() {
    let wh = WeightedHypergraph::unit(Hypergraph::new(3, vec![vec![1, 2, 3]]).unwrap());
    for &(p, threshold) in &[(0.5, 0.5), (0.7, 0.99), (0.7, 1.0), (0.3, -1.0)] {
        let expect = if threshold < 1.0 { p * p * p } else { 0.0 };
        let expect = if threshold < 0.0 { 1.0 } else { expect };
        let t = tail_experiment(&wh, p, threshold, 20_000, 3).unwrap();
        assert!(t.covers(expect), "p = {p}, threshold = {threshold}: {t:?}");
    }
}
