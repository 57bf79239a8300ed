use std::collections::BTreeSet;

use hmis_core::analysis::{migration_hypergraph, potential_report, Variant, WeightedHypergraph};
use hmis_core::baseline::{enumerate_all_mis, greedy_mis, VertexOrder};
use hmis_core::bl::{run_bl, BlConfig, PMode, Status};
use hmis_core::degree::{degree_profile, neighborhood, neighborhood_size};
use hmis_core::io::{parse_hg, write_hg};
use hmis_core::sbl::{run_sbl, SblConfig};
use hmis_core::{Hypergraph, Vertex, VertexSet};
use proptest::prelude::*;

fn hypergraph(max_n: Vertex, max_edge: usize, max_m: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let edge = prop::collection::btree_set(1..=n, 1..=max_edge.min(n as usize));
        prop::collection::vec(edge, 0..=max_m)
            .prop_map(move |es| Hypergraph::new(n, es.into_iter().map(|e| e.into_iter().collect()).collect()).unwrap())
    })
}

fn all_subsets(vs: &[Vertex]) -> Vec<VertexSet> {
    (0..(1u32 << vs.len()))
        .map(|mask| (0..vs.len()).filter(|&b| mask & (1 << b) != 0).map(|b| vs[b]).collect())
        .collect()
}

/// `Δ_i` straight from the definition: every `x ⊆ V` with `0 < |x| < i`.
fn brute_delta(h: &Hypergraph, i: usize) -> f64 {
    let mut best: f64 = 0.0;
    for x in all_subsets(h.vertices().as_slice()) {
        if x.is_empty() || x.len() >= i {
            continue;
        }
        let j = i - x.len();
        let count = h
            .edges()
            .iter()
            .filter(|e| e.len() == i && x.is_subset_of(e))
            .count();
        best = best.max((count as f64).powf(1.0 / j as f64));
    }
    best
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_is_idempotent_and_minimal(h in hypergraph(10, 5, 12)) {
        let g = h.normalize();
        prop_assert!(g.is_normalized());
        prop_assert_eq!(g.normalize(), g.clone());
        for e in g.edges() {
            prop_assert!(h.edges().contains(e));
        }
        for e in h.edges() {
            prop_assert!(g.edges().iter().any(|f| f.is_subset_of(e)));
        }
        prop_assert_eq!(g.vertices(), h.vertices());
    }

    #[test]
    fn normalize_preserves_independent_sets(h in hypergraph(8, 4, 10)) {
        let g = h.normalize();
        for s in all_subsets(h.vertices().as_slice()) {
            prop_assert_eq!(h.is_independent(&s), g.is_independent(&s));
        }
    }

    #[test]
    fn neighborhoods_match_definition(h in hypergraph(9, 4, 12), pick in any::<prop::sample::Index>()) {
        let h = h.normalize();
        prop_assume!(h.num_edges() > 0);
        let d = h.dimension();
        prop_assume!(d >= 2);
        let e = pick.get(h.edges());
        let x: VertexSet = e.iter().take(1).collect();
        for j in 1..=d - x.len() {
            let ys = neighborhood(&h, &x, j).unwrap();
            prop_assert_eq!(ys.len(), neighborhood_size(&h, &x, j));
            for y in &ys {
                prop_assert_eq!(y.len(), j);
                prop_assert!(y.is_disjoint(&x));
                prop_assert!(h.edges().contains(&x.union(y)));
            }
        }
    }

    #[test]
    fn degree_profile_matches_brute_force(h in hypergraph(10, 5, 12)) {
        prop_assume!(h.edges().iter().any(|e| e.len() >= 2));
        let prof = degree_profile(&h).unwrap();
        prop_assert_eq!(prof.dim, h.dimension());
        for i in 2..=prof.dim {
            prop_assert!(close(prof.delta_i[&i], brute_delta(&h, i), 1e-12), "i = {}", i);
            let w = &prof.witnesses[&i];
            if prof.delta_i[&i] > 0.0 {
                prop_assert_eq!(neighborhood_size(&h, &w.x, i - w.x.len()) as u64, w.degree.count);
            }
        }
        let max = prof.delta_i.values().fold(0.0f64, |a, &b| a.max(b));
        prop_assert_eq!(prof.delta, max);
    }

    #[test]
    fn greedy_output_is_a_maximal_independent_set(h in hypergraph(12, 4, 14), seed in any::<u64>()) {
        let all: BTreeSet<VertexSet> = enumerate_all_mis(&h).unwrap().into_iter().collect();
        prop_assert!(all.contains(&greedy_mis(&h, &VertexOrder::ascending(&h))));
        prop_assert!(all.contains(&greedy_mis(&h, &VertexOrder::shuffled(&h, seed))));
        for s in &all {
            prop_assert!(h.is_maximal_independent(s));
        }
    }

    #[test]
    fn enumeration_is_complete(h in hypergraph(8, 3, 8)) {
        let listed: BTreeSet<VertexSet> = enumerate_all_mis(&h).unwrap().into_iter().collect();
        let brute: BTreeSet<VertexSet> = all_subsets(h.vertices().as_slice())
            .into_iter()
            .filter(|s| h.is_maximal_independent(s))
            .collect();
        prop_assert_eq!(listed, brute);
    }

    #[test]
    fn bl_returns_a_maximal_independent_set(h in hypergraph(12, 4, 14), seed in any::<u64>(), fixed in any::<bool>()) {
        let cfg = BlConfig { p_mode: if fixed { PMode::Fixed } else { PMode::Recompute }, ..BlConfig::new(seed) };
        let out = run_bl(&h, &cfg).unwrap();
        prop_assert_eq!(out.status, Status::Ok);
        prop_assert!(h.is_maximal_independent(&out.mis), "{} on {:?}", out.mis, h);
        let mut seen = VertexSet::new();
        for r in &out.rounds {
            prop_assert_eq!(&r.added, &r.marked.difference(&r.unmarked));
            prop_assert!(r.added.is_disjoint(&seen));
            prop_assert!(r.p_used > 0.0 && r.p_used <= 1.0);
            seen = seen.union(&r.added);
        }
        prop_assert_eq!(seen, out.mis);
    }

    #[test]
    fn sbl_returns_a_maximal_independent_set(h in hypergraph(14, 6, 14), seed in any::<u64>()) {
        let cfg = SblConfig { p_override: Some(0.35), d_cap_override: Some(3), ..SblConfig::new(seed) };
        let out = run_sbl(&h, &cfg).unwrap();
        prop_assert_eq!(out.status, Status::Ok);
        prop_assert!(h.is_maximal_independent(&out.mis), "{} on {:?}", out.mis, h);
        for r in &out.rounds {
            prop_assert_eq!(&r.blue.union(&r.red), &r.sampled);
            prop_assert!(r.blue.is_disjoint(&r.red));
            prop_assert!(r.induced_dim <= 3);
        }
    }

    #[test]
    fn solvers_are_deterministic(h in hypergraph(12, 5, 14), seed in any::<u64>()) {
        let a = run_bl(&h, &BlConfig::new(seed)).unwrap();
        let b = run_bl(&h, &BlConfig::new(seed)).unwrap();
        prop_assert_eq!(a.trace_jsonl(), b.trace_jsonl());
        prop_assert_eq!(a.mis, b.mis);
        let cfg = SblConfig { p_override: Some(0.35), d_cap_override: Some(3), ..SblConfig::new(seed) };
        let a = run_sbl(&h, &cfg).unwrap();
        let b = run_sbl(&h, &cfg).unwrap();
        prop_assert_eq!(a.trace_jsonl(), b.trace_jsonl());
        prop_assert_eq!(a.mis, b.mis);
    }

    #[test]
    fn hg_round_trip(h in hypergraph(15, 5, 12)) {
        let mut edges: Vec<Vec<Vertex>> = h.edges().iter().map(|e| e.as_slice().to_vec()).collect();
        edges.sort();
        let sorted = Hypergraph::new(h.universe(), edges).unwrap();
        prop_assert_eq!(parse_hg(&write_hg(&h)).unwrap(), sorted);
    }

    #[test]
    fn induce_keeps_exactly_the_inner_edges(h in hypergraph(10, 4, 12), keep in prop::collection::btree_set(1u32..=10, 0..=10)) {
        let keep: VertexSet = keep.into_iter().filter(|&v| h.vertices().contains(v)).collect();
        let g = h.induce(&keep);
        prop_assert_eq!(g.vertices(), &keep);
        let inner: Vec<&VertexSet> = h.edges().iter().filter(|e| e.is_subset_of(&keep)).collect();
        prop_assert_eq!(g.edges().len(), inner.len());
        for e in inner {
            prop_assert!(g.edges().contains(e));
        }
    }

    #[test]
    fn expectation_matches_exhaustive_enumeration(
        h in hypergraph(10, 4, 10),
        raw in prop::collection::vec(0.1f64..10.0, 10),
        p in 0.05f64..1.0,
    ) {
        let weights: Vec<f64> = raw.into_iter().cycle().take(h.num_edges()).collect();
        let wh = WeightedHypergraph::new(h.clone(), weights).unwrap();
        let mut expect = 0.0;
        for s in all_subsets(h.vertices().as_slice()) {
            let k = s.len() as i32;
            let prob = p.powi(k) * (1.0 - p).powi(h.num_vertices() as i32 - k);
            expect += prob * wh.eval_s(&s);
        }
        let got = wh.eval_p(p, &VertexSet::new());
        prop_assert!(close(got, expect, 1e-12) || (got - expect).abs() < 1e-12, "{} vs {}", got, expect);
        prop_assert!(wh.eval_d(p) >= got);
    }

    #[test]
    fn migration_weights_recomputed(h in hypergraph(10, 5, 12), pick in any::<prop::sample::Index>()) {
        let d = h.dimension();
        prop_assume!(d >= 3);
        let e = pick.get(h.edges());
        let x: VertexSet = e.iter().take(1).collect();
        for k in 2..=d - 1 {
            for j in 1..k {
                let m = migration_hypergraph(&h, &x, j, k).unwrap();
                for (y, w) in m.weighted_edges() {
                    prop_assert_eq!(y.len(), k - j);
                    let xy = x.union(y);
                    let direct = h
                        .edges()
                        .iter()
                        .filter(|f| f.len() == xy.len() + j && xy.is_subset_of(f))
                        .count();
                    prop_assert_eq!(w, direct as f64);
                    prop_assert!(w > 0.0);
                }
            }
        }
    }

    #[test]
    fn potentials_dominate_degrees(h in hypergraph(10, 5, 14), original in any::<bool>()) {
        prop_assume!(h.dimension() >= 2 && h.num_vertices() >= 3);
        let variant = if original { Variant::KelsenOriginal } else { Variant::ModifiedD2 };
        let prof = degree_profile(&h).unwrap();
        let r = potential_report(&h, variant).unwrap();
        prop_assert_eq!(r.t[&2], r.v[&2]);
        prop_assert_eq!(r.big_f[&1], 0);
        for i in 2..=r.d {
            prop_assert!(r.v[&i] >= prof.delta_i[&i]);
            prop_assert!(r.big_f[&i] >= r.big_f[&(i - 1)]);
            if i < r.d {
                let scaled = r.log_n.powf(r.f[&i] as f64) * r.v[&(i + 1)];
                prop_assert!(r.v[&i] == prof.delta_i[&i] || r.v[&i] >= scaled);
            }
        }
    }
}
