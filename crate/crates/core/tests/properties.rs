mod common;

use std::collections::BTreeSet;

use peelgraph_core::{
    clones_of, connected_components, coreness, coreness_parallel, decompose, decompose_with_workers, Adjacency, Graph,
};
use proptest::prelude::*;

use common::*;

fn edge_list(max_n: u32, max_m: usize) -> impl Strategy<Value = (usize, Vec<(u32, u32)>)> {
    (1..=max_n).prop_flat_map(move |n| (Just(n as usize), prop::collection::vec((0..n, 0..n), 0..=max_m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn graph_invariants((n, edges) in edge_list(40, 200)) {
        let g = Graph::from_dense_edges(n, edges.iter().copied()).unwrap();
        let mut degree_sum = 0;
        for v in 0..n {
            let adj = g.neighbor_slice(v);
            degree_sum += adj.len();
            prop_assert!(adj.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!adj.contains(&(v as u32)));
            for &u in adj {
                prop_assert!(g.has_edge(u, v as u32));
            }
        }
        prop_assert_eq!(degree_sum, 2 * g.m());
        prop_assert_eq!(g.offsets()[n], 2 * g.m());
        let expected: BTreeSet<(u32, u32)> =
            edges.iter().filter(|(u, v)| u != v).map(|&(u, v)| (u.min(v), u.max(v))).collect();
        prop_assert_eq!(g.edges().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn canonical_reingest_reproduces_graph((n, edges) in edge_list(40, 200)) {
        let g = Graph::from_dense_edges(n, edges.iter().copied()).unwrap();
        let again = Graph::from_dense_edges(n, g.edges()).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn coreness_matches_oracle((n, edges) in edge_list(60, 400)) {
        let g = Graph::from_dense_edges(n, edges.iter().copied()).unwrap();
        let oracle = brute_coreness(n, &edges);
        prop_assert_eq!(&coreness(&g).core, &oracle);
        for w in [2, 4] {
            prop_assert_eq!(&coreness_parallel(&g, w).core, &oracle);
        }
    }

    #[test]
    fn decomposition_invariants((n, edges) in edge_list(50, 300)) {
        let g = Graph::from_dense_edges(n, edges.iter().copied()).unwrap();
        let d = decompose(&g);

        // partition
        let mut seen = BTreeSet::new();
        for layer in &d.layers {
            for &e in &layer.edges {
                prop_assert!(seen.insert(e));
            }
        }
        prop_assert_eq!(seen, g.edges().collect::<BTreeSet<_>>());

        // strictly decreasing, k_max = degeneracy
        prop_assert!(d.layers.windows(2).all(|w| w[0].value > w[1].value));
        prop_assert_eq!(d.k_max(), coreness(&g).degeneracy());
        prop_assert!(d.layer_count() as u32 <= d.k_max());

        for layer in &d.layers {
            let k = layer.value;
            let adj = adjacency_sets(n, &layer.edges);
            prop_assert!(layer.vertices.iter().all(|&v| adj[v as usize].len() as u32 >= k));
            prop_assert!(brute_k_core(n, &layer.edges, k + 1).is_empty());
            for &v in &layer.vertices {
                prop_assert!(clones_of(&d, v).unwrap().contains(&k));
            }
        }
        for v in 0..n as u32 {
            for &k in clones_of(&d, v).unwrap() {
                prop_assert!(d.layer(k).unwrap().contains(v));
            }
        }
        for (e, &k) in g.edges().zip(&d.edge_layer) {
            prop_assert!(d.layer(k).unwrap().edges.binary_search(&e).is_ok());
        }
        prop_assert_eq!(decompose(&g), d.clone());
        prop_assert_eq!(decompose_with_workers(&g, 3), d);
    }
}

#[test]
fn components_match_union_find_on_sparse_random_graph() {
    let edges = erdos_renyi(50, 0.02, 7);
    let g = graph(50, &edges);
    let c = connected_components(&g, None);
    assert_eq!(c.count(), union_find_components(50, &edges));
    assert!(c.sizes.windows(2).all(|w| w[0] >= w[1]));
    // every vertex with an edge has exactly one label
    for v in 0..50u32 {
        assert_eq!(c.labels[v as usize].is_some(), !g.is_isolated(v));
    }
}

#[test]
fn coreness_parallel_sweep() {
    for (n, edges) in random_corpus(100) {
        let g = graph(n, &edges);
        assert_eq!(coreness_parallel(&g, 8), coreness(&g), "n = {n}");
    }
}
