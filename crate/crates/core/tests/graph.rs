use mub_core::constructions::{complete_mub, UnitVectorSystem};
use mub_core::graph::{
    build_graph, classify_pairs, cluster_spectrum, OrthogonalityGraph, PairLabel, DEFAULT_CLASSIFICATION_TOL,
    SPECTRAL_CLUSTER_GAP,
};
use mub_core::rigidity::mutate_drop;
use mub_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

/// Adjacency recomputed directly from the vectors.
fn adjacency_oracle(sys: &UnitVectorSystem) -> Vec<Vec<bool>> {
    let vs = sys.vectors();
    (0..vs.len())
        .map(|j| {
            (0..vs.len())
                .map(|k| {
                    let z: Complex64 = vs[j].entries().iter().zip(vs[k].entries()).map(|(a, b)| a.conj() * b).sum();
                    j != k && z.norm_sqr() <= DEFAULT_CLASSIFICATION_TOL
                })
                .collect()
        })
        .collect()
}

fn triangles_oracle(adj: &[Vec<bool>]) -> u64 {
    let n = adj.len();
    let mut t = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if adj[a][b] && adj[b][c] && adj[c][a] {
                    t += 1;
                }
            }
        }
    }
    t
}

fn components_oracle(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            for v in 0..n {
                if adj[u][v] && !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn mub_graph(d: usize) -> (UnitVectorSystem, OrthogonalityGraph) {
    let sys = complete_mub(d).unwrap().flatten();
    let g = build_graph(&classify_pairs(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap()).unwrap();
    (sys, g)
}

#[test]
fn d3_classification() {
    let sys = complete_mub(3).unwrap().flatten();
    let pc = classify_pairs(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap();
    let s = pc.summary();
    assert_eq!((s.orthogonal, s.unbiased, s.violation), (12, 54, 0));
    assert!(pc.violations().is_empty());
    assert_eq!(pc.label(0, 0), PairLabel::SelfPair);
    assert_eq!(pc.label(0, 1), PairLabel::Orthogonal);
    assert_eq!(pc.label(0, 3), PairLabel::Unbiased);
}

#[test]
fn graphs_match_overlap_oracle() {
    for d in [2, 3, 4, 5, 7] {
        let (sys, g) = mub_graph(d);
        let adj = adjacency_oracle(&sys);
        for (j, row) in adj.iter().enumerate() {
            for (k, &e) in row.iter().enumerate() {
                assert_eq!(g.has_edge(j, k), e);
            }
        }
        assert_eq!(g.ordered_triangle_count(), triangles_oracle(&adj), "d={d}");
        assert_eq!(g.components(), components_oracle(&adj));
    }
}

#[test]
fn edge_counts() {
    assert_eq!(mub_graph(2).1.edge_count(), 3);
    assert_eq!(mub_graph(3).1.edge_count(), 12);
}

#[test]
fn d5_degrees() {
    let (_, g) = mub_graph(5);
    assert!(g.degree_sequence().iter().all(|&x| x == 4));
    assert_eq!(g.regular_degree(), Some(4));
    assert_eq!(g.adjacency_sum(), 2 * g.edge_count());
}

#[test]
fn dropping_a_vector_breaks_regularity() {
    let sys = mutate_drop(&complete_mub(3).unwrap().flatten(), 0).unwrap();
    let g = build_graph(&classify_pairs(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap()).unwrap();
    let adj = adjacency_oracle(&sys);
    let degrees: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&e| e).count()).collect();
    assert_eq!(g.degree_sequence(), degrees);
    assert_eq!(g.regular_degree(), None);
    assert_eq!(degrees.iter().filter(|&&x| x == 1).count(), 2);
}

#[test]
fn triangles() {
    assert_eq!(mub_graph(3).1.ordered_triangle_count(), 24);
    assert_eq!(mub_graph(5).1.ordered_triangle_count(), 360);
}

#[test]
fn d3_spectrum() {
    let (_, g) = mub_graph(3);
    let s = g.adjacency_spectrum().unwrap();
    let clusters = cluster_spectrum(&s.eigenvalues, SPECTRAL_CLUSTER_GAP);
    assert_eq!(clusters.len(), 2);
    assert_eq!((clusters[0].multiplicity, clusters[1].multiplicity), (4, 8));
    assert!((clusters[0].value - 2.0).abs() < 1e-10);
    assert!((clusters[1].value + 1.0).abs() < 1e-10);
}

#[test]
fn d3_components_are_triangles() {
    let (_, g) = mub_graph(3);
    let parts = g.clique_partition(3).unwrap();
    assert_eq!(parts.len(), 4);
    assert!(parts.iter().all(|p| p.len() == 3));
    assert!(g.is_disjoint_union_of_cliques(3));
}

#[test]
fn clique_partition_errors() {
    let (_, g) = mub_graph(2);
    assert!(matches!(g.clique_partition(3), Err(Error::InvalidInput(_))));
    let path = OrthogonalityGraph::from_edges(6, &[(0, 1), (1, 2), (3, 4)]).unwrap();
    match path.clique_partition(2) {
        Err(Error::StructureMismatch { expected_parts, expected_size, components }) => {
            assert_eq!((expected_parts, expected_size), (3, 2));
            assert_eq!(components.len(), 3);
            assert!(!components[0].complete);
            assert!(components[1].complete);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn build_graph_refuses_violations() {
    let mut vs = complete_mub(2).unwrap().flatten().into_parts().1;
    vs[0] = mub_core::cxla::CVector::from_reals(&[0.6, 0.8]).unwrap();
    let sys = UnitVectorSystem::new(2, vs).unwrap();
    let pc = classify_pairs(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap();
    assert!(pc.summary().violation > 0);
    assert!(matches!(build_graph(&pc), Err(Error::NotApplicable(_))));
}

fn random_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=90, 0.0f64..0.5).prop_flat_map(|(n, p)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        prop::collection::vec(prop::bool::weighted(p), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e).collect();
            (n, edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triangles_are_trace_of_cube((n, edges) in random_graph()) {
        let g = OrthogonalityGraph::from_edges(n, &edges).unwrap();
        let cubes: f64 = g.adjacency_spectrum().unwrap().eigenvalues.iter().map(|l| l * l * l).sum();
        let t = g.ordered_triangle_count();
        prop_assert!((cubes - t as f64).abs() <= 1e-6, "{} vs {}", cubes, t);
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in &edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        prop_assert_eq!(t, triangles_oracle(&adj));
        prop_assert_eq!(g.components(), components_oracle(&adj));
        prop_assert_eq!(g.adjacency_sum(), 2 * edges.len());
    }
}
