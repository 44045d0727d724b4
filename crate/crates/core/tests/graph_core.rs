use proptest::prelude::*;
use quietlift_core::harness::builtin;
use quietlift_core::{
    degree_profile, double_cover, find_bipartition, graph_distance, Error, GraphJson, Multigraph, SimpleGraph,
};

fn cycle(n: usize) -> SimpleGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_edges(n, &edges).unwrap()
}

#[test]
fn loops_add_one_to_degree() {
    let h = Multigraph::new(vec![vec![1, 2], vec![2, 1]]).unwrap();
    assert_eq!(h.degree(0), 3);
    assert_eq!(h.regular_degree(), Some(3));
    assert!(h.has_loops());
    assert_eq!(Multigraph::bouquet(4).regular_degree(), Some(4));
}

#[test]
fn rejects_asymmetric_and_ragged() {
    assert!(matches!(Multigraph::new(vec![vec![0, 1], vec![0, 0]]), Err(Error::NotSymmetric(_))));
    assert!(matches!(Multigraph::new(vec![vec![0, 1], vec![1]]), Err(Error::SizeMismatch(_))));
}

#[test]
fn simple_graph_rejects_loops_and_parallel_edges() {
    assert!(SimpleGraph::from_edges(3, &[(0, 0)]).is_err());
    assert!(SimpleGraph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
    assert!(SimpleGraph::from_edges(3, &[(0, 5)]).is_err());
    assert!(SimpleGraph::from_multigraph(&builtin("fig1_d3").unwrap()).is_err());
}

#[test]
fn figure_graphs_are_regular_and_connected() {
    for (name, d) in [("fig1_d3", 3), ("fig2_d4", 4), ("fig3_d4", 4), ("fig4_d7", 7)] {
        let h = builtin(name).unwrap();
        assert_eq!(h.regular_degree(), Some(d), "{name}");
        assert!(h.is_connected(), "{name}");
        assert_eq!(degree_profile(&h), vec![d; h.n()]);
    }
}

#[test]
fn complete_graph_and_bipartiteness() {
    let k4 = Multigraph::complete(4);
    assert_eq!(k4.regular_degree(), Some(3));
    assert!(k4.two_coloring().is_none());
    let dc = double_cover(&k4);
    assert_eq!(dc.n(), 8);
    assert_eq!(dc.regular_degree(), Some(3));
    let col = dc.two_coloring().unwrap();
    assert!(col[..4].iter().all(|&c| c == col[0]) && col[4..].iter().all(|&c| c != col[0]));
}

#[test]
fn bipartition_of_even_and_odd_cycles() {
    let l = find_bipartition(&cycle(6)).unwrap().unwrap();
    assert_eq!(l.left, vec![0, 2, 4]);
    assert_eq!(l.right, vec![1, 3, 5]);
    assert_eq!(l.signs(), vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
    assert!(find_bipartition(&cycle(7)).unwrap().is_none());
    let disc = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
    assert!(matches!(find_bipartition(&disc), Err(Error::Disconnected)));
}

#[test]
fn distance_counts_symmetric_difference() {
    // C8 versus C8 with the chords rewired: 0-1,4-5 replaced by 0-4,1-5
    let g = cycle(8);
    let mut edges = g.edges();
    edges.retain(|&e| e != (0, 1) && e != (4, 5));
    edges.extend([(0, 4), (1, 5)]);
    let h = SimpleGraph::from_edges(8, &edges).unwrap();
    let r = graph_distance(&g, &h).unwrap();
    assert_eq!((*r.numer(), *r.denom()), (1, 4));
    assert_eq!(*graph_distance(&g, &g).unwrap().numer(), 0);
}

#[test]
fn json_round_trip() {
    let g = cycle(5);
    let text = serde_json::to_string(&g.to_json()).unwrap();
    let back: GraphJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.into_simple().unwrap(), g);
    let m: GraphJson = serde_json::from_str(r#"{"n": 2, "mult": [[1, 2], [2, 1]]}"#).unwrap();
    assert_eq!(m.into_multigraph().unwrap().regular_degree(), Some(3));
    let bad: GraphJson = serde_json::from_str(r#"{"n": 3, "mult": [[0, 1], [1, 0]]}"#).unwrap();
    assert!(bad.into_multigraph().is_err());
}

proptest! {
    #[test]
    fn relabelling_preserves_degrees(perm in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle()) {
        let h = builtin("fig1_d3").unwrap();
        let p = h.permuted(&perm);
        prop_assert_eq!(p.regular_degree(), Some(3));
        prop_assert_eq!(p.half_edge_count(), h.half_edge_count());
        let g = cycle(12);
        let q = g.permuted(&perm);
        prop_assert_eq!(q.num_edges(), 12);
        prop_assert!(q.is_connected());
    }

    #[test]
    fn distance_is_symmetric(a in 0u64..50, b in 0u64..50) {
        let g = quietlift_core::ensembles::sample_regular(20, 3, a).unwrap();
        let h = quietlift_core::ensembles::sample_regular(20, 3, b).unwrap();
        prop_assert_eq!(graph_distance(&g, &h).unwrap(), graph_distance(&h, &g).unwrap());
    }
}
