use num_rational::Rational64;
use quietlift_core::ensembles::{random_lift, sample_regular};
use quietlift_core::exact::*;
use quietlift_core::harness::builtin;
use quietlift_core::{Error, Multigraph, SimpleGraph};

fn petersen() -> SimpleGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    SimpleGraph::from_edges(10, &e).unwrap()
}

fn small_graphs() -> Vec<SimpleGraph> {
    let mut out = vec![petersen()];
    for seed in 0..4 {
        out.push(sample_regular(10, 3, seed).unwrap());
        out.push(sample_regular(12, 3, seed).unwrap());
        out.push(sample_regular(10, 4, seed).unwrap());
    }
    out
}

fn brute_cut(g: &SimpleGraph, t: usize) -> Rational64 {
    let n = g.n();
    let edges = g.edges();
    let mut labels = vec![0usize; n];
    let mut best = 0;
    for mut code in 0..t.pow(n as u32) {
        for l in labels.iter_mut() {
            *l = code % t;
            code /= t;
        }
        best = best.max(edges.iter().filter(|&&(u, v)| labels[u] != labels[v]).count());
    }
    Rational64::new(best as i64, edges.len() as i64)
}

fn closed_masks(g: &SimpleGraph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(1 << v, |m, &w| m | 1 << w)).collect()
}

fn brute_independence(g: &SimpleGraph) -> usize {
    let adj: Vec<u32> = closed_masks(g).iter().enumerate().map(|(v, m)| m & !(1 << v)).collect();
    (0u32..1 << g.n())
        .filter(|s| (0..g.n()).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

fn brute_domination(g: &SimpleGraph) -> usize {
    let closed = closed_masks(g);
    let all = (1u32 << g.n()) - 1;
    (0u32..=all)
        .filter(|s| (0..g.n()).filter(|v| s >> v & 1 == 1).fold(0, |m, v| m | closed[v]) == all)
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap()
}

fn colorable(g: &SimpleGraph, k: usize, v: usize, col: &mut Vec<usize>) -> bool {
    if v == g.n() {
        return true;
    }
    for c in 0..k {
        if g.neighbors(v).iter().all(|&w| w >= v || col[w] != c) {
            col[v] = c;
            if colorable(g, k, v + 1, col) {
                return true;
            }
        }
    }
    false
}

fn brute_chromatic(g: &SimpleGraph) -> usize {
    (1..=g.n()).find(|&k| colorable(g, k, 0, &mut vec![0; g.n()])).unwrap()
}

fn brute_expansion(g: &SimpleGraph, smax: usize, mode: ExpansionMode, inclusive: bool) -> Rational64 {
    let n = g.n();
    let mut best: Option<Rational64> = None;
    for s in 1u32..1 << n {
        let size = s.count_ones() as usize;
        if size > smax {
            continue;
        }
        let inside = |v: usize| s >> v & 1 == 1;
        let num = match mode {
            ExpansionMode::Edge => g.edges().iter().filter(|&&(u, v)| inside(u) != inside(v)).count(),
            ExpansionMode::Vertex => (0..n)
                .filter(|&v| (inclusive || !inside(v)) && g.neighbors(v).iter().any(|&w| inside(w)))
                .count(),
        };
        let r = Rational64::new(num as i64, size as i64);
        best = Some(best.map_or(r, |b| b.min(r)));
    }
    best.unwrap()
}

#[test]
fn cuts_match_enumeration() {
    for (idx, g) in small_graphs().iter().enumerate() {
        let two = max_t_cut_exact(g, 2).unwrap();
        assert_eq!(two.value, brute_cut(g, 2), "graph {idx}");
        let Witness::Labels(l) = &two.witness else { panic!() };
        assert_eq!(cut_fraction(g, l), two.value);
        if g.n() <= 10 {
            assert_eq!(max_t_cut_exact(g, 3).unwrap().value, brute_cut(g, 3), "graph {idx}");
        }
    }
}

#[test]
fn independence_domination_chromatic_match_enumeration() {
    for (idx, g) in small_graphs().iter().enumerate() {
        let n = g.n() as i64;
        let ind = independence_exact(g).unwrap();
        assert_eq!(ind.value, Rational64::new(brute_independence(g) as i64, n), "graph {idx}");
        let Witness::Set(s) = &ind.witness else { panic!() };
        assert!(is_independent(g, s));
        let dom = domination_exact(g).unwrap();
        assert_eq!(dom.value, Rational64::new(brute_domination(g) as i64, n), "graph {idx}");
        let Witness::Set(s) = &dom.witness else { panic!() };
        assert!(is_dominating(g, s));
        let chi = chromatic_exact(g).unwrap();
        assert_eq!(chi.value, Rational64::from_integer(brute_chromatic(g) as i64), "graph {idx}");
        let Witness::Labels(l) = &chi.witness else { panic!() };
        assert!(is_proper_coloring(g, l));
    }
}

#[test]
fn expansion_matches_enumeration() {
    for g in small_graphs().iter().take(6) {
        for mode in [ExpansionMode::Vertex, ExpansionMode::Edge] {
            for (conv, inclusive) in [(BoundaryConvention::Inclusive, true), (BoundaryConvention::Disjoint, false)] {
                let all = small_set_expansion_exact(g, 0.4, mode, ExpansionSearch::AllSubsets, conv).unwrap();
                assert_eq!(all.value, brute_expansion(g, (0.4 * g.n() as f64) as usize, mode, inclusive));
                let Witness::Set(s) = &all.witness else { panic!() };
                assert_eq!(expansion_ratio(g, s, mode, conv), all.value);
                let conn = small_set_expansion_exact(g, 0.4, mode, ExpansionSearch::Connected, conv).unwrap();
                assert!(conn.value >= all.value);
            }
        }
    }
}

#[test]
fn size_caps_and_parameters() {
    let big = sample_regular(MAX_CHROMATIC_N + 2, 3, 0).unwrap();
    assert!(matches!(chromatic_exact(&big), Err(Error::SizeCapExceeded(_))));
    let g = petersen();
    assert!(max_t_cut_exact(&g, 1).is_err());
    let r = small_set_expansion_exact(&g, 0.05, ExpansionMode::Edge, ExpansionSearch::Connected, Default::default());
    assert!(matches!(r, Err(Error::InvalidParameter(_))));
}

#[test]
fn multigraph_normalizations() {
    // bouquet of 4 loops: 2 edges, all loops, nothing can be cut
    assert_eq!(max_t_cut_exact(&Multigraph::bouquet(4), 2).unwrap().value, Rational64::from_integer(0));
    // double edge plus one loop at each end: 3 edges, 2 of them cut
    let h = Multigraph::new(vec![vec![1, 2], vec![2, 1]]).unwrap();
    assert_eq!(max_t_cut_exact(&h, 2).unwrap().value, Rational64::new(2, 3));
    // a looped vertex contributes half its fiber, and the two vertices are adjacent
    assert_eq!(modified_independence(&h).unwrap().value, Rational64::new(1, 4));
}

#[test]
fn lifted_witnesses_keep_value_and_validity() {
    for (name, m) in [("fig1_d3", 4), ("fig2_d4", 4), ("fig4_d7", 3), ("complete_3", 5)] {
        let h = builtin(name).unwrap();
        let lift = random_lift(&h, m, 3).unwrap();
        let mut results = vec![max_t_cut_exact(&h, 2).unwrap(), domination_exact(&h).unwrap()];
        if h.n() <= MAX_CHROMATIC_N && !h.has_loops() {
            results.push(chromatic_exact(&h).unwrap());
        }
        results.push(if h.has_loops() { modified_independence(&h).unwrap() } else { independence_exact(&h).unwrap() });
        for r in results {
            let la = lift_assignment(&r, &lift).unwrap();
            assert!(la.valid, "{name} {:?}", r.quantity);
            assert_eq!(la.lifted_value, r.value, "{name} {:?}", r.quantity);
        }
    }
    let other = random_lift(&Multigraph::complete(4), 2, 0).unwrap();
    let r = domination_exact(&builtin("fig1_d3").unwrap()).unwrap();
    assert!(matches!(lift_assignment(&r, &other), Err(Error::BaseMismatch)));
}

#[test]
fn repairs_restore_feasibility() {
    for seed in 0..5 {
        let g = sample_regular(40, 3, seed).unwrap();
        let everything: Vec<usize> = (0..40).collect();
        let ind = repair_independent(&g, &everything);
        assert!(is_independent(&g, &ind) && !ind.is_empty());
        let dom = repair_dominating(&g, &[0, 1]);
        assert!(is_dominating(&g, &dom));
        assert_eq!(repair_dominating(&g, &everything), everything);
    }
}
