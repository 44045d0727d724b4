use quietlift_core::ensembles::*;
use quietlift_core::graph_distance;
use quietlift_core::harness::builtin;
use quietlift_core::{double_cover, find_bipartition, Error, Multigraph, SimpleGraph};

fn is_bipartite(g: &SimpleGraph) -> bool {
    find_bipartition(g).map(|l| l.is_some()).unwrap_or(false)
}

#[test]
fn regular_sampler_basic_contract() {
    for (n, d) in [(10, 3), (50, 4), (40, 7), (30, 9)] {
        let g = sample_regular(n, d, 1).unwrap();
        assert_eq!(g.n(), n);
        assert_eq!(g.regular_degree(), Some(d));
        assert_eq!(g, sample_regular(n, d, 1).unwrap());
    }
    assert_ne!(sample_regular(50, 3, 1).unwrap(), sample_regular(50, 3, 2).unwrap());
    assert!(matches!(sample_regular(7, 3, 0), Err(Error::ParityViolation { .. })));
    assert!(sample_regular(4, 4, 0).is_err());
}

#[test]
fn pairing_sampler_is_uniform_on_cubic_six_vertex_graphs() {
    // 70 labelled cubic graphs on 6 vertices: 10 copies of K_{3,3}, 60 prisms
    let trials = 7000;
    let bip = (0..trials)
        .filter(|&s| is_bipartite(&sample_regular_with(6, 3, s, RegularMethod::Pairing, 10_000).unwrap()))
        .count();
    let p = bip as f64 / trials as f64;
    assert!((p - 1.0 / 7.0).abs() < 0.02, "K33 frequency {p}");
}

#[test]
fn bipartite_sampler_crosses_sides() {
    let (g, layout) = sample_bipartite_regular(40, 3, 9).unwrap();
    assert_eq!(g.regular_degree(), Some(3));
    let side = layout.side_of();
    assert_eq!(layout.left.len(), 20);
    assert!(g.edges().iter().all(|&(u, v)| side[u] != side[v]));
}

#[test]
fn lifts_are_balanced_and_block_regular() {
    for name in ["fig1_d3", "fig2_d4", "complete_3", "hkd(3,4)"] {
        let h = builtin(name).unwrap();
        let lift = random_lift(&h, 10, 5).unwrap();
        assert!(lift.check_invariants(), "{name}");
        assert_eq!(lift.n(), 10 * h.n());
        assert_eq!(lift.graph.regular_degree(), h.regular_degree());
        for u in 0..lift.n() {
            for j in 0..h.n() {
                let c = lift.graph.neighbors(u).iter().filter(|&&w| lift.sigma[w] == j).count();
                let i = lift.sigma[u];
                let expected = if i == j { h.loops(i) } else { h.mult(i, j) };
                assert_eq!(c as u32, expected);
            }
        }
        assert_eq!(lift, random_lift(&h, 10, 5).unwrap());
    }
}

#[test]
fn odd_fibers_with_loops_rejected() {
    let h = builtin("fig1_d3").unwrap();
    assert!(matches!(random_lift(&h, 3, 0), Err(Error::OddFiberWithLoops(3))));
    assert!(random_lift(&Multigraph::complete(4), 3, 0).is_ok());
}

#[test]
fn multilift_keeps_degrees() {
    let h = builtin("hkd(2,3)").unwrap();
    let (g, sigma) = random_multilift(&h, 4, 2).unwrap();
    assert_eq!(g.regular_degree(), Some(3));
    assert_eq!(sigma, vec![0, 0, 0, 0, 1, 1, 1, 1]);
}

#[test]
fn lift_indicators_and_vectors() {
    let h = Multigraph::complete(4);
    let lift = random_lift(&h, 3, 1).unwrap();
    let x = lift.indicators();
    assert_eq!((x.nrows(), x.ncols()), (12, 4));
    for u in 0..12 {
        let row: f64 = (0..4).map(|i| x[(u, i)]).sum();
        assert_eq!(row, 1.0);
        assert_eq!(x[(u, lift.sigma[u])], 1.0);
    }
    assert_eq!(lift.lift_vector(&[1.0, 2.0, 3.0, 4.0])[4], 2.0);
}

#[test]
fn rand_noise_respects_budget_and_degree() {
    let h = builtin("fig1_d3").unwrap();
    let lift = random_lift(&h, 20, 3).unwrap();
    let spec = NoiseSpec::new(0.05, NoiseMode::Rand);
    let out = apply_noise(&lift.graph, &spec, None, 4).unwrap();
    assert_eq!(out.graph.regular_degree(), Some(3));
    assert_eq!(out.removed.len(), spec.budget(lift.n()));
    let dist = graph_distance(&lift.graph, &out.graph).unwrap();
    assert!(*dist.numer() as f64 / *dist.denom() as f64 <= 0.05 + 1e-12);
    let again = apply_noise(&lift.graph, &spec, None, 4).unwrap();
    assert_eq!(out.graph, again.graph);
}

#[test]
fn zero_budget_is_identity() {
    let g = sample_regular(30, 3, 0).unwrap();
    let out = apply_noise(&g, &NoiseSpec::new(0.01, NoiseMode::Rand), None, 0).unwrap();
    assert_eq!(out.graph, g);
    assert!(out.removed.is_empty());
}

#[test]
fn respectful_noise_stays_on_base_edges() {
    let h = builtin("fig2_d4").unwrap();
    let lift = random_lift(&h, 24, 8).unwrap();
    let spec = NoiseSpec::new(0.1, NoiseMode::RespectfulRand);
    assert!(matches!(apply_noise(&lift.graph, &spec, None, 1), Err(Error::MissingBase)));
    let out = apply_noise(&lift.graph, &spec, Some(&lift), 1).unwrap();
    for (u, v) in out.graph.edges() {
        assert!(h.mult(lift.sigma[u], lift.sigma[v]) > 0);
    }
}

#[test]
fn bipartite_noise_keeps_bipartition() {
    let h = double_cover(&Multigraph::complete(4));
    let lift = random_lift(&h, 10, 2).unwrap();
    let out = apply_noise(&lift.graph, &NoiseSpec::new(0.1, NoiseMode::RandBi), None, 3).unwrap();
    assert!(is_bipartite(&out.graph));
    assert!(apply_noise(&sample_regular(30, 3, 1).unwrap(), &NoiseSpec::new(0.1, NoiseMode::RandBi), None, 0).is_err());
}

#[test]
fn adversarial_switching_within_budget() {
    let g = sample_regular(60, 3, 5).unwrap();
    let out = apply_noise(&g, &NoiseSpec::new(0.05, NoiseMode::Adversarial), None, 6).unwrap();
    assert_eq!(out.graph.regular_degree(), Some(3));
    let dist = graph_distance(&g, &out.graph).unwrap();
    assert!(*dist.numer() as f64 / *dist.denom() as f64 <= 0.05 + 1e-12);
}

#[test]
fn roc_point_counts_strict_exceedances() {
    let null = [1.0, 2.0, 3.0, 4.0];
    let planted = [3.0, 5.0, 6.0, 7.0];
    let p = roc_point(&null, &planted, 3.0);
    assert_eq!((p.type_i, p.type_ii), (0.25, 0.25));
    let curve = roc_curve(&null, &planted);
    assert_eq!(curve.first().unwrap().type_i, 1.0);
    assert_eq!(curve.last().unwrap().type_ii, 1.0);
    assert!(curve.windows(2).all(|w| w[0].type_i >= w[1].type_i && w[0].type_ii <= w[1].type_ii));
}

#[test]
fn detection_is_thread_count_independent() {
    let h = builtin("necklace(4)").unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let null = |s: u64| sample_regular(160, 3, s);
            let planted = |s: u64| random_lift(&h, 10, s).map(|l| l.graph);
            detect_experiment(&null, &planted, &spectral_radius_statistic, 2.9, 6, 17).unwrap()
        })
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.null_stats, b.null_stats);
    assert_eq!(a.planted_stats, b.planted_stats);
    assert_eq!(a.total_error(), b.total_error());
}
