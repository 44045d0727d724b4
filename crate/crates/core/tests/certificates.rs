use quietlift_core::certificates::*;
use quietlift_core::ensembles::sample_regular;
use quietlift_core::exact::{chromatic_exact, independence_exact, max_t_cut_exact};
use quietlift_core::{double_cover, Error, Multigraph, SimpleGraph};

fn petersen() -> SimpleGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    SimpleGraph::from_edges(10, &e).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

#[test]
fn hoffman_closed_forms_on_petersen() {
    // lambda_n = -2, d = 3
    let g = petersen();
    assert!(close(hoffman_independence(&g).unwrap().bound, 0.4));
    assert_eq!(hoffman_chromatic(&g).unwrap().bound, 3.0);
    assert!(close(hoffman_max_t_cut(&g, 2).unwrap().bound, 5.0 / 6.0));
    assert!(close(hoffman_max_t_cut(&g, 3).unwrap().bound, 10.0 / 9.0));
    assert!(hoffman_max_t_cut(&g, 2).unwrap().inputs.lambda_n_deflated.is_none());
}

#[test]
fn hoffman_is_tight_on_complete_graph() {
    let k4 = Multigraph::complete(4);
    assert!(close(hoffman_independence(&k4).unwrap().bound, 0.25));
    assert_eq!(hoffman_chromatic(&k4).unwrap().bound, 4.0);
    assert!(close(hoffman_max_t_cut(&k4, 2).unwrap().bound, 2.0 / 3.0));
    assert_eq!(max_t_cut_exact(&k4, 2).unwrap().value_f64(), 2.0 / 3.0);
}

#[test]
fn bipartite_input_gives_trivial_bounds() {
    let g = double_cover(&Multigraph::complete(4));
    let cut = hoffman_max_t_cut(&g, 2).unwrap();
    assert!(close(cut.bound, 1.0));
    assert!(close(cut.inputs.lambda_n_deflated.unwrap(), -1.0));
    assert!(close(hoffman_independence(&g).unwrap().bound, 0.5));
    assert_eq!(hoffman_chromatic(&g).unwrap().bound, 2.0);
}

#[test]
fn hoffman_bounds_are_sound_on_random_cubic_graphs() {
    for seed in 0..15 {
        let g = sample_regular(14, 3, seed).unwrap();
        let cut = max_t_cut_exact(&g, 2).unwrap().value_f64();
        assert!(cut <= hoffman_max_t_cut(&g, 2).unwrap().bound + 1e-9);
        let ind = independence_exact(&g).unwrap().value_f64();
        assert!(ind <= hoffman_independence(&g).unwrap().bound + 1e-9);
        let chi = chromatic_exact(&g).unwrap().value_f64();
        assert!(chi >= hoffman_chromatic(&g).unwrap().bound);
    }
}

#[test]
fn kahale_values_at_the_ramanujan_threshold() {
    for d in [3usize, 4, 7] {
        let df = d as f64;
        let r = 2.0 * (df - 1.0).sqrt();
        // the square root amplifies rounding in lambda~^2 - 4(d-1) near zero
        assert!((kahale_vertex_value(df, r) - df / 2.0).abs() < 1e-6);
        assert!((kahale_edge_value(df, r) - (df - 1.0 - (df - 1.0).sqrt())).abs() < 1e-6);
        // larger lambda~ weakens both bounds
        assert!(kahale_vertex_value(df, r + 0.3) < df / 2.0);
        assert!(kahale_edge_value(df, r + 0.3) < kahale_edge_value(df, r));
    }
    let c = kahale_bound(&petersen(), 0.1, ExpansionMode::Vertex).unwrap();
    assert!((c.bound - 1.5).abs() < 1e-6);
    assert!(close(c.inputs.spectral, 2.0 * 2f64.sqrt()));
    assert!(c.correction.is_some());
}

#[test]
fn parameter_errors() {
    let g = petersen();
    assert!(matches!(hoffman_max_t_cut(&g, 1), Err(Error::InvalidParameter(_))));
    assert!(kahale_bound(&g, 0.0, ExpansionMode::Edge).is_err());
    assert!(kahale_bound(&g, 1.0, ExpansionMode::Edge).is_err());
    assert!(trivial_domination(0).is_err());
    assert!(close(trivial_domination(3).unwrap().bound, 0.25));
    assert_eq!("max-cut".parse::<Quantity>().unwrap(), Quantity::MaxTCut);
    assert!("nope".parse::<Quantity>().is_err());
}

#[test]
fn closed_form_values() {
    assert!(close(hoffman_max_t_cut_value(4.0, -2.0, 2), 0.75));
    assert!(close(hoffman_independence_value(3.0, -3.0), 0.5));
    // d / |lambda_n| exactly integral must not round up
    assert_eq!(hoffman_chromatic_value(4.0, -2.0), 3.0);
    assert_eq!(hoffman_chromatic_value(4.0, -1.9), 4.0);
}
