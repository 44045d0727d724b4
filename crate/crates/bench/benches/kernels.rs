use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use quietlift_bench::{null_graph, planted, BENCH_SEED};
use quietlift_core::ensembles::{random_lift, sample_regular};
use quietlift_core::exact::{independence_exact, max_t_cut_exact};
use quietlift_core::harness::{builtin, necklace};
use quietlift_core::sdp::{
    chebyshev_certificate, m_weight, path_stats_check, planted_witness, PartiallyLabelledGraph, PathStatsInstance,
    DEFAULT_S_CAP,
};
use quietlift_core::spectral::{nb_matrices, nontrivial_extremes};

fn ensembles(c: &mut Criterion) {
    let mut g = c.benchmark_group("ensembles");
    for n in [500, 2000] {
        g.bench_with_input(BenchmarkId::new("sample_regular_d3", n), &n, |b, &n| {
            b.iter(|| sample_regular(n, 3, BENCH_SEED))
        });
    }
    let h = builtin("fig1_d3").unwrap();
    g.bench_function("random_lift_fig1_m100", |b| b.iter(|| random_lift(&h, 100, BENCH_SEED)));
    g.finish();
}

fn spectral(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral");
    g.sample_size(10);
    let big = null_graph(2000, 3);
    g.bench_function("lanczos_extremes_n2000", |b| b.iter(|| nontrivial_extremes(&big, false)));
    let small = null_graph(300, 3);
    g.bench_function("nb_matrices_n300_s4", |b| b.iter(|| nb_matrices(&small, 4)));
    g.finish();
}

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    let fig1 = builtin("fig1_d3").unwrap();
    g.bench_function("max_cut_fig1", |b| b.iter(|| max_t_cut_exact(&fig1, 2)));
    let g40 = null_graph(40, 3);
    g.bench_function("independence_n40", |b| b.iter(|| independence_exact(&g40)));
    g.finish();
}

fn sdp(c: &mut Criterion) {
    let mut g = c.benchmark_group("sdp");
    g.sample_size(10);
    let lift = planted("complete_3", 100);
    let inst = PathStatsInstance::from_base(&lift.base, 3, 0.1, false).unwrap();
    let p = planted_witness(&lift);
    g.bench_function("path_stats_check_n400", |b| b.iter(|| path_stats_check(&lift.graph, black_box(&p), &inst, None)));
    let neck = PathStatsInstance::from_base(&necklace(10).unwrap(), 32, 0.01, false).unwrap();
    g.bench_function("chebyshev_certificate_necklace10", |b| b.iter(|| chebyshev_certificate(&neck, DEFAULT_S_CAP)));
    let h = builtin("fig2_d4").unwrap();
    let path = PartiallyLabelledGraph::path(6, 0, 3).unwrap();
    g.bench_function("m_weight_path6_fig2", |b| b.iter(|| m_weight(&path, &h)));
    g.finish();
}

criterion_group!(benches, ensembles, spectral, exact, sdp);
criterion_main!(benches);
