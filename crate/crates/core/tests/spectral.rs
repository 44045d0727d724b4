use std::collections::{BTreeSet, VecDeque};

use quietlift_core::ensembles::{random_lift, sample_regular};
use quietlift_core::harness::builtin;
use quietlift_core::spectral::*;
use quietlift_core::{Multigraph, SimpleGraph};

fn petersen() -> SimpleGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    SimpleGraph::from_edges(10, &e).unwrap()
}

fn nb_walks(g: &SimpleGraph, u: usize, prev: Option<usize>, left: usize, counts: &mut [u64]) {
    if left == 0 {
        counts[u] += 1;
        return;
    }
    for &w in g.neighbors(u) {
        if Some(w) != prev {
            nb_walks(g, w, Some(u), left - 1, counts);
        }
    }
}

fn short_cycle_vertices(g: &SimpleGraph, c: usize) -> BTreeSet<usize> {
    fn dfs(g: &SimpleGraph, start: usize, at: usize, path: &mut Vec<usize>, c: usize, out: &mut BTreeSet<usize>) {
        for &w in g.neighbors(at) {
            if w == start && path.len() >= 3 {
                out.extend(path.iter().copied());
            } else if !path.contains(&w) && path.len() < c {
                path.push(w);
                dfs(g, start, w, path, c, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        dfs(g, s, s, &mut vec![s], c, &mut out);
    }
    out
}

fn near(g: &SimpleGraph, sources: &BTreeSet<usize>, l: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut q: VecDeque<usize> = sources.iter().copied().collect();
    sources.iter().for_each(|&s| dist[s] = 0);
    while let Some(x) = q.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    (0..g.n()).filter(|&v| dist[v] <= l).collect()
}

#[test]
fn nb_matrices_count_non_backtracking_walks() {
    for g in [petersen(), sample_regular(16, 3, 4).unwrap(), sample_regular(12, 4, 1).unwrap()] {
        let mats = nb_matrices(&g, 6);
        for (s, a) in mats.iter().enumerate() {
            for u in 0..g.n() {
                let mut counts = vec![0; g.n()];
                nb_walks(&g, u, None, s, &mut counts);
                for v in 0..g.n() {
                    assert_eq!(a[(u, v)], counts[v] as f64, "s={s} ({u},{v})");
                }
            }
        }
    }
}

#[test]
fn nb_polynomial_agrees_with_values_and_matrices() {
    assert_eq!(nb_polynomial(2, 3).coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["-3", "0", "1"]);
    for s in 0..8 {
        let p = nb_polynomial(s, 4);
        for x in [-3.0, -0.5, 0.0, 1.7, 3.4] {
            assert!((p.eval(x) - nb_value(s, 4, x)).abs() < 1e-9);
        }
    }
    let g = petersen();
    let a = nb_matrices(&g, 5);
    let b = nb_poly_matrices(&g.adjacency_matrix(), 3, 5);
    for s in 0..=5 {
        assert!((0..10).all(|i| (0..10).all(|j| a[s][(i, j)] == b[s][(i, j)])));
    }
}

#[test]
fn nb_polynomials_are_km_orthogonal() {
    for d in [3usize, 4, 7] {
        let q = KmQuadrature::new(d, 64);
        for s in 0..7 {
            for t in 0..7 {
                let v = q.integrate(|x| nb_value(s, d, x) * nb_value(t, d, x));
                let expected = match (s == t, s) {
                    (false, _) => 0.0,
                    (true, 0) => 1.0,
                    (true, s) => d as f64 * ((d - 1) as f64).powi(s as i32 - 1),
                };
                assert!((v - expected).abs() < 1e-8 * expected.max(1.0), "d={d} s={s} t={t}: {v}");
            }
        }
    }
}

#[test]
fn km_density_integrates_to_one() {
    assert!((km_expectation(3, |_| 1.0) - 1.0).abs() < 1e-10);
    assert!((km_moment(&[0.0, 0.0, 1.0], 5) - 5.0).abs() < 1e-9);
    assert_eq!(km_density(3, 3.0), 0.0);
    let (x, w) = gauss_legendre(5);
    let int: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
    assert!((int - 2.0 / 9.0).abs() < 1e-13);
}

#[test]
fn chebyshev_forms_agree() {
    assert_eq!(chebyshev_t(3).iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["0", "-3", "0", "4"]);
    for s in 0..10 {
        let c = chebyshev_t(s);
        for x in [-0.9, 0.0, 0.3, 1.0] {
            assert!((poly_eval(&c, x) - (s as f64 * f64::acos(x)).cos()).abs() < 1e-9);
        }
        for x in [1.2, -1.5, 3.0] {
            let rel = (poly_eval(&c, x) - chebyshev_eval(s, x)).abs() / poly_eval(&c, x).abs().max(1.0);
            assert!(rel < 1e-10, "s={s} x={x}");
        }
    }
}

#[test]
fn self_avoiding_counts_match_brute_force() {
    let g = petersen();
    for s in 1..=5 {
        let sa = self_avoiding_matrix(&g, s).unwrap();
        for u in 0..10 {
            for v in 0..10 {
                let mut n = 0;
                let mut stack = vec![vec![u]];
                while let Some(p) = stack.pop() {
                    if p.len() == s + 1 {
                        n += (*p.last().unwrap() == v) as u64;
                        continue;
                    }
                    for &w in g.neighbors(*p.last().unwrap()) {
                        if !p.contains(&w) {
                            let mut q = p.clone();
                            q.push(w);
                            stack.push(q);
                        }
                    }
                }
                assert_eq!(sa[(u, v)], n as f64);
            }
        }
    }
    assert!(self_avoiding_matrix(&g, SA_DEFAULT_CAP + 1).is_err());
}

#[test]
fn bad_vertices_match_cycle_enumeration() {
    for seed in 0..10 {
        let g = sample_regular(40, 3, seed).unwrap();
        for (l, c) in [(0, 4), (1, 5), (2, 6)] {
            let expected = near(&g, &short_cycle_vertices(&g, c), l);
            assert_eq!(bad_vertices(&g, l, c), expected, "seed={seed} l={l} c={c}");
        }
    }
    // Petersen has girth 5
    assert!(bad_vertices(&petersen(), 3, 4).is_empty());
    assert_eq!(bad_vertices(&petersen(), 0, 5).len(), 10);
}

#[test]
fn ramanujan_examples() {
    let p = petersen();
    let s = graph_spectrum(&p, false).unwrap();
    assert!((s.lambda_2() - 1.0).abs() < 1e-9 && (s.lambda_n() + 2.0).abs() < 1e-9);
    assert!(is_ramanujan(&p, false).unwrap().ramanujan);
    let k4 = Multigraph::complete(4);
    let r = is_ramanujan(&k4, false).unwrap();
    assert!(r.ramanujan && (r.extreme - 1.0).abs() < 1e-9);
    let cycle = SimpleGraph::from_edges(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap();
    let s = graph_spectrum(&cycle, true).unwrap();
    assert_eq!(s.trivial_mask.iter().filter(|&&t| t).count(), 2);
    assert!((s.extreme_nontrivial() - 1.0).abs() < 1e-9);
    assert!(graph_spectrum(&cycle, false).unwrap().extreme_nontrivial() > 1.9);
}

#[test]
fn lanczos_matches_dense() {
    let g = sample_regular(DENSE_LIMIT + 100, 3, 11).unwrap();
    let lanczos = nontrivial_extremes(&g, false).unwrap();
    let dense = graph_spectrum(&g, false).unwrap();
    assert!((lanczos.lambda_2 - dense.lambda_2()).abs() < 1e-5);
    assert!((lanczos.lambda_min - dense.lambda_min_nontrivial()).abs() < 1e-5);
}

#[test]
fn lift_spectrum_contains_base_spectrum() {
    let h = builtin("fig3_d4").unwrap();
    let base = graph_spectrum(&h, false).unwrap().values;
    let lift = random_lift(&h, 6, 2).unwrap();
    let full = symmetric_spectrum(&lift.graph.adjacency_matrix(), false).unwrap().values;
    for b in base {
        assert!(full.iter().any(|v| (v - b).abs() < 1e-8), "{b}");
    }
}
