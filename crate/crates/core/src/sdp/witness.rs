use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::kernel::{build_kernels, KernelOptions, KernelSet};
use super::path_stats::{PathStatsInstance, PseudoPartition};
use crate::error::{Error, Result};
use crate::graph::{BipartiteLayout, SimpleGraph};
use crate::linalg::{sym_eigen, Matrix};
use crate::rng::rng_from;
use crate::spectral::bad_vertices;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullWitnessOptions {
    pub kernel: KernelOptions,
    /// Fail with `KernelMomentFailure` when the bumps miss their tolerance
    /// at the cap degree; otherwise continue and record the miss.
    pub strict: bool,
    /// Radius and cycle length for the bad-vertex scan; defaults to the level.
    pub bad_radius: Option<usize>,
    pub seed: u64,
}

impl Default for NullWitnessOptions {
    fn default() -> Self {
        NullWitnessOptions { kernel: KernelOptions::default(), strict: true, bad_radius: None, seed: 0x9e3779b9 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessLog {
    pub kernels: KernelSet,
    pub outlier_eigenvalues: Vec<f64>,
    pub bad_vertices: usize,
    pub repair_set: usize,
    pub diagonal_min_before: f64,
    pub diagonal_max_before: f64,
    /// `|sum of Gram vectors|` after per-vertex normalization and after repair.
    pub sum_norm_before: f64,
    pub sum_norm_after: f64,
    pub notes: Vec<String>,
}

/// Witness for the Path Statistics SDP on a graph from the null model:
/// `P = Y + J/k` where `Y` is the repaired Gram matrix of
/// `sum_j w(mu_j) u_j u_j^T` over nontrivial eigenpairs of `A_G`, and `w`
/// averages nonnegative bumps placed at the nontrivial base eigenvalues.
/// The bipartite variant uses even bumps and adds both trivial projectors.
pub fn null_witness(
    g: &SimpleGraph,
    instance: &PathStatsInstance,
    layout: Option<&BipartiteLayout>,
    options: &NullWitnessOptions,
) -> Result<(PseudoPartition, WitnessLog)> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if d != instance.degree {
        return Err(Error::InvalidParameter(format!("graph degree {d} differs from instance degree {}", instance.degree)));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let k = instance.k;
    let trivial = if instance.bipartite { 2 } else { 1 };
    if k <= trivial {
        return Err(Error::InvalidParameter(format!("k = {k} leaves no nontrivial eigenvalues")));
    }
    let lambdas = instance.nontrivial();
    let kernels = build_kernels(d, &lambdas, k, instance.level, instance.delta, &options.kernel, instance.bipartite);
    let mut notes = Vec::new();
    if !kernels.verified {
        if options.strict {
            return Err(Error::KernelMomentFailure { worst: kernels.worst, tol: kernels.tolerance });
        }
        notes.push(format!(
            "kernel moments miss tolerance {:.3e} at degree {} (worst {:.3e}); continuing",
            kernels.tolerance, kernels.degree, kernels.worst
        ));
    }
    let outlier_eigenvalues: Vec<f64> = kernels.outliers.iter().map(|&i| lambdas[i]).collect();
    if !outlier_eigenvalues.is_empty() {
        notes.push(format!("{} base eigenvalues outside the bulk; bumps clamped to the edge", outlier_eigenvalues.len()));
    }
    let radius = options.bad_radius.unwrap_or(instance.level);
    let bad = bad_vertices(g, radius, radius);
    let n = g.n();
    let r2 = (k - trivial) as f64 / k as f64;

    let mut log = WitnessLog {
        kernels,
        outlier_eigenvalues,
        bad_vertices: bad.len(),
        repair_set: 0,
        diagonal_min_before: f64::INFINITY,
        diagonal_max_before: f64::NEG_INFINITY,
        sum_norm_before: 0.0,
        sum_norm_after: 0.0,
        notes,
    };
    let mut rng = rng_from(options.seed);

    let groups: Vec<Vec<usize>> = if instance.bipartite {
        let side = layout.ok_or(Error::LayoutMissing)?.side_of();
        if side.len() != n || g.edges().iter().any(|&(u, v)| side[u] == side[v]) {
            return Err(Error::NotBipartite);
        }
        let left: Vec<usize> = (0..n).filter(|&u| side[u] == 0).collect();
        let right: Vec<usize> = (0..n).filter(|&u| side[u] == 1).collect();
        if left.len() != right.len() {
            return Err(Error::UnbalancedBipartition { left: left.len(), right: right.len() });
        }
        vec![left, right]
    } else {
        vec![(0..n).collect()]
    };

    let mut p = Matrix::zeros(n, n);
    let grams: Vec<Matrix> = if instance.bipartite {
        bipartite_grams(g, &groups, d, &log.kernels)?
    } else {
        let a = g.adjacency_matrix();
        let (vals, vecs) = sym_eigen(&a);
        let triv = most_aligned(&vecs, &(0..n).collect::<Vec<_>>());
        let mus: Vec<(usize, f64)> = (0..n).filter(|&j| j != triv).map(|j| (j, vals[j])).collect();
        let weights = mixture_weights(&log.kernels, d, k, &mus.iter().map(|m| m.1).collect::<Vec<_>>(), n as f64)?;
        vec![gram_columns(&vecs, &groups[0], &mus, &weights)]
    };

    let mut is_bad = vec![false; n];
    bad.iter().for_each(|&u| is_bad[u] = true);
    for (grp, mut b) in groups.iter().zip(grams) {
        let stats = repair(&mut b, r2, &grp.iter().map(|&u| is_bad[u]).collect::<Vec<_>>(), &mut rng)?;
        log.diagonal_min_before = log.diagonal_min_before.min(stats.diag_min);
        log.diagonal_max_before = log.diagonal_max_before.max(stats.diag_max);
        log.sum_norm_before = log.sum_norm_before.max(stats.sum_before);
        log.sum_norm_after = log.sum_norm_after.max(stats.sum_after);
        log.repair_set += stats.repaired;
        let y = &b * b.transpose();
        for (a, &u) in grp.iter().enumerate() {
            for (c, &v) in grp.iter().enumerate() {
                p[(u, v)] = y[(a, c)];
            }
        }
    }
    let same_side: Vec<usize> = if instance.bipartite {
        let side = layout.expect("checked above").side_of();
        side.iter().map(|&s| s as usize).collect()
    } else {
        vec![0; n]
    };
    let kf = k as f64;
    for j in 0..n {
        for i in 0..n {
            p[(i, j)] += if !instance.bipartite {
                1.0 / kf
            } else if same_side[i] == same_side[j] {
                2.0 / kf
            } else {
                0.0
            };
        }
    }
    Ok((p, log))
}

/// Column of `vecs` with the largest overlap with the all-ones vector on `rows`.
fn most_aligned(vecs: &Matrix, rows: &[usize]) -> usize {
    (0..vecs.ncols())
        .max_by(|&a, &b| {
            let sa: f64 = rows.iter().map(|&u| vecs[(u, a)]).sum();
            let sb: f64 = rows.iter().map(|&u| vecs[(u, b)]).sum();
            sa.abs().total_cmp(&sb.abs())
        })
        .expect("nonempty eigenbasis")
}

/// `w(mu_j) = (1/k) sum_i g_i(mu_j) / Z_i` with each bump rescaled so that
/// its values over the given eigenvalues sum to `total`.
fn mixture_weights(kernels: &KernelSet, d: usize, k: usize, mus: &[f64], total: f64) -> Result<Vec<f64>> {
    let mut w = vec![0.0; mus.len()];
    let mut done: Vec<f64> = Vec::new();
    for b in &kernels.bumps {
        let mult = kernels.bumps.iter().filter(|o| (o.target - b.target).abs() < 1e-12).count();
        if done.iter().any(|t| (t - b.target).abs() < 1e-12) {
            continue;
        }
        done.push(b.target);
        let vals: Vec<f64> = mus.iter().map(|&m| b.eval(d, m)).collect();
        let z: f64 = vals.iter().sum::<f64>() / total;
        if z.is_nan() || z <= 0.0 {
            return Err(Error::RepairInfeasible(format!("bump at {} has no mass on the graph spectrum", b.target)));
        }
        for (wj, v) in w.iter_mut().zip(&vals) {
            *wj += mult as f64 * v / (z * k as f64);
        }
    }
    Ok(w)
}

/// Rows of `U diag(sqrt(w))` restricted to `rows`, dropping negligible columns.
fn gram_columns(vecs: &Matrix, rows: &[usize], mus: &[(usize, f64)], weights: &[f64]) -> Matrix {
    let wmax = weights.iter().copied().fold(0.0, f64::max);
    let keep: Vec<(usize, f64)> = mus
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 1e-14 * wmax)
        .map(|(&(j, _), &w)| (j, w.sqrt()))
        .collect();
    Matrix::from_fn(rows.len(), keep.len(), |a, c| vecs[(rows[a], keep[c].0)] * keep[c].1)
}

/// Per-side Gram factors from the eigenpairs of `B B^T` and `B^T B`, where
/// `B` is the biadjacency matrix; `A` has eigenvalues `+-sqrt(nu)`.
fn bipartite_grams(g: &SimpleGraph, groups: &[Vec<usize>], d: usize, kernels: &KernelSet) -> Result<Vec<Matrix>> {
    let n = g.n();
    let h = n / 2;
    let mut pos = vec![0usize; n];
    for grp in groups {
        for (a, &u) in grp.iter().enumerate() {
            pos[u] = a;
        }
    }
    let mut bi = Matrix::zeros(h, h);
    for &u in &groups[0] {
        for &v in g.neighbors(u) {
            bi[(pos[u], pos[v])] = 1.0;
        }
    }
    let grams = [&bi * bi.transpose(), bi.transpose() * &bi];
    let k = kernels.bumps.len() + 2;
    let mut out = Vec::with_capacity(2);
    let mut weights: Option<Vec<f64>> = None;
    for gram in grams {
        let (vals, vecs) = sym_eigen(&gram);
        let local: Vec<usize> = (0..h).collect();
        let triv = most_aligned(&vecs, &local);
        let mus: Vec<(usize, f64)> = (0..h).filter(|&j| j != triv).map(|j| (j, vals[j].max(0.0).sqrt())).collect();
        // both sides share the nonzero spectrum; weights are computed once
        // and normalized so that the full spectrum of A carries mass n
        let w = match &weights {
            Some(w) => w.clone(),
            None => {
                let w = mixture_weights(kernels, d, k, &mus.iter().map(|m| m.1).collect::<Vec<_>>(), h as f64)?;
                weights = Some(w.clone());
                w
            }
        };
        out.push(gram_columns(&vecs, &local, &mus, &w));
    }
    Ok(out)
}

struct RepairStats {
    diag_min: f64,
    diag_max: f64,
    sum_before: f64,
    sum_after: f64,
    repaired: usize,
}

/// Rescales every row to squared norm `r2`, then restores a zero row sum by
/// rotating pairs of rows: each pair keeps its norms and absorbs an equal
/// share of the excess sum. The pair set starts with flagged rows and the
/// rows whose norm moved most, and grows until every pair is feasible.
fn repair(b: &mut Matrix, r2: f64, flagged: &[bool], rng: &mut crate::rng::Rng) -> Result<RepairStats> {
    let (rows, cols) = (b.nrows(), b.ncols());
    let r = r2.sqrt();
    let mut diag = vec![0.0; rows];
    for (a, dg) in diag.iter_mut().enumerate() {
        *dg = (0..cols).map(|c| b[(a, c)] * b[(a, c)]).sum::<f64>();
    }
    let diag_min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let diag_max = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for (a, &dg) in diag.iter().enumerate() {
        if dg < 1e-300 {
            return Err(Error::RepairInfeasible(format!("Gram vector {a} vanishes")));
        }
        let scale = (r2 / dg).sqrt();
        for c in 0..cols {
            b[(a, c)] *= scale;
        }
    }
    let column_sum = |b: &Matrix| -> Vec<f64> { (0..cols).map(|c| (0..rows).map(|a| b[(a, c)]).sum()).collect() };
    let s = column_sum(b);
    let s_norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut stats = RepairStats { diag_min, diag_max, sum_before: s_norm, sum_after: s_norm, repaired: 0 };
    if s_norm <= 1e-12 * rows as f64 {
        return Ok(stats);
    }

    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by(|&x, &y| {
        flagged[y].cmp(&flagged[x]).then((diag[y] - r2).abs().total_cmp(&(diag[x] - r2).abs())).then(x.cmp(&y))
    });
    let mut p = ((4.0 * s_norm / r).ceil() as usize).max(2);
    p += p % 2;
    loop {
        if p > rows - rows % 2 {
            return Err(Error::RepairInfeasible(format!("no feasible pairing for sum norm {s_norm:.3e}")));
        }
        let shift: Vec<f64> = s.iter().map(|x| 2.0 * x / p as f64).collect();
        let mut updates = Vec::with_capacity(p / 2);
        let mut ok = true;
        for pair in order[..p].chunks_exact(2) {
            let (x, y) = (pair[0], pair[1]);
            let t: Vec<f64> = (0..cols).map(|c| b[(x, c)] + b[(y, c)] - shift[c]).collect();
            let t2: f64 = t.iter().map(|v| v * v).sum();
            let need = r2 - t2 / 4.0;
            if need <= 1e-12 * r2 {
                ok = false;
                break;
            }
            let mut h: Vec<f64> = (0..cols).map(|c| 0.5 * (b[(x, c)] - b[(y, c)])).collect();
            orthogonalize(&mut h, &t, t2);
            let mut hn = h.iter().map(|v| v * v).sum::<f64>().sqrt();
            while hn < 1e-9 {
                h = (0..cols).map(|_| rng.gen::<f64>() - 0.5).collect();
                orthogonalize(&mut h, &t, t2);
                hn = h.iter().map(|v| v * v).sum::<f64>().sqrt();
            }
            let f = need.sqrt() / hn;
            updates.push((x, y, t, h.iter().map(|v| v * f).collect::<Vec<f64>>()));
        }
        if !ok {
            p *= 2;
            continue;
        }
        for (x, y, t, h) in updates {
            for c in 0..cols {
                b[(x, c)] = 0.5 * t[c] + h[c];
                b[(y, c)] = 0.5 * t[c] - h[c];
            }
        }
        stats.repaired = p;
        let after = column_sum(b);
        stats.sum_after = after.iter().map(|x| x * x).sum::<f64>().sqrt();
        return Ok(stats);
    }
}

fn orthogonalize(h: &mut [f64], t: &[f64], t2: f64) {
    if t2 > 0.0 {
        let c = h.iter().zip(t).map(|(a, b)| a * b).sum::<f64>() / t2;
        h.iter_mut().zip(t).for_each(|(a, b)| *a -= c * b);
    }
}

/// Unit-diagonal Gram matrix `R` on a bipartite graph with `R 1 = R s = 0`
/// (`s` the side signs) and `<R, q_s(A)> ~ n q_s(lambda)` for every `s`
/// up to `level`, odd included. Built from one bump at `lambda` over all
/// eigenpairs of `A` except the two trivial ones, then repaired side by
/// side. At `lambda = 0` the bump is even and the cross blocks are zeroed.
pub fn bipartite_signed_gram(
    g: &SimpleGraph,
    lambda: f64,
    level: usize,
    delta: f64,
    layout: &BipartiteLayout,
    options: &NullWitnessOptions,
) -> Result<(Matrix, WitnessLog)> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let side = layout.side_of();
    if side.len() != n || g.edges().iter().any(|&(u, v)| side[u] == side[v]) {
        return Err(Error::NotBipartite);
    }
    let groups: Vec<Vec<usize>> = (0..2u8).map(|t| (0..n).filter(|&u| side[u] == t).collect()).collect();
    if groups[0].len() != groups[1].len() {
        return Err(Error::UnbalancedBipartition { left: groups[0].len(), right: groups[1].len() });
    }
    let even = lambda.abs() < 1e-12;
    let kernels = build_kernels(d, &[lambda], 1, level, delta, &options.kernel, even);
    let mut notes = Vec::new();
    if !kernels.verified {
        if options.strict {
            return Err(Error::KernelMomentFailure { worst: kernels.worst, tol: kernels.tolerance });
        }
        notes.push(format!("kernel moments miss tolerance {:.3e} (worst {:.3e})", kernels.tolerance, kernels.worst));
    }
    let (vals, vecs) = sym_eigen(&g.adjacency_matrix());
    let signs = layout.signs();
    let ones = most_aligned(&vecs, &(0..n).collect::<Vec<_>>());
    let alt = (0..n)
        .filter(|&j| j != ones)
        .max_by(|&a, &b| {
            let sa: f64 = (0..n).map(|u| signs[u] * vecs[(u, a)]).sum();
            let sb: f64 = (0..n).map(|u| signs[u] * vecs[(u, b)]).sum();
            sa.abs().total_cmp(&sb.abs())
        })
        .expect("n >= 2");
    let mus: Vec<(usize, f64)> = (0..n).filter(|&j| j != ones && j != alt).map(|j| (j, vals[j])).collect();
    let weights = mixture_weights(&kernels, d, 1, &mus.iter().map(|m| m.1).collect::<Vec<_>>(), n as f64)?;
    let full = gram_columns(&vecs, &(0..n).collect::<Vec<_>>(), &mus, &weights);
    let radius = options.bad_radius.unwrap_or(level);
    let bad = bad_vertices(g, radius, radius);
    let mut is_bad = vec![false; n];
    bad.iter().for_each(|&u| is_bad[u] = true);
    let mut log = WitnessLog {
        kernels,
        outlier_eigenvalues: Vec::new(),
        bad_vertices: bad.len(),
        repair_set: 0,
        diagonal_min_before: f64::INFINITY,
        diagonal_max_before: f64::NEG_INFINITY,
        sum_norm_before: 0.0,
        sum_norm_after: 0.0,
        notes,
    };
    let mut rng = rng_from(options.seed);
    let mut b = full.clone();
    for grp in &groups {
        let mut sub = Matrix::from_fn(grp.len(), full.ncols(), |a, c| full[(grp[a], c)]);
        let stats = repair(&mut sub, 1.0, &grp.iter().map(|&u| is_bad[u]).collect::<Vec<_>>(), &mut rng)?;
        log.diagonal_min_before = log.diagonal_min_before.min(stats.diag_min);
        log.diagonal_max_before = log.diagonal_max_before.max(stats.diag_max);
        log.sum_norm_before = log.sum_norm_before.max(stats.sum_before);
        log.sum_norm_after = log.sum_norm_after.max(stats.sum_after);
        log.repair_set += stats.repaired;
        for (a, &u) in grp.iter().enumerate() {
            for c in 0..full.ncols() {
                b[(u, c)] = sub[(a, c)];
            }
        }
    }
    let mut r = &b * b.transpose();
    if even {
        for u in 0..n {
            for v in 0..n {
                if side[u] != side[v] {
                    r[(u, v)] = 0.0;
                }
            }
        }
    }
    Ok((r, log))
}
