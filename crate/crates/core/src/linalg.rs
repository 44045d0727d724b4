//! Dense symmetric linear algebra on top of `faer`, plus a Lanczos solver
//! for extreme eigenvalues of large sparse operators.

use faer::Side;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::SimpleGraph;

pub type Matrix = faer::Mat<f64>;

pub fn max_asymmetry(m: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..j {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Eigenvalues in ascending order.
pub fn sym_eigenvalues(m: &Matrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v = m.selfadjoint_eigenvalues(Side::Lower);
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues ascending with matching eigenvectors as columns.
pub fn sym_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    if m.nrows() == 0 {
        return (Vec::new(), Matrix::zeros(0, 0));
    }
    let e = m.selfadjoint_eigendecomposition(Side::Lower);
    let s = e.s().column_vector();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s.read(a).total_cmp(&s.read(b)));
    let u = e.u();
    let values = order.iter().map(|&i| s.read(i)).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| u.read(i, order[j]));
    (values, vectors)
}

pub fn min_eigenvalue(m: &Matrix) -> f64 {
    sym_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// `true` when `m + shift I` admits a Cholesky factorization.
pub fn cholesky_psd(m: &Matrix, shift: f64) -> bool {
    let n = m.nrows();
    let shifted = Matrix::from_fn(n, n, |i, j| m[(i, j)] + if i == j { shift } else { 0.0 });
    shifted.cholesky(Side::Lower).is_ok()
}

pub fn frobenius_inner(a: &Matrix, b: &Matrix) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)] * b[(i, j)];
        }
    }
    acc
}

pub fn sum_entries(a: &Matrix) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)];
        }
    }
    acc
}

pub fn identity(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
}

/// `A_G X` using the adjacency lists of `g`.
pub fn graph_times(g: &SimpleGraph, x: &Matrix) -> Matrix {
    let n = g.n();
    let mut out = Matrix::zeros(n, x.ncols());
    for c in 0..x.ncols() {
        for u in 0..n {
            let mut acc = 0.0;
            for &v in g.neighbors(u) {
                acc += x[(v, c)];
            }
            out[(u, c)] = acc;
        }
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosResult {
    pub max: f64,
    pub min: f64,
    pub max_residual: f64,
    pub min_residual: f64,
    pub iterations: usize,
}

/// Extreme eigenvalues of a symmetric operator restricted to the orthogonal
/// complement of `deflate` (which must be orthonormal). Full
/// reorthogonalization; stops when both Ritz residual bounds drop below `tol`.
pub fn lanczos_extremes(
    n: usize,
    apply: impl Fn(&[f64], &mut [f64]),
    deflate: &[Vec<f64>],
    seed: u64,
    max_iter: usize,
    tol: f64,
) -> LanczosResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    for q in deflate {
        let c = dot(&v, q);
        v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
    }
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let cap = max_iter.min(n.saturating_sub(deflate.len())).max(1);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut last = LanczosResult {
        max: 0.0,
        min: 0.0,
        max_residual: f64::INFINITY,
        min_residual: f64::INFINITY,
        iterations: 0,
    };
    for j in 0..cap {
        apply(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        for _ in 0..2 {
            for q in deflate.iter().chain(basis.iter()) {
                let c = dot(&w, q);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        let m = j + 1;
        let done = b < 1e-12 || m == cap;
        if m % 8 == 0 || done {
            last = ritz_extremes(&alpha, &beta, b);
            last.iterations = m;
            if done || (last.max_residual < tol && last.min_residual < tol) {
                break;
            }
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    last
}

fn ritz_extremes(alpha: &[f64], beta: &[f64], next_beta: f64) -> LanczosResult {
    let m = alpha.len();
    let t = Matrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let (vals, vecs) = sym_eigen(&t);
    LanczosResult {
        max: vals[m - 1],
        min: vals[0],
        max_residual: (next_beta * vecs[(m - 1, m - 1)]).abs(),
        min_residual: (next_beta * vecs[(m - 1, 0)]).abs(),
        iterations: m,
    }
}
