use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::graph::SimpleGraph;
use crate::linalg::{graph_times, identity, Matrix};

/// Non-backtracking polynomial `q_s` for a fixed degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NBPolynomial {
    pub s: usize,
    pub d: usize,
    /// Lowest degree first.
    #[serde(serialize_with = "ser_bigints")]
    pub coeffs: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

impl NBPolynomial {
    pub fn eval(&self, x: f64) -> f64 {
        super::poly_eval(&self.coeffs, x)
    }
}

/// `q_0 = 1`, `q_1 = x`, `q_2 = x^2 - d`, `q_{s+1} = x q_s - (d-1) q_{s-1}`.
pub fn nb_polynomial(s: usize, d: usize) -> NBPolynomial {
    let d_big = BigInt::from(d);
    let dm1 = BigInt::from(d as i64 - 1);
    let mut polys: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)], vec![BigInt::zero(), BigInt::from(1)]];
    for t in 1..s {
        let c = if t == 1 { &d_big } else { &dm1 };
        let (a, b) = (&polys[t], &polys[t - 1]);
        let mut next = vec![BigInt::zero(); a.len() + 1];
        for (i, x) in a.iter().enumerate() {
            next[i + 1] += x;
        }
        for (i, x) in b.iter().enumerate() {
            next[i] -= x * c;
        }
        polys.push(next);
    }
    NBPolynomial { s, d, coeffs: polys.swap_remove(s) }
}

/// `[q_0(x), ..., q_smax(x)]` by the recurrence.
pub fn nb_values(smax: usize, d: usize, x: f64) -> Vec<f64> {
    let d = d as f64;
    let mut out = Vec::with_capacity(smax + 1);
    out.push(1.0);
    if smax >= 1 {
        out.push(x);
    }
    for t in 1..smax {
        let c = if t == 1 { d } else { d - 1.0 };
        out.push(x * out[t] - c * out[t - 1]);
    }
    out
}

pub fn nb_value(s: usize, d: usize, x: f64) -> f64 {
    nb_values(s, d, x)[s]
}

/// `A^(0), ..., A^(smax)` of a regular simple graph via the matrix recurrence.
pub fn nb_matrices(g: &SimpleGraph, smax: usize) -> Vec<Matrix> {
    let n = g.n();
    let d = g.regular_degree().unwrap_or(0) as f64;
    let mut out = vec![identity(n)];
    if smax >= 1 {
        out.push(g.adjacency_matrix());
    }
    for t in 1..smax {
        let c = if t == 1 { d } else { d - 1.0 };
        let mut next = graph_times(g, &out[t]);
        let prev = &out[t - 1];
        for j in 0..n {
            for i in 0..n {
                next[(i, j)] -= c * prev[(i, j)];
            }
        }
        out.push(next);
    }
    out
}

pub fn nb_matrix(g: &SimpleGraph, s: usize) -> Matrix {
    nb_matrices(g, s).swap_remove(s)
}

/// `q_0(M), ..., q_smax(M)` for a dense symmetric matrix with degree `d`.
pub fn nb_poly_matrices(m: &Matrix, d: usize, smax: usize) -> Vec<Matrix> {
    let n = m.nrows();
    let d = d as f64;
    let mut out = vec![identity(n)];
    if smax >= 1 {
        out.push(m.clone());
    }
    for t in 1..smax {
        let c = if t == 1 { d } else { d - 1.0 };
        let prod = m * &out[t];
        let prev = &out[t - 1];
        out.push(Matrix::from_fn(n, n, |i, j| prod[(i, j)] - c * prev[(i, j)]));
    }
    out
}
