//! Spectra of regular graphs, Ramanujan tests, non-backtracking
//! polynomials, Kesten–McKay quadrature, Chebyshev helpers and local
//! cycle diagnostics.

mod chebyshev;
mod km;
mod nb;
mod walks;

pub use chebyshev::{chebyshev_eval, chebyshev_t, evaluate_outside, poly_eval};
pub use km::{gauss_legendre, km_density, km_expectation, km_moment, KmQuadrature};
pub use nb::{
    nb_matrices, nb_matrix, nb_poly_matrices, nb_polynomial, nb_value, nb_values, NBPolynomial,
};
pub use walks::{bad_vertices, self_avoiding_matrix, self_avoiding_matrix_capped, SA_DEFAULT_CAP};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, SimpleGraph};
use crate::linalg::{lanczos_extremes, max_asymmetry, sym_eigen, sym_eigenvalues, Matrix};

/// Above this order, simple graphs use Lanczos instead of a dense solve.
pub const DENSE_LIMIT: usize = 600;

/// Slack applied when comparing against `2 sqrt(d-1)`.
pub const RAMANUJAN_SLACK: f64 = 1e-9;

/// Operations the spectral layer needs from a graph carrier.
pub trait RegularGraph {
    fn order(&self) -> usize;
    fn common_degree(&self) -> Option<usize>;
    fn connected(&self) -> bool;
    fn dense_adjacency(&self) -> Matrix;
    /// `+1/-1` side indicator if the graph is bipartite.
    fn bipartition_signs(&self) -> Option<Vec<f64>>;
    fn apply_adjacency(&self, x: &[f64], y: &mut [f64]);
    fn prefers_dense(&self) -> bool {
        self.order() <= DENSE_LIMIT
    }
}

impl RegularGraph for Multigraph {
    fn order(&self) -> usize {
        self.n()
    }
    fn common_degree(&self) -> Option<usize> {
        self.regular_degree()
    }
    fn connected(&self) -> bool {
        self.is_connected()
    }
    fn dense_adjacency(&self) -> Matrix {
        self.adjacency_matrix()
    }
    fn bipartition_signs(&self) -> Option<Vec<f64>> {
        self.two_coloring()
            .map(|c| c.iter().map(|&s| if s == 0 { 1.0 } else { -1.0 }).collect())
    }
    fn apply_adjacency(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(&m, v)| m as f64 * v).sum();
        }
    }
    fn prefers_dense(&self) -> bool {
        true
    }
}

impl RegularGraph for SimpleGraph {
    fn order(&self) -> usize {
        self.n()
    }
    fn common_degree(&self) -> Option<usize> {
        self.regular_degree()
    }
    fn connected(&self) -> bool {
        self.is_connected()
    }
    fn dense_adjacency(&self) -> Matrix {
        self.adjacency_matrix()
    }
    fn bipartition_signs(&self) -> Option<Vec<f64>> {
        crate::graph::find_bipartition(self).ok().flatten().map(|l| l.signs())
    }
    fn apply_adjacency(&self, x: &[f64], y: &mut [f64]) {
        self.apply(x, y)
    }
}

/// Ordered eigenvalues with the trivial ones flagged.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    /// Descending.
    pub values: Vec<f64>,
    pub trivial_mask: Vec<bool>,
    #[serde(skip)]
    pub vectors: Option<Matrix>,
}

impl Spectrum {
    pub fn nontrivial(&self) -> Vec<f64> {
        self.values
            .iter()
            .zip(&self.trivial_mask)
            .filter(|(_, &t)| !t)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Largest `|lambda|` among nontrivial eigenvalues.
    pub fn extreme_nontrivial(&self) -> f64 {
        self.nontrivial().iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Largest nontrivial eigenvalue.
    pub fn lambda_2(&self) -> f64 {
        self.nontrivial().first().copied().unwrap_or(f64::NAN)
    }

    /// Smallest nontrivial eigenvalue.
    pub fn lambda_min_nontrivial(&self) -> f64 {
        self.nontrivial().last().copied().unwrap_or(f64::NAN)
    }

    /// Smallest eigenvalue, trivial or not.
    pub fn lambda_n(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }
}

/// Dense eigendecomposition of a symmetric matrix; nothing is flagged trivial.
pub fn symmetric_spectrum(m: &Matrix, with_vectors: bool) -> Result<Spectrum> {
    let scale = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .fold(1.0f64, |a, (i, j)| a.max(m[(i, j)].abs()));
    let asym = max_asymmetry(m);
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.nrows();
    let (values, vectors) = if with_vectors {
        let (mut v, u) = sym_eigen(m);
        v.reverse();
        let u = Matrix::from_fn(n, n, |i, j| u[(i, n - 1 - j)]);
        (v, Some(u))
    } else {
        let mut v = sym_eigenvalues(m);
        v.reverse();
        (v, None)
    };
    Ok(Spectrum { trivial_mask: vec![false; values.len()], values, vectors })
}

/// Orthonormal trivial eigenvectors: all-ones, and the signed bipartition
/// vector when `bipartite`.
pub fn trivial_vectors<G: RegularGraph + ?Sized>(g: &G, bipartite: bool) -> Result<Vec<Vec<f64>>> {
    let n = g.order();
    let s = 1.0 / (n as f64).sqrt();
    let mut out = vec![vec![s; n]];
    if bipartite {
        let signs = g.bipartition_signs().ok_or(Error::NotBipartite)?;
        if signs.iter().sum::<f64>().abs() > 0.5 {
            let left = signs.iter().filter(|&&x| x > 0.0).count();
            return Err(Error::UnbalancedBipartition { left, right: n - left });
        }
        out.push(signs.iter().map(|x| x * s).collect());
    }
    Ok(out)
}

/// Full spectrum of a regular graph with the trivial eigenvalues located by
/// projecting out their known eigenvectors rather than by value matching.
pub fn graph_spectrum<G: RegularGraph + ?Sized>(g: &G, bipartite: bool) -> Result<Spectrum> {
    let d = g.common_degree().ok_or(Error::NotRegular)? as f64;
    let n = g.order();
    let triv = trivial_vectors(g, bipartite)?;
    let mut a = g.dense_adjacency();
    let signs = [d, -d];
    for (t, &lam) in triv.iter().zip(&signs) {
        for j in 0..n {
            for i in 0..n {
                a[(i, j)] -= lam * t[i] * t[j];
            }
        }
    }
    let mut vals = sym_eigenvalues(&a);
    for _ in 0..triv.len() {
        let (idx, _) = vals
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .expect("nonempty spectrum");
        vals.remove(idx);
    }
    let mut tagged: Vec<(f64, bool)> = vals.into_iter().map(|v| (v, false)).collect();
    for &lam in signs.iter().take(triv.len()) {
        tagged.push((lam, true));
    }
    tagged.sort_by(|x, y| y.0.total_cmp(&x.0).then(y.1.cmp(&x.1)));
    Ok(Spectrum {
        values: tagged.iter().map(|t| t.0).collect(),
        trivial_mask: tagged.iter().map(|t| t.1).collect(),
        vectors: None,
    })
}

/// Largest and smallest nontrivial eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremes {
    pub lambda_2: f64,
    pub lambda_min: f64,
    /// Smallest eigenvalue including trivial ones.
    pub lambda_n: f64,
}

impl Extremes {
    pub fn rho(&self) -> f64 {
        self.lambda_2.abs().max(self.lambda_min.abs())
    }
}

/// Extreme nontrivial eigenvalues; dense for small inputs, Lanczos on the
/// deflated operator otherwise.
pub fn nontrivial_extremes<G: RegularGraph + ?Sized>(g: &G, bipartite: bool) -> Result<Extremes> {
    let d = g.common_degree().ok_or(Error::NotRegular)? as f64;
    if g.prefers_dense() {
        let s = graph_spectrum(g, bipartite)?;
        return Ok(Extremes {
            lambda_2: s.lambda_2(),
            lambda_min: s.lambda_min_nontrivial(),
            lambda_n: s.lambda_n(),
        });
    }
    let n = g.order();
    let triv = trivial_vectors(g, bipartite)?;
    let r = lanczos_extremes(n, |x, y| g.apply_adjacency(x, y), &triv, 0x5eed, 800, 1e-7);
    let lambda_n = if bipartite || g.bipartition_signs().is_some() { -d } else { r.min };
    Ok(Extremes { lambda_2: r.max, lambda_min: r.min, lambda_n })
}

/// `max |lambda|` over nontrivial eigenvalues of a connected regular graph.
pub fn spectral_radius<G: RegularGraph + ?Sized>(g: &G, bipartite: bool) -> Result<f64> {
    if !g.connected() {
        return Err(Error::Disconnected);
    }
    Ok(nontrivial_extremes(g, bipartite)?.rho())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RamanujanReport {
    pub ramanujan: bool,
    pub extreme: f64,
    pub bound: f64,
    /// `bound - extreme`; negative when the test fails.
    pub margin: f64,
}

pub fn is_ramanujan<G: RegularGraph + ?Sized>(h: &G, bipartite: bool) -> Result<RamanujanReport> {
    let d = h.common_degree().ok_or(Error::NotRegular)? as f64;
    let extreme = spectral_radius(h, bipartite)?;
    let bound = 2.0 * (d - 1.0).sqrt();
    Ok(RamanujanReport {
        ramanujan: extreme <= bound + RAMANUJAN_SLACK,
        extreme,
        bound,
        margin: bound - extreme,
    })
}
