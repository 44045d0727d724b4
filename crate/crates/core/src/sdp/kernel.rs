use serde::{Deserialize, Serialize};

use crate::linalg::{sym_eigen, Matrix};
use crate::spectral::{nb_poly_matrices, nb_values};

/// Largest polynomial degree tried for a bump.
pub const KERNEL_DEGREE_CAP: usize = 64;

const BISECTION_STEPS: usize = 80;

/// How the coefficient vector of a bump `g = p^2` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// `p = K_N(c, .)`, the Christoffel–Darboux kernel at a center `c`.
    ChristoffelDarboux,
    /// `p` minimizing `E[(x - c)^2 p^2] / E[p^2]` over degree `N`.
    #[default]
    MinVariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelOptions {
    pub kind: KernelKind,
    pub start_degree: usize,
    pub cap: usize,
    /// Moment tolerance as a fraction of `delta`.
    pub tolerance_fraction: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { kind: KernelKind::default(), start_degree: 4, cap: KERNEL_DEGREE_CAP, tolerance_fraction: 0.25 }
    }
}

/// A nonnegative polynomial `g = p^2` with `E_KM[g] = 1`, concentrated near
/// `target`. `coeffs` are the coefficients of `p` in the orthonormal
/// polynomials of the Kesten–McKay law.
#[derive(Debug, Clone, Serialize)]
pub struct KernelBump {
    pub target: f64,
    pub center: f64,
    pub mean: f64,
    pub degree: usize,
    pub coeffs: Vec<f64>,
    /// The mean could not reach `target` at this degree.
    pub clamped: bool,
    pub symmetric: bool,
}

/// Off-diagonal `b_s` of the Jacobi matrix: `sqrt(d)` for `s = 1`, `sqrt(d-1)` after.
fn jacobi_b(d: usize, s: usize) -> f64 {
    if s == 1 {
        (d as f64).sqrt()
    } else {
        (d as f64 - 1.0).sqrt()
    }
}

/// Leading `size x size` block of the Jacobi matrix of the Kesten–McKay law.
pub fn km_jacobi(d: usize, size: usize) -> Matrix {
    Matrix::from_fn(size, size, |i, j| {
        if j == i + 1 {
            jacobi_b(d, j)
        } else if i == j + 1 {
            jacobi_b(d, i)
        } else {
            0.0
        }
    })
}

fn orthonormal_values(d: usize, n: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n >= 1 {
        p.push(x / jacobi_b(d, 1));
    }
    for s in 1..n {
        let next = (x * p[s] - jacobi_b(d, s) * p[s - 1]) / jacobi_b(d, s + 1);
        p.push(next);
    }
    p
}

fn quad_form(m: &Matrix, a: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, ai) in a.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            acc += ai * m[(i, j)] * aj;
        }
    }
    acc
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    v
}

impl KernelBump {
    fn coefficients(kind: KernelKind, d: usize, n: usize, c: f64) -> Vec<f64> {
        match kind {
            KernelKind::ChristoffelDarboux => unit(orthonormal_values(d, n, c)),
            KernelKind::MinVariance => {
                let big = km_jacobi(d, n + 2);
                let shifted = Matrix::from_fn(n + 2, n + 2, |i, j| big[(i, j)] - if i == j { c } else { 0.0 });
                let sq = &shifted * &shifted;
                let form = Matrix::from_fn(n + 1, n + 1, |i, j| sq[(i, j)]);
                let (_, vecs) = sym_eigen(&form);
                let mut a: Vec<f64> = (0..n + 1).map(|i| vecs[(i, 0)]).collect();
                if a[0] < 0.0 {
                    a.iter_mut().for_each(|x| *x = -*x);
                }
                a
            }
        }
    }

    /// Builds the bump of degree `n` whose mean matches `target` as closely
    /// as the degree allows, by bisection on the center.
    pub fn new(kind: KernelKind, d: usize, n: usize, target: f64) -> Self {
        let jac = km_jacobi(d, n + 1);
        let mean_at = |c: f64| {
            let a = Self::coefficients(kind, d, n, c);
            (quad_form(&jac, &a), a)
        };
        let edge = 2.0 * (d as f64 - 1.0).sqrt();
        let (mut lo, mut hi) = (-edge, edge);
        let (m_lo, a_lo) = mean_at(lo);
        let (m_hi, a_hi) = mean_at(hi);
        let (center, mean, coeffs, clamped) = if target <= m_lo {
            (lo, m_lo, a_lo, target < m_lo - 1e-12)
        } else if target >= m_hi {
            (hi, m_hi, a_hi, target > m_hi + 1e-12)
        } else {
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if mean_at(mid).0 < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let c = 0.5 * (lo + hi);
            let (m, a) = mean_at(c);
            (c, m, a, false)
        };
        KernelBump { target, center, mean, degree: n, coeffs, clamped, symmetric: false }
    }

    fn p(&self, d: usize, x: f64) -> f64 {
        orthonormal_values(d, self.degree, x).iter().zip(&self.coeffs).map(|(p, a)| p * a).sum()
    }

    /// `g(x)`; the symmetrized bump averages `g(x)` and `g(-x)`.
    pub fn eval(&self, d: usize, x: f64) -> f64 {
        let v = self.p(d, x).powi(2);
        if self.symmetric {
            0.5 * (v + self.p(d, -x).powi(2))
        } else {
            v
        }
    }

    /// `E_KM[g q_s]` for `s = 0..=smax`, exact via the Jacobi matrix.
    pub fn moments(&self, d: usize, smax: usize) -> Vec<f64> {
        let size = self.degree + 1 + smax;
        let jac = km_jacobi(d, size);
        let mut a = self.coeffs.clone();
        a.resize(size, 0.0);
        nb_poly_matrices(&jac, d, smax)
            .iter()
            .enumerate()
            .map(|(s, q)| if self.symmetric && s % 2 == 1 { 0.0 } else { quad_form(q, &a) })
            .collect()
    }

    pub fn symmetrized(mut self) -> Self {
        self.symmetric = true;
        self
    }
}

/// Bumps for a list of base eigenvalues at a common degree, with the
/// aggregate moment errors `(1/k) sum_i (E[g_i q_s] - q_s(lambda_i))`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelSet {
    pub degree: usize,
    pub bumps: Vec<KernelBump>,
    pub moment_errors: Vec<f64>,
    pub worst: f64,
    pub tolerance: f64,
    pub verified: bool,
    /// Indices of base eigenvalues outside `[-2 sqrt(d-1), 2 sqrt(d-1)]`;
    /// their bumps sit at the edge and they are left out of the errors.
    pub outliers: Vec<usize>,
    /// Degrees tried, with the worst error at each.
    pub attempts: Vec<(usize, f64)>,
}

/// Doubles the bump degree from `options.start_degree` until the aggregate
/// moment errors for `s <= level` are within `tolerance_fraction * delta`,
/// stopping at `options.cap`. The last attempt is returned either way.
pub fn build_kernels(
    d: usize,
    lambdas: &[f64],
    k: usize,
    level: usize,
    delta: f64,
    options: &KernelOptions,
    symmetric: bool,
) -> KernelSet {
    let edge = 2.0 * (d as f64 - 1.0).sqrt();
    let tolerance = options.tolerance_fraction * delta;
    let outliers: Vec<usize> = (0..lambdas.len()).filter(|&i| lambdas[i].abs() > edge + 1e-9).collect();
    let mut attempts = Vec::new();
    let mut n = options.start_degree.max(1);
    loop {
        let mut cache: Vec<(f64, KernelBump)> = Vec::new();
        let bumps: Vec<KernelBump> = lambdas
            .iter()
            .map(|&l| {
                if let Some((_, b)) = cache.iter().find(|(x, _)| (x - l).abs() < 1e-12) {
                    return b.clone();
                }
                let mut b = KernelBump::new(options.kind, d, n, l);
                if symmetric {
                    b = b.symmetrized();
                }
                cache.push((l, b.clone()));
                b
            })
            .collect();
        let mut errs = vec![0.0; level + 1];
        for (i, (b, &l)) in bumps.iter().zip(lambdas).enumerate() {
            if outliers.contains(&i) {
                continue;
            }
            let q = nb_values(level, d, l);
            for (s, m) in b.moments(d, level).iter().enumerate() {
                // the symmetrized bump targets the even part of q_s
                let target = if symmetric && s % 2 == 1 { 0.0 } else { q[s] };
                errs[s] += (m - target) / k as f64;
            }
        }
        let worst = errs.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        attempts.push((n, worst));
        let verified = worst <= tolerance;
        if verified || n >= options.cap {
            return KernelSet {
                degree: n,
                bumps,
                moment_errors: errs,
                worst,
                tolerance,
                verified,
                outliers,
                attempts,
            };
        }
        n = (2 * n).min(options.cap);
    }
}
