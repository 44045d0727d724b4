use std::f64::consts::PI;

use serde::Serialize;

const START_NODES: usize = 16;
const MAX_NODES: usize = 8192;
const TOL: f64 = 1e-11;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n, p0 = P_{n-1}
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Kesten–McKay density at `x`.
pub fn km_density(d: usize, x: f64) -> f64 {
    let d = d as f64;
    let r2 = 4.0 * (d - 1.0);
    if x * x >= r2 {
        return 0.0;
    }
    d / (2.0 * PI) * (r2 - x * x).sqrt() / (d * d - x * x)
}

/// Fixed-size rule for the Kesten–McKay measure, built on the substitution
/// `x = 2 sqrt(d-1) cos(theta)` which removes the endpoint square roots.
#[derive(Debug, Clone, Serialize)]
pub struct KmQuadrature {
    pub d: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl KmQuadrature {
    pub fn new(d: usize, size: usize) -> Self {
        let (t, w) = gauss_legendre(size);
        let df = d as f64;
        let r = 2.0 * (df - 1.0).sqrt();
        let mut nodes = Vec::with_capacity(size);
        let mut weights = Vec::with_capacity(size);
        for (ti, wi) in t.iter().zip(&w) {
            let theta = 0.5 * PI * (ti + 1.0);
            let (s, c) = theta.sin_cos();
            let x = r * c;
            let dens = df / (2.0 * PI) * (r * s) * (r * s) / (df * df - x * x);
            nodes.push(x);
            weights.push(wi * 0.5 * PI * dens);
        }
        KmQuadrature { d, nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `E[f]` under the Kesten–McKay law, doubling the node count until two
/// successive estimates agree to `1e-11` (relative to the estimate when it is large).
pub fn km_expectation(d: usize, f: impl Fn(f64) -> f64) -> f64 {
    let mut size = START_NODES;
    let mut prev = KmQuadrature::new(d, size).integrate(&f);
    while size < MAX_NODES {
        size *= 2;
        let cur = KmQuadrature::new(d, size).integrate(&f);
        if (cur - prev).abs() < TOL * cur.abs().max(1.0) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// `E[p]` for a polynomial given by monomial coefficients (lowest first).
pub fn km_moment(coeffs: &[f64], d: usize) -> f64 {
    km_expectation(d, |x| coeffs.iter().rev().fold(0.0, |a, c| a * x + c))
}
