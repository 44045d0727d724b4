use serde::{Deserialize, Serialize};

use crate::ensembles::LiftedGraph;
use crate::error::{Error, Result};
use crate::graph::{BipartiteLayout, Multigraph, SimpleGraph};
use crate::linalg::{graph_times, max_asymmetry, sym_eigenvalues, Matrix};
use crate::spectral::{nb_values, symmetric_spectrum};

/// The `n x n` matrix variable of the Path Statistics SDP.
pub type PseudoPartition = Matrix;

/// Absolute tolerance (scaled by the natural size of each quantity) for
/// constraints that must hold exactly.
pub const EXACT_TOL: f64 = 1e-8;

/// PSD constraints pass when the minimum eigenvalue is at least `-PSD_REL_TOL * n`.
pub const PSD_REL_TOL: f64 = 1e-8;

const SPECTRUM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathStatsInstance {
    /// Walk-length level `D`.
    pub level: usize,
    pub delta: f64,
    pub k: usize,
    pub degree: usize,
    pub base_spectrum: Vec<f64>,
    pub bipartite: bool,
    /// Additive slack is `slack_c0 * ln n`.
    pub slack_c0: f64,
}

impl PathStatsInstance {
    pub fn new(level: usize, delta: f64, base_spectrum: Vec<f64>, bipartite: bool) -> Result<Self> {
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        let top = base_spectrum.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() || top < 0.5 {
            return Err(Error::InvalidParameter("base spectrum must contain the degree".into()));
        }
        let degree = top.round() as usize;
        if (top - degree as f64).abs() > SPECTRUM_TOL {
            return Err(Error::InvalidParameter(format!("largest eigenvalue {top} is not an integer degree")));
        }
        let has_neg = base_spectrum.iter().any(|&l| (l + degree as f64).abs() < SPECTRUM_TOL);
        if bipartite && !has_neg {
            return Err(Error::InvalidParameter("bipartite instance needs -d in the base spectrum".into()));
        }
        Ok(PathStatsInstance { level, delta, k: base_spectrum.len(), degree, base_spectrum, bipartite, slack_c0: 0.0 })
    }

    /// Instance whose targets come from the spectrum of `h`.
    pub fn from_base(h: &Multigraph, level: usize, delta: f64, bipartite: bool) -> Result<Self> {
        h.regular_degree().ok_or(Error::NotRegular)?;
        if bipartite && h.two_coloring().is_none() {
            return Err(Error::NotBipartite);
        }
        let spec = symmetric_spectrum(&h.adjacency_matrix(), false)?;
        Self::new(level, delta, spec.values, bipartite)
    }

    pub fn with_slack(mut self, c0: f64) -> Self {
        self.slack_c0 = c0;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// Base eigenvalues with one copy of `d` (and of `-d` when bipartite) removed.
    pub fn nontrivial(&self) -> Vec<f64> {
        let d = self.degree as f64;
        let mut rest = self.base_spectrum.clone();
        let mut drop_near = |x: f64| {
            if let Some((i, _)) =
                rest.iter().enumerate().min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            {
                rest.remove(i);
            }
        };
        drop_near(d);
        if self.bipartite {
            drop_near(-d);
        }
        rest
    }

    /// Moment targets `(n/k) sum_i q_s(lambda_i)` for `s = 0..=level`.
    pub fn targets(&self, n: usize) -> Vec<f64> {
        let mut acc = vec![0.0; self.level + 1];
        for &l in &self.base_spectrum {
            for (a, q) in acc.iter_mut().zip(nb_values(self.level, self.degree, l)) {
                *a += q;
            }
        }
        acc.iter().map(|a| a * n as f64 / self.k as f64).collect()
    }

    pub fn slack_abs(&self, n: usize) -> f64 {
        self.slack_c0 * (n.max(1) as f64).ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintResidual {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub residual: f64,
    pub pass: bool,
}

impl ConstraintResidual {
    /// Two-sided constraint `|value - target| <= tolerance`.
    pub fn window(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let residual = (value - target).abs();
        ConstraintResidual { name: name.into(), value, target, tolerance, residual, pass: residual <= tolerance }
    }

    /// One-sided constraint `value >= target - tolerance`; the residual is
    /// the shortfall below `target`.
    pub fn at_least(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let residual = (target - value).max(0.0);
        ConstraintResidual { name: name.into(), value, target, tolerance, residual, pass: residual <= tolerance }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub n: usize,
    pub k: usize,
    pub level: usize,
    pub delta: f64,
    pub slack_c0: f64,
    pub slack_abs: f64,
    pub psd_threshold: f64,
    pub constraints: Vec<ConstraintResidual>,
    pub feasible: bool,
}

impl FeasibilityReport {
    pub fn get(&self, name: &str) -> Option<&ConstraintResidual> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.constraints.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

/// `<P, q_s(A_G)>` for `s = 0..=smax`, streaming the non-backtracking
/// recurrence so only two walk matrices are alive at a time.
pub fn moment_values(g: &SimpleGraph, p: &Matrix, smax: usize) -> Vec<f64> {
    let n = g.n();
    let d = g.regular_degree().unwrap_or(0) as f64;
    let mut out = Vec::with_capacity(smax + 1);
    out.push((0..n).map(|u| p[(u, u)]).sum());
    if smax == 0 {
        return out;
    }
    let inner_adj = |w: &Matrix| -> f64 {
        let mut acc = 0.0;
        for u in 0..n {
            for &v in g.neighbors(u) {
                acc += w[(u, v)];
            }
        }
        acc
    };
    out.push(inner_adj(p));
    if smax == 1 {
        return out;
    }
    let inner = |a: &Matrix| -> f64 {
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                acc += a[(i, j)] * p[(i, j)];
            }
        }
        acc
    };
    let mut prev = crate::linalg::identity(n);
    let mut cur = g.adjacency_matrix();
    for t in 1..smax {
        let c = if t == 1 { d } else { d - 1.0 };
        let mut next = graph_times(g, &cur);
        for j in 0..n {
            for i in 0..n {
                next[(i, j)] -= c * prev[(i, j)];
            }
        }
        out.push(inner(&next));
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

fn check_layout(g: &SimpleGraph, layout: &BipartiteLayout) -> Result<Vec<u8>> {
    let n = g.n();
    let side = layout.side_of();
    if side.len() != n {
        return Err(Error::SizeMismatch(format!("layout covers {} vertices, graph has {n}", side.len())));
    }
    if g.edges().iter().any(|&(u, v)| side[u] == side[v]) {
        return Err(Error::NotBipartite);
    }
    Ok(side)
}

/// Evaluates every Path Statistics constraint on `p` with residuals.
pub fn path_stats_check(
    g: &SimpleGraph,
    p: &PseudoPartition,
    instance: &PathStatsInstance,
    layout: Option<&BipartiteLayout>,
) -> Result<FeasibilityReport> {
    let n = g.n();
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if d != instance.degree {
        return Err(Error::InvalidParameter(format!("graph degree {d} differs from instance degree {}", instance.degree)));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if p.nrows() != n || p.ncols() != n {
        return Err(Error::SizeMismatch(format!("{}x{} matrix for {n} vertices", p.nrows(), p.ncols())));
    }
    let side = if instance.bipartite {
        Some(check_layout(g, layout.ok_or(Error::LayoutMissing)?)?)
    } else {
        None
    };
    let k = instance.k as f64;
    let nf = n as f64;
    let slack_abs = instance.slack_abs(n);
    let psd_threshold = PSD_REL_TOL * nf;
    let mut cs = Vec::new();

    cs.push(ConstraintResidual::window("symmetric", max_asymmetry(p), 0.0, EXACT_TOL));
    let diag_dev = (0..n).map(|u| (p[(u, u)] - 1.0).abs()).fold(0.0, f64::max);
    cs.push(ConstraintResidual::window("diagonal", diag_dev, 0.0, EXACT_TOL));
    let total = crate::linalg::sum_entries(p);
    cs.push(ConstraintResidual::window("j_inner", total, nf * nf / k, EXACT_TOL * nf * nf));

    let values = moment_values(g, p, instance.level);
    for (s, (v, t)) in values.iter().zip(instance.targets(n)).enumerate() {
        cs.push(ConstraintResidual::window(format!("moment_s{s}"), *v, t, instance.delta * nf + slack_abs));
    }

    let shifted = Matrix::from_fn(n, n, |i, j| 0.5 * (p[(i, j)] + p[(j, i)]) - 1.0 / k);
    let min_eig = sym_eigenvalues(&shifted).first().copied().unwrap_or(0.0);
    cs.push(ConstraintResidual::at_least("psd", min_eig, 0.0, psd_threshold));

    if let Some(side) = side {
        let mut cross: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                if side[i] != side[j] {
                    cross = cross.max(p[(i, j)].abs());
                }
            }
        }
        cs.push(ConstraintResidual::window("cross_block", cross, 0.0, EXACT_TOL));
        let sign = |u: usize| if side[u] == 0 { 1.0 } else { -1.0 };
        let shifted = Matrix::from_fn(n, n, |i, j| 0.5 * (p[(i, j)] + p[(j, i)]) - sign(i) * sign(j) / k);
        let min_eig = sym_eigenvalues(&shifted).first().copied().unwrap_or(0.0);
        cs.push(ConstraintResidual::at_least("psd_bipartite", min_eig, 0.0, psd_threshold));
    }

    let feasible = cs.iter().all(|c| c.pass);
    Ok(FeasibilityReport {
        n,
        k: instance.k,
        level: instance.level,
        delta: instance.delta,
        slack_c0: instance.slack_c0,
        slack_abs,
        psd_threshold,
        constraints: cs,
        feasible,
    })
}

/// The partition matrix `P_{uv} = [sigma(u) = sigma(v)]` of a lift.
pub fn planted_witness(lift: &LiftedGraph) -> PseudoPartition {
    let n = lift.n();
    Matrix::from_fn(n, n, |u, v| if lift.sigma[u] == lift.sigma[v] { 1.0 } else { 0.0 })
}
