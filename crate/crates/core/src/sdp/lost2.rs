use super::path_stats::{ConstraintResidual, FeasibilityReport, PseudoPartition, EXACT_TOL, PSD_REL_TOL};
use super::symmetric::symmetric_instance;
use super::witness::{bipartite_signed_gram, null_witness, NullWitnessOptions};
use crate::ensembles::LiftedGraph;
use crate::error::{Error, Result};
use crate::graph::{BipartiteLayout, Multigraph, SimpleGraph};
use crate::linalg::{max_asymmetry, min_eigenvalue, sym_eigen, Matrix};
use crate::spectral::{nb_matrices, nb_poly_matrices, RAMANUJAN_SLACK};

/// Largest `n * k` for which the dense pseudomoment matrix is built.
pub const MAX_LOST2_DIM: usize = 3200;

/// Hard-constraint residual above which `lost2_reduce` refuses a pseudomoment.
const HARD_TOL: f64 = 1e-6;

/// Degree-2 pseudomoments: `ell[u*k + i] = E[x_{u,i}]` and
/// `q[(u*k + i, v*k + j)] = E[x_{u,i} x_{v,j}]`.
#[derive(Debug, Clone)]
pub struct PseudoMoment {
    pub n: usize,
    pub k: usize,
    pub ell: Vec<f64>,
    pub q: Matrix,
}

impl PseudoMoment {
    pub fn new(n: usize, k: usize, ell: Vec<f64>, q: Matrix) -> Result<Self> {
        let dim = n * k;
        if ell.len() != dim || q.nrows() != dim || q.ncols() != dim {
            return Err(Error::SizeMismatch(format!("pseudomoment for n = {n}, k = {k} needs dimension {dim}")));
        }
        Ok(PseudoMoment { n, k, ell, q })
    }

    pub fn entry(&self, u: usize, i: usize, v: usize, j: usize) -> f64 {
        self.q[(u * self.k + i, v * self.k + j)]
    }

    /// `[[1, ell^T], [ell, Q]]`.
    pub fn bordered(&self) -> Matrix {
        let dim = self.n * self.k;
        Matrix::from_fn(dim + 1, dim + 1, |a, b| match (a, b) {
            (0, 0) => 1.0,
            (0, b) => self.ell[b - 1],
            (a, 0) => self.ell[a - 1],
            (a, b) => self.q[(a - 1, b - 1)],
        })
    }

    /// Largest violation among symmetry, `x^2 = x`, `x_i x_j = 0` for
    /// `i != j` and `sum_i x_{u,i} = 1` (linear and multiplied by `x_{v,j}`).
    pub fn hard_residual(&self) -> f64 {
        hard_parts(self).iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

fn hard_parts(pm: &PseudoMoment) -> Vec<(&'static str, f64)> {
    let (n, k) = (pm.n, pm.k);
    let mut idem = 0.0f64;
    let mut excl = 0.0f64;
    let mut lin = 0.0f64;
    let mut quad = 0.0f64;
    for u in 0..n {
        lin = lin.max((pm.ell[u * k..(u + 1) * k].iter().sum::<f64>() - 1.0).abs());
        for i in 0..k {
            idem = idem.max((pm.entry(u, i, u, i) - pm.ell[u * k + i]).abs());
            for j in 0..k {
                if i != j {
                    excl = excl.max(pm.entry(u, i, u, j).abs());
                }
            }
        }
        for v in 0..n {
            for j in 0..k {
                let s: f64 = (0..k).map(|i| pm.entry(u, i, v, j)).sum();
                quad = quad.max((s - pm.ell[v * k + j]).abs());
            }
        }
    }
    vec![
        ("hard_symmetric", max_asymmetry(&pm.q)),
        ("hard_idempotent", idem),
        ("hard_exclusive", excl),
        ("hard_row_sum", lin),
        ("hard_row_sum_product", quad),
    ]
}

/// Everything `lost2_check` needs about the input graph and base.
#[derive(Debug, Clone)]
pub struct Lost2Constraints {
    pub n: usize,
    pub k: usize,
    pub degree: usize,
    pub level: usize,
    pub delta: f64,
    pub slack_c0: f64,
    /// Sides of the input graph's vertices in bipartite mode.
    pub graph_sides: Option<Vec<u8>>,
    /// Sides of the base vertices (labels) in bipartite mode.
    pub label_sides: Option<Vec<u8>>,
    /// `A_G^{(s)}` for `s = 0..=level`.
    pub walks: Vec<Matrix>,
    /// `(n/k) q_s(M)` for `s = 0..=level`.
    pub path_targets: Vec<Matrix>,
}

impl Lost2Constraints {
    pub fn with_slack(mut self, c0: f64) -> Self {
        self.slack_c0 = c0;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn slack_abs(&self) -> f64 {
        self.slack_c0 * (self.n.max(1) as f64).ln()
    }

    pub fn bipartite(&self) -> bool {
        self.graph_sides.is_some()
    }
}

/// Degree-`(2, level)` Local Statistics constraints for `g` against base `m`:
/// hard and label constraints, labelled-path moment windows and PSD.
/// Passing a layout switches on bipartite mode.
pub fn lost2_build_constraints(
    g: &SimpleGraph,
    m: &Multigraph,
    level: usize,
    delta: f64,
    layout: Option<&BipartiteLayout>,
) -> Result<Lost2Constraints> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if m.regular_degree() != Some(d) {
        return Err(Error::InvalidParameter(format!("base is not {d}-regular")));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let (n, k) = (g.n(), m.n());
    if n % k != 0 {
        return Err(Error::SizeMismatch(format!("n = {n} is not a multiple of k = {k}")));
    }
    if n * k > MAX_LOST2_DIM {
        return Err(Error::SizeCapExceeded(format!("n * k = {} exceeds {MAX_LOST2_DIM}", n * k)));
    }
    let (graph_sides, label_sides) = match layout {
        None => (None, None),
        Some(l) => {
            let gs = l.side_of();
            if gs.len() != n || g.edges().iter().any(|&(u, v)| gs[u] == gs[v]) {
                return Err(Error::NotBipartite);
            }
            let ls = m.two_coloring().ok_or(Error::NotBipartite)?;
            (Some(gs), Some(ls))
        }
    };
    let scale = n as f64 / k as f64;
    let path_targets = nb_poly_matrices(&m.adjacency_matrix(), d, level)
        .into_iter()
        .map(|t| Matrix::from_fn(k, k, |i, j| t[(i, j)] * scale))
        .collect();
    Ok(Lost2Constraints {
        n,
        k,
        degree: d,
        level,
        delta,
        slack_c0: 0.0,
        graph_sides,
        label_sides,
        walks: nb_matrices(g, level),
        path_targets,
    })
}

/// Evaluates every constraint on `pm`.
pub fn lost2_check(pm: &PseudoMoment, c: &Lost2Constraints) -> Result<FeasibilityReport> {
    if pm.n != c.n || pm.k != c.k {
        return Err(Error::SizeMismatch(format!(
            "pseudomoment is for n = {}, k = {}; constraints for n = {}, k = {}",
            pm.n, pm.k, c.n, c.k
        )));
    }
    let (n, k) = (c.n, c.k);
    let nf = n as f64;
    let per = nf / k as f64;
    let slack_abs = c.slack_abs();
    let mut cs = Vec::new();
    for (name, r) in hard_parts(pm) {
        cs.push(ConstraintResidual::window(name, r, 0.0, EXACT_TOL));
    }
    if let (Some(gs), Some(ls)) = (&c.graph_sides, &c.label_sides) {
        let mut worst = 0.0f64;
        for u in 0..n {
            for v in (0..n).filter(|&v| gs[v] != gs[u]) {
                for i in 0..k {
                    for j in (0..k).filter(|&j| ls[j] == ls[i]) {
                        worst = worst.max(pm.entry(u, i, v, j).abs());
                    }
                }
            }
        }
        cs.push(ConstraintResidual::window("hard_cross_side", worst, 0.0, EXACT_TOL));
    }
    for i in 0..k {
        let s: f64 = (0..n).map(|u| pm.ell[u * k + i]).sum();
        cs.push(ConstraintResidual::window(format!("label_{i}"), s, per, EXACT_TOL * nf));
    }
    for i in 0..k {
        for j in i..k {
            let mut s = 0.0;
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        s += pm.entry(u, i, v, j);
                    }
                }
            }
            let target = per * (per - if i == j { 1.0 } else { 0.0 });
            cs.push(ConstraintResidual::window(format!("label_{i}_{j}"), s, target, EXACT_TOL * nf * nf));
        }
    }
    let tol = c.delta * nf + slack_abs;
    for s in 1..=c.level {
        let w = &c.walks[s];
        for i in 0..k {
            for j in i..k {
                let mut v = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        let x = w[(a, b)];
                        if x != 0.0 {
                            v += x * pm.entry(a, i, b, j);
                        }
                    }
                }
                cs.push(ConstraintResidual::window(format!("path_s{s}_{i}_{j}"), v, c.path_targets[s][(i, j)], tol));
            }
        }
    }
    let psd_threshold = -PSD_REL_TOL * nf;
    let lmin = min_eigenvalue(&pm.bordered());
    cs.push(ConstraintResidual::at_least("psd", lmin, 0.0, -psd_threshold));
    let feasible = cs.iter().all(|r| r.pass);
    Ok(FeasibilityReport {
        n,
        k,
        level: c.level,
        delta: c.delta,
        slack_c0: c.slack_c0,
        slack_abs,
        psd_threshold,
        constraints: cs,
        feasible,
    })
}

/// `P = sum_i Q_{i,i}`, the Path Statistics candidate induced by `pm`.
pub fn lost2_reduce(pm: &PseudoMoment) -> Result<PseudoPartition> {
    let r = pm.hard_residual();
    if r > HARD_TOL {
        return Err(Error::HardConstraintsViolated(r));
    }
    let k = pm.k;
    Ok(Matrix::from_fn(pm.n, pm.n, |u, v| (0..k).map(|i| pm.q[(u * k + i, v * k + i)]).sum()))
}

/// Pseudomoments of the true labelling: `ell = x`, `Q = x x^T`.
pub fn planted_pseudomoment(lift: &LiftedGraph) -> Result<PseudoMoment> {
    let (n, k) = (lift.n(), lift.k());
    if n * k > MAX_LOST2_DIM {
        return Err(Error::SizeCapExceeded(format!("n * k = {} exceeds {MAX_LOST2_DIM}", n * k)));
    }
    let ell: Vec<f64> = (0..n * k).map(|a| f64::from(u8::from(lift.sigma[a / k] == a % k))).collect();
    let q = Matrix::from_fn(n * k, n * k, |a, b| ell[a] * ell[b]);
    PseudoMoment::new(n, k, ell, q)
}

/// Pseudomoments for a Ramanujan base assembled from per-eigenvalue
/// witnesses, with `ell = 1/k`. Non-bipartite:
/// `Q = (1/(k-1)) sum_r P^(lambda_r) (x) v_r v_r^T + (1/(k(k-1))) J_n (x) (J_k - I_k)`
/// with `P^(lambda)` a Symmetric Path Statistics witness. Bipartite:
/// `Q = (J_n (x) J_k + S_n (x) S_k) / k^2 + (1/k) sum_r R^(lambda_r) (x) v_r v_r^T`
/// with `R` from `bipartite_signed_gram` and `R^(-lambda) = S R^(lambda) S`.
pub fn lost2_lower_witness(
    g: &SimpleGraph,
    m: &Multigraph,
    level: usize,
    delta: f64,
    layout: Option<&BipartiteLayout>,
    options: &NullWitnessOptions,
) -> Result<PseudoMoment> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if m.regular_degree() != Some(d) {
        return Err(Error::InvalidParameter(format!("base is not {d}-regular")));
    }
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let (n, k) = (g.n(), m.n());
    if n * k > MAX_LOST2_DIM {
        return Err(Error::SizeCapExceeded(format!("n * k = {} exceeds {MAX_LOST2_DIM}", n * k)));
    }
    let bip = layout.is_some();
    let label_sign: Vec<f64> = if bip {
        m.two_coloring().ok_or(Error::NotBipartite)?.iter().map(|&s| if s == 0 { 1.0 } else { -1.0 }).collect()
    } else {
        vec![1.0; k]
    };
    let trivial = if bip { 2 } else { 1 };
    if k <= trivial {
        return Err(Error::InvalidParameter(format!("k = {k} leaves no nontrivial eigenvalues")));
    }
    let (vals, vecs) = sym_eigen(&m.adjacency_matrix());
    let df = d as f64;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| (vals[a].abs() - df).abs().total_cmp(&(vals[b].abs() - df).abs()));
    let nontrivial = &order[trivial..];
    let edge = 2.0 * (df - 1.0).sqrt();
    if let Some(&r) = nontrivial.iter().find(|&&r| vals[r].abs() > edge + RAMANUJAN_SLACK) {
        return Err(Error::WitnessUnavailable(format!("base eigenvalue {} is outside the Ramanujan bulk", vals[r])));
    }
    // distinct eigenvalues with their projectors
    let mut groups: Vec<(f64, Matrix)> = Vec::new();
    for &r in nontrivial {
        let proj = Matrix::from_fn(k, k, |i, j| vecs[(i, r)] * vecs[(j, r)]);
        match groups.iter_mut().find(|(l, _)| (l - vals[r]).abs() < 1e-8) {
            Some((_, p)) => *p = &*p + &proj,
            None => groups.push((vals[r], proj)),
        }
    }
    let unavailable = |lambda: f64, e: Error| Error::WitnessUnavailable(format!("lambda = {lambda:.6}: {e}"));
    let kf = k as f64;
    let ell = vec![1.0 / kf; n * k];
    let Some(layout) = layout else {
        let mut witnesses = Vec::with_capacity(groups.len());
        for (lambda, _) in &groups {
            let inst = symmetric_instance(d, *lambda, k, level, delta, false)?;
            let (p, _) = null_witness(g, &inst, None, options).map_err(|e| unavailable(*lambda, e))?;
            witnesses.push(p);
        }
        let q = Matrix::from_fn(n * k, n * k, |a, b| {
            let (u, i, v, j) = (a / k, a % k, b / k, b % k);
            let spectral: f64 = groups.iter().zip(&witnesses).map(|((_, proj), p)| p[(u, v)] * proj[(i, j)]).sum();
            let eye = if i == j { 1.0 } else { 0.0 };
            spectral / (kf - 1.0) + (1.0 - eye) / (kf * (kf - 1.0))
        });
        return PseudoMoment::new(n, k, ell, q);
    };
    let graph_sign = layout.signs();
    // R for lambda >= 0; negative eigenvalues reuse their partner conjugated by S
    let mut grams: Vec<(f64, Matrix)> = Vec::new();
    for (lambda, _) in &groups {
        let key = lambda.abs();
        if grams.iter().any(|(l, _)| (l - key).abs() < 1e-8) {
            continue;
        }
        let (r, _) = bipartite_signed_gram(g, key, level, delta, layout, options).map_err(|e| unavailable(key, e))?;
        grams.push((key, r));
    }
    let pick: Vec<(usize, f64)> = groups
        .iter()
        .map(|(lambda, _)| {
            let idx = grams.iter().position(|(l, _)| (l - lambda.abs()).abs() < 1e-8).expect("computed above");
            (idx, if *lambda < -1e-8 { -1.0 } else { 1.0 })
        })
        .collect();
    let q = Matrix::from_fn(n * k, n * k, |a, b| {
        let (u, i, v, j) = (a / k, a % k, b / k, b % k);
        let sn = graph_sign[u] * graph_sign[v];
        let conj = |flip: f64| if flip < 0.0 { sn } else { 1.0 };
        let spectral: f64 = groups
            .iter()
            .zip(&pick)
            .map(|((_, proj), &(idx, flip))| conj(flip) * grams[idx].1[(u, v)] * proj[(i, j)])
            .sum();
        (1.0 + sn * label_sign[i] * label_sign[j]) / (kf * kf) + spectral / kf
    });
    PseudoMoment::new(n, k, ell, q)
}
