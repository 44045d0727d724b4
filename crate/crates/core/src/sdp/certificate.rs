use serde::Serialize;

use super::kernel::km_jacobi;
use super::path_stats::PathStatsInstance;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::linalg::sym_eigen;
use crate::spectral::{chebyshev_eval, nb_values, nontrivial_extremes, RAMANUJAN_SLACK};

pub const DEFAULT_S_CAP: usize = 64;

/// Dual certificate `f(x) = 2 - T_S(x / (2 sqrt(d-1)))` refuting the Path
/// Statistics SDP on any graph whose nontrivial spectrum stays where `f >= 0`.
#[derive(Debug, Clone, Serialize)]
pub struct InfeasibilityCertificate {
    pub s: usize,
    pub d: usize,
    pub scale: f64,
    /// Coefficients of `f` in the basis `q_0, ..., q_S`.
    pub coeffs: Vec<f64>,
    /// `sum f(lambda_i)` over nontrivial base eigenvalues; negative.
    pub nontrivial_sum: f64,
    pub coeff_l1: f64,
    /// Largest tolerance at which the certificate refutes every candidate.
    pub delta_star: f64,
    /// The instance level reaches `s`, so every coefficient is constrained.
    pub level_sufficient: bool,
    pub graph: Option<CertificateDiagnostic>,
}

impl InfeasibilityCertificate {
    pub fn eval(&self, x: f64) -> f64 {
        2.0 - chebyshev_eval(self.s, x / self.scale)
    }

    /// `f` through its `q`-expansion; agrees with `eval` up to rounding.
    pub fn eval_expansion(&self, x: f64) -> f64 {
        nb_values(self.s, self.d, x).iter().zip(&self.coeffs).map(|(q, c)| q * c).sum()
    }
}

/// Whether `f(A_G)` minus its trivial part is PSD on a concrete graph.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CertificateDiagnostic {
    pub rho: f64,
    /// Lower bound on `min f(mu)` over nontrivial eigenvalues of the graph.
    pub min_f_nontrivial: f64,
    pub psd: bool,
}

/// `c_s = E_KM[f q_s] / ||q_s||^2` by Gauss quadrature with `s + 1` nodes,
/// exact for the degree-`2s` integrands involved.
fn q_coefficients(s: usize, d: usize, scale: f64) -> Vec<f64> {
    let (nodes, vecs) = sym_eigen(&km_jacobi(d, s + 1));
    let mut c = vec![0.0; s + 1];
    for (j, &x) in nodes.iter().enumerate() {
        let w = vecs[(0, j)].powi(2);
        let f = 2.0 - chebyshev_eval(s, x / scale);
        for (cs, q) in c.iter_mut().zip(nb_values(s, d, x)) {
            *cs += w * f * q;
        }
    }
    let df = d as f64;
    for (t, cs) in c.iter_mut().enumerate() {
        if t >= 1 {
            *cs /= df * (df - 1.0).powi(t as i32 - 1);
        }
    }
    c
}

/// Searches even `S <= s_cap` for a Chebyshev certificate against the
/// instance's base spectrum. `None` when that spectrum is Ramanujan.
pub fn chebyshev_certificate(instance: &PathStatsInstance, s_cap: usize) -> Result<Option<InfeasibilityCertificate>> {
    let d = instance.degree;
    if d < 2 {
        return Err(Error::InvalidParameter("certificates need d >= 2".into()));
    }
    let scale = 2.0 * (d as f64 - 1.0).sqrt();
    let lambdas = instance.nontrivial();
    if lambdas.iter().all(|l| l.abs() <= scale + RAMANUJAN_SLACK) {
        return Ok(None);
    }
    for s in (2..=s_cap).step_by(2) {
        let sum: f64 = lambdas.iter().map(|&l| 2.0 - chebyshev_eval(s, l / scale)).sum();
        if sum < 0.0 {
            let coeffs = q_coefficients(s, d, scale);
            let coeff_l1: f64 = coeffs.iter().map(|c| c.abs()).sum();
            return Ok(Some(InfeasibilityCertificate {
                s,
                d,
                scale,
                nontrivial_sum: sum,
                coeff_l1,
                delta_star: -sum / (instance.k as f64 * coeff_l1),
                level_sufficient: instance.level >= s,
                coeffs,
                graph: None,
            }));
        }
    }
    Err(Error::SCapExceeded(s_cap))
}

/// `chebyshev_certificate` plus the diagnostic on `g`.
pub fn infeasibility_certificate(
    g: &SimpleGraph,
    instance: &PathStatsInstance,
    s_cap: usize,
) -> Result<Option<InfeasibilityCertificate>> {
    let Some(mut cert) = chebyshev_certificate(instance, s_cap)? else {
        return Ok(None);
    };
    let rho = nontrivial_extremes(g, instance.bipartite)?.rho();
    // f >= 1 on [-scale, scale] and decreases in |x| beyond it
    let min_f = if rho > cert.scale { cert.eval(rho) } else { 1.0 };
    cert.graph = Some(CertificateDiagnostic { rho, min_f_nontrivial: min_f, psd: min_f >= 0.0 });
    Ok(Some(cert))
}
