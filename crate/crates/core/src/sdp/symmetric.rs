use serde::Serialize;

use super::certificate::{infeasibility_certificate, InfeasibilityCertificate, DEFAULT_S_CAP};
use super::path_stats::{path_stats_check, FeasibilityReport, PathStatsInstance};
use super::witness::{null_witness, NullWitnessOptions, WitnessLog};
use crate::error::{Error, Result};
use crate::graph::{BipartiteLayout, SimpleGraph};
use crate::spectral::{nb_values, RAMANUJAN_SLACK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricDecision {
    /// A witness was built and passed every constraint.
    Feasible,
    /// An explicit refutation applies.
    Infeasible,
    /// Neither a passing witness nor a refutation was found.
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetricReport {
    pub lambda: f64,
    pub decision: SymmetricDecision,
    pub reason: String,
    pub targets: Vec<f64>,
    pub check: Option<FeasibilityReport>,
    pub certificate: Option<InfeasibilityCertificate>,
    pub witness_log: Option<WitnessLog>,
}

/// Instance whose base spectrum is `d` (and `-d` when bipartite) with every
/// other eigenvalue set to `lambda`.
pub fn symmetric_instance(
    d: usize,
    lambda: f64,
    k: usize,
    level: usize,
    delta: f64,
    bipartite: bool,
) -> Result<PathStatsInstance> {
    if lambda.abs() > d as f64 + 1e-12 {
        return Err(Error::InvalidParameter(format!("|lambda| = {} exceeds d = {d}", lambda.abs())));
    }
    let trivial = if bipartite { 2 } else { 1 };
    if k <= trivial {
        return Err(Error::InvalidParameter(format!("k = {k} too small")));
    }
    let mut spec = vec![d as f64];
    if bipartite {
        spec.push(-(d as f64));
    }
    spec.extend(std::iter::repeat(lambda).take(k - trivial));
    PathStatsInstance::new(level, delta, spec, bipartite)
}

/// Moment targets `((k-1)/k q_s(lambda) + (1/k) q_s(d)) n` (bipartite:
/// `(k-2)/k q_s(lambda) + (q_s(d) + q_s(-d))/k`) for `s = 0..=level`.
pub fn symmetric_targets(d: usize, lambda: f64, k: usize, level: usize, bipartite: bool, n: usize) -> Vec<f64> {
    let ql = nb_values(level, d, lambda);
    let qd = nb_values(level, d, d as f64);
    let qm = nb_values(level, d, -(d as f64));
    let kf = k as f64;
    (0..=level)
        .map(|s| {
            let v = if bipartite {
                (kf - 2.0) / kf * ql[s] + (qd[s] + qm[s]) / kf
            } else {
                (kf - 1.0) / kf * ql[s] + qd[s] / kf
            };
            v * n as f64
        })
        .collect()
}

/// Decides the Symmetric Path Statistics SDP on `g` by witness or refutation.
#[allow(clippy::too_many_arguments)]
pub fn symmetric_path_stats(
    g: &SimpleGraph,
    lambda: f64,
    k: usize,
    level: usize,
    delta: f64,
    bipartite: bool,
    layout: Option<&BipartiteLayout>,
    options: &NullWitnessOptions,
) -> Result<SymmetricReport> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    let n = g.n();
    let instance = symmetric_instance(d, lambda, k, level, delta, bipartite)?;
    let targets = symmetric_targets(d, lambda, k, level, bipartite, n);
    let mut out = SymmetricReport {
        lambda,
        decision: SymmetricDecision::Undetermined,
        reason: String::new(),
        targets,
        check: None,
        certificate: None,
        witness_log: None,
    };
    if bipartite {
        // zero cross blocks force <P, q_s(A)> = 0 for odd s
        let slack = instance.slack_abs(n);
        if let Some(s) = (1..=level).step_by(2).find(|&s| out.targets[s].abs() > delta * n as f64 + slack) {
            out.decision = SymmetricDecision::Infeasible;
            out.reason = format!("odd moment s = {s} has target {:.3} but must vanish", out.targets[s]);
            return Ok(out);
        }
    }
    let edge = 2.0 * (d as f64 - 1.0).sqrt();
    if lambda.abs() > edge + RAMANUJAN_SLACK {
        let cert = infeasibility_certificate(g, &instance, DEFAULT_S_CAP)?;
        if let Some(c) = &cert {
            let applies = c.level_sufficient && delta <= c.delta_star && c.graph.is_some_and(|x| x.psd);
            if applies {
                out.decision = SymmetricDecision::Infeasible;
                out.reason = format!("Chebyshev certificate of degree {} with delta* = {:.3e}", c.s, c.delta_star);
            } else {
                out.reason = format!(
                    "certificate of degree {} does not apply (level {level}, delta {delta}, delta* {:.3e})",
                    c.s, c.delta_star
                );
            }
        }
        out.certificate = cert;
        return Ok(out);
    }
    match null_witness(g, &instance, layout, options) {
        Ok((p, log)) => {
            let report = path_stats_check(g, &p, &instance, layout)?;
            if report.feasible {
                out.decision = SymmetricDecision::Feasible;
                out.reason = "witness passes every constraint".into();
            } else {
                out.reason = format!("witness fails {:?}", report.failed());
            }
            out.check = Some(report);
            out.witness_log = Some(log);
        }
        Err(e @ (Error::KernelMomentFailure { .. } | Error::RepairInfeasible(_))) => {
            out.reason = format!("no witness: {e}");
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}
