use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::registry::builtin;
use super::table1::lift_order;
use crate::ensembles::{
    apply_noise, detect_experiment, random_lift, roc_curve, sample_regular, spectral_radius_statistic, LiftedGraph,
    NoiseMode, NoiseSpec,
};
use crate::error::{Error, Result};
use crate::graph::{Multigraph, SimpleGraph};
use crate::rng::derive_seed;
use crate::sdp::{moment_values, null_witness, path_stats_check, planted_witness, NullWitnessOptions, PathStatsInstance};
use crate::spectral::{is_ramanujan, RAMANUJAN_SLACK};

/// Offset added above the midpoint between the Ramanujan edge and the base
/// spectral radius when no detection threshold is given.
pub const DETECT_MARGIN: f64 = 0.02;
pub const MAX_SWEEP_LEVEL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Spectral-radius test, null G(n, d) against (noisy) lifts of the base.
    Detect,
    /// Path Statistics feasibility of planted and null witnesses per delta.
    DeltaSweep,
    /// Moment residuals of the planted witness on noisy lifts per epsilon.
    NoiseRobustness,
}

fn default_n() -> usize {
    1000
}

fn default_trials() -> usize {
    10
}

fn default_level() -> usize {
    3
}

fn default_mode() -> NoiseMode {
    NoiseMode::Rand
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Built-in base graph name.
    pub base: String,
    /// Target graph order; lifts use `m = round(n / k)`.
    #[serde(default = "default_n")]
    pub n: usize,
    /// Degree; checked against the base when given.
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Noise applied to planted graphs in `detect`.
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_mode")]
    pub noise: NoiseMode,
    #[serde(default)]
    pub threshold: Option<f64>,
    /// Walk-length level `D`.
    #[serde(default = "default_level")]
    pub level: usize,
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub slack_c0: f64,
    /// Output directory; left out of the recorded metadata so results do not
    /// depend on where they are written.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, base: &str) -> Self {
        Self {
            experiment,
            base: base.to_string(),
            n: default_n(),
            d: None,
            trials: default_trials(),
            seed: 0,
            epsilon: 0.0,
            noise: default_mode(),
            threshold: None,
            level: default_level(),
            deltas: Vec::new(),
            epsilons: Vec::new(),
            slack_c0: 0.0,
            out: None,
        }
    }

    /// Resolves the base and checks every parameter before dispatch.
    pub fn validate(&self) -> Result<(Multigraph, usize)> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let h = builtin(&self.base)?;
        let d = h.regular_degree().ok_or(Error::NotRegular)?;
        if !h.is_connected() {
            return Err(Error::Disconnected);
        }
        if let Some(dd) = self.d {
            if dd != d {
                return bad(format!("d = {dd} but {} is {d}-regular", self.base));
            }
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        let m = lift_order(&h, self.n);
        if h.n() * m <= d {
            return bad(format!("n = {} too small", self.n));
        }
        if self.noise.bipartite() {
            return bad("bipartite noise modes are not supported by the experiment runner".into());
        }
        let eps_ok = |e: f64| (0.0..0.5).contains(&e);
        if !eps_ok(self.epsilon) {
            return bad(format!("epsilon {} outside [0, 0.5)", self.epsilon));
        }
        match self.experiment {
            ExperimentKind::Detect => {}
            ExperimentKind::DeltaSweep => {
                if self.deltas.is_empty() || self.deltas.iter().any(|&x| x.is_nan() || x <= 0.0) {
                    return bad("delta sweep needs positive deltas".into());
                }
            }
            ExperimentKind::NoiseRobustness => {
                if self.epsilons.is_empty() || !self.epsilons.iter().all(|&e| eps_ok(e)) {
                    return bad("noise sweep needs epsilons in [0, 0.5)".into());
                }
            }
        }
        if self.experiment != ExperimentKind::Detect && !(1..=MAX_SWEEP_LEVEL).contains(&self.level) {
            return bad(format!("level {} outside 1..={MAX_SWEEP_LEVEL}", self.level));
        }
        if self.slack_c0 < 0.0 {
            return bad("slack_c0 must be nonnegative".into());
        }
        Ok((h, m))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Artifacts {
    pub files: Vec<Artifact>,
    /// Where the files were written, if `out` was set.
    pub written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|f| f.name == name).map(|f| f.contents.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for f in &self.files {
            let p = dir.join(&f.name);
            std::fs::write(&p, &f.contents)?;
            out.push(p);
        }
        Ok(out)
    }
}

/// Runs a validated experiment and, when `out` is set, writes its files there.
pub fn run(config: &ExperimentConfig) -> Result<Artifacts> {
    let context = |e: Error| Error::Context { context: format!("{:?} on {}", config.experiment, config.base), source: Box::new(e) };
    let (h, m) = config.validate().map_err(context)?;
    let mut a = match config.experiment {
        ExperimentKind::Detect => run_detect(config, &h, m),
        ExperimentKind::DeltaSweep => run_delta_sweep(config, &h, m),
        ExperimentKind::NoiseRobustness => run_noise(config, &h, m),
    }
    .map_err(context)?;
    if let Some(dir) = &config.out {
        a.written = a.write_to(dir)?;
    }
    Ok(a)
}

fn metadata(config: &ExperimentConfig, h: &Multigraph, m: usize, tolerance: serde_json::Value) -> serde_json::Value {
    json!({
        "experiment": config.experiment,
        "base": config.base,
        "k": h.n(),
        "m": m,
        "n": h.n() * m,
        "d": h.regular_degree(),
        "seed": config.seed,
        "trials": config.trials,
        "tolerance": tolerance,
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn noisy_lift(h: &Multigraph, m: usize, epsilon: f64, mode: NoiseMode, seed: u64) -> Result<(LiftedGraph, SimpleGraph)> {
    let lift = random_lift(h, m, derive_seed(seed, 0))?;
    let g = if epsilon > 0.0 {
        apply_noise(&lift.graph, &NoiseSpec::new(epsilon, mode), Some(&lift), derive_seed(seed, 1))?.graph
    } else {
        lift.graph.clone()
    };
    Ok((lift, g))
}

/// Threshold halfway between the Ramanujan edge and the base's spectral
/// radius (clamped at the edge), plus `DETECT_MARGIN`.
pub fn default_threshold(h: &Multigraph) -> Result<f64> {
    let r = is_ramanujan(h, false)?;
    Ok(r.bound + 0.5 * (r.extreme - r.bound).max(0.0) + DETECT_MARGIN)
}

fn run_detect(config: &ExperimentConfig, h: &Multigraph, m: usize) -> Result<Artifacts> {
    let d = h.regular_degree().ok_or(Error::NotRegular)?;
    let n = h.n() * m;
    let threshold = match config.threshold {
        Some(t) => t,
        None => default_threshold(h)?,
    };
    let null = |s: u64| sample_regular(n, d, s);
    let planted = |s: u64| noisy_lift(h, m, config.epsilon, config.noise, s).map(|x| x.1);
    let r = detect_experiment(&null, &planted, &spectral_radius_statistic, threshold, config.trials, config.seed)?;
    let mut roc = String::from("threshold,type_i,type_ii\n");
    for p in roc_curve(&r.null_stats, &r.planted_stats) {
        writeln!(roc, "{},{},{}", p.threshold, p.type_i, p.type_ii).unwrap();
    }
    let summary = json!({
        "metadata": metadata(config, h, m, json!({ "threshold": threshold })),
        "threshold": threshold,
        "type_i": r.type_i,
        "type_ii": r.type_ii,
        "total_error": r.total_error(),
        "null_stats": r.null_stats,
        "planted_stats": r.planted_stats,
    });
    Ok(Artifacts {
        files: vec![
            Artifact { name: "roc.csv".into(), contents: roc },
            Artifact { name: "detect.json".into(), contents: pretty(&summary)? },
        ],
        written: vec![],
    })
}

#[derive(Debug, Clone, Serialize)]
struct SweepCell {
    trial: usize,
    planted: bool,
    null: bool,
    null_reason: String,
}

fn run_delta_sweep(config: &ExperimentConfig, h: &Multigraph, m: usize) -> Result<Artifacts> {
    let d = h.regular_degree().ok_or(Error::NotRegular)?;
    let n = h.n() * m;
    let options = NullWitnessOptions::default();
    let mut rows = Vec::new();
    let mut csv = String::from("delta,trial,planted,null\n");
    let verdict = |b: bool| if b { "PASS" } else { "FAIL" };
    for &delta in &config.deltas {
        let instance = PathStatsInstance::from_base(h, config.level, delta, false)?.with_slack(config.slack_c0);
        let cells: Vec<SweepCell> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let lift = random_lift(h, m, derive_seed(config.seed, 2 * t as u64 + 1))?;
                let planted = path_stats_check(&lift.graph, &planted_witness(&lift), &instance, None)?.feasible;
                let g = sample_regular(n, d, derive_seed(config.seed, 2 * t as u64))?;
                let (null, null_reason) = match null_witness(&g, &instance, None, &options) {
                    Ok((p, _)) => {
                        let rep = path_stats_check(&g, &p, &instance, None)?;
                        (rep.feasible, rep.failed().join(" "))
                    }
                    Err(e @ (Error::KernelMomentFailure { .. } | Error::RepairInfeasible(_))) => (false, e.to_string()),
                    Err(e) => return Err(e),
                };
                Ok(SweepCell { trial: t, planted, null, null_reason })
            })
            .collect::<Result<_>>()?;
        for c in &cells {
            writeln!(csv, "{delta},{},{},{}", c.trial, verdict(c.planted), verdict(c.null)).unwrap();
        }
        let planted_pass = cells.iter().filter(|c| c.planted).count();
        let null_pass = cells.iter().filter(|c| c.null).count();
        rows.push(json!({
            "delta": delta,
            "planted": verdict(planted_pass == cells.len()),
            "planted_pass": planted_pass,
            "null": verdict(null_pass == cells.len()),
            "null_pass": null_pass,
            "trials": cells,
        }));
    }
    let ramanujan = is_ramanujan(h, false)?;
    let summary = json!({
        "metadata": metadata(config, h, m, json!({ "deltas": config.deltas, "slack_c0": config.slack_c0, "level": config.level })),
        "base_ramanujan": ramanujan.extreme <= ramanujan.bound + RAMANUJAN_SLACK,
        "rows": rows,
    });
    Ok(Artifacts {
        files: vec![
            Artifact { name: "sweep.json".into(), contents: pretty(&summary)? },
            Artifact { name: "sweep.csv".into(), contents: csv },
        ],
        written: vec![],
    })
}

fn run_noise(config: &ExperimentConfig, h: &Multigraph, m: usize) -> Result<Artifacts> {
    let n = h.n() * m;
    // delta does not enter the targets
    let instance = PathStatsInstance::from_base(h, config.level, 1.0, false)?;
    let targets = instance.targets(n);
    let level = config.level;
    // residual[e][t][s]
    let mut residuals: Vec<Vec<Vec<f64>>> = Vec::new();
    for &eps in &config.epsilons {
        let per_trial: Vec<Vec<f64>> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let (lift, g) = noisy_lift(h, m, eps, config.noise, derive_seed(config.seed, t as u64))?;
                let values = moment_values(&g, &planted_witness(&lift), level);
                Ok(values.iter().zip(&targets).map(|(v, t)| (v - t).abs()).collect())
            })
            .collect::<Result<_>>()?;
        residuals.push(per_trial);
    }
    let mut csv = String::from("epsilon,trial,s,residual,residual_per_n\n");
    for (e, per_trial) in config.epsilons.iter().zip(&residuals) {
        for (t, r) in per_trial.iter().enumerate() {
            for (s, x) in r.iter().enumerate() {
                writeln!(csv, "{e},{t},{s},{x},{}", x / n as f64).unwrap();
            }
        }
    }
    // least-squares slope through the origin of mean residual / n against epsilon
    let slopes: Vec<f64> = (0..=level)
        .map(|s| {
            let (mut num, mut den) = (0.0, 0.0);
            for (e, per_trial) in config.epsilons.iter().zip(&residuals) {
                let mean = per_trial.iter().map(|r| r[s]).sum::<f64>() / per_trial.len() as f64 / n as f64;
                num += e * mean;
                den += e * e;
            }
            if den > 0.0 {
                num / den
            } else {
                0.0
            }
        })
        .collect();
    let summary = json!({
        "metadata": metadata(config, h, m, json!({ "level": level, "noise": config.noise })),
        "slopes": slopes.iter().enumerate().map(|(s, k)| json!({ "s": s, "slope": k })).collect::<Vec<_>>(),
    });
    Ok(Artifacts {
        files: vec![
            Artifact { name: "residuals.csv".into(), contents: csv },
            Artifact { name: "slopes.json".into(), contents: pretty(&summary)? },
        ],
        written: vec![],
    })
}
