use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graph::SimpleGraph;
use crate::rng::derive_seed;
use crate::spectral::spectral_radius;

pub type Sampler<'a> = dyn Fn(u64) -> Result<SimpleGraph> + Sync + 'a;
pub type Statistic<'a> = dyn Fn(&SimpleGraph) -> Result<f64> + Sync + 'a;

#[derive(Debug, Clone, Serialize)]
pub struct DetectionResult {
    pub threshold: f64,
    pub trials: usize,
    pub seed: u64,
    pub type_i: f64,
    pub type_ii: f64,
    pub null_stats: Vec<f64>,
    pub planted_stats: Vec<f64>,
}

impl DetectionResult {
    pub fn total_error(&self) -> f64 {
        self.type_i + self.type_ii
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub type_i: f64,
    pub type_ii: f64,
}

/// Default statistic: nontrivial spectral radius.
pub fn spectral_radius_statistic(g: &SimpleGraph) -> Result<f64> {
    spectral_radius(g, false)
}

/// Estimates both error rates of the test "declare planted when the
/// statistic exceeds `threshold`". Trial `t` draws its null graph from seed
/// `derive_seed(seed, 2t)` and its planted graph from `derive_seed(seed, 2t+1)`.
pub fn detect_experiment(
    null_sampler: &Sampler<'_>,
    planted_sampler: &Sampler<'_>,
    statistic: &Statistic<'_>,
    threshold: f64,
    trials: usize,
    seed: u64,
) -> Result<DetectionResult> {
    let pairs: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let null = statistic(&null_sampler(derive_seed(seed, 2 * t))?)?;
            let planted = statistic(&planted_sampler(derive_seed(seed, 2 * t + 1))?)?;
            Ok((null, planted))
        })
        .collect::<Result<_>>()?;
    let (null_stats, planted_stats): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let p = roc_point(&null_stats, &planted_stats, threshold);
    Ok(DetectionResult {
        threshold,
        trials,
        seed,
        type_i: p.type_i,
        type_ii: p.type_ii,
        null_stats,
        planted_stats,
    })
}

pub fn roc_point(null_stats: &[f64], planted_stats: &[f64], threshold: f64) -> RocPoint {
    let frac = |n: usize, total: usize| if total == 0 { 0.0 } else { n as f64 / total as f64 };
    RocPoint {
        threshold,
        type_i: frac(null_stats.iter().filter(|&&s| s > threshold).count(), null_stats.len()),
        type_ii: frac(planted_stats.iter().filter(|&&s| s <= threshold).count(), planted_stats.len()),
    }
}

/// ROC over every observed statistic value plus the two extremes.
pub fn roc_curve(null_stats: &[f64], planted_stats: &[f64]) -> Vec<RocPoint> {
    let mut t: Vec<f64> = null_stats.iter().chain(planted_stats).copied().collect();
    t.push(f64::NEG_INFINITY);
    t.sort_by(f64::total_cmp);
    t.dedup();
    t.into_iter().map(|x| roc_point(null_stats, planted_stats, x)).collect()
}
