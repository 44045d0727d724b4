use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::LiftedGraph;
use crate::error::{Error, Result};
use crate::graph::{find_bipartition, graph_distance, SimpleGraph};
use crate::rng::{rng_from, Rng};

pub const DEFAULT_NOISE_RETRY_CAP: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    Rand,
    RandBi,
    RespectfulRand,
    RespectfulRandBi,
    Adversarial,
    RespectfulAdversarial,
}

impl NoiseMode {
    pub fn respectful(self) -> bool {
        matches!(self, Self::RespectfulRand | Self::RespectfulRandBi | Self::RespectfulAdversarial)
    }

    pub fn bipartite(self) -> bool {
        matches!(self, Self::RandBi | Self::RespectfulRandBi)
    }

    pub fn adversarial(self) -> bool {
        matches!(self, Self::Adversarial | Self::RespectfulAdversarial)
    }
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "rand" => Self::Rand,
            "rand_bi" => Self::RandBi,
            "respectful_rand" => Self::RespectfulRand,
            "respectful_rand_bi" => Self::RespectfulRandBi,
            "adversarial" => Self::Adversarial,
            "respectful_adversarial" => Self::RespectfulAdversarial,
            other => return Err(Error::InvalidParameter(format!("unknown noise mode {other}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub epsilon: f64,
    pub mode: NoiseMode,
    pub retry_cap: usize,
}

impl NoiseSpec {
    pub fn new(epsilon: f64, mode: NoiseMode) -> Self {
        Self { epsilon, mode, retry_cap: DEFAULT_NOISE_RETRY_CAP }
    }

    /// `floor(epsilon n)`, guarded against representation error just below an integer.
    pub fn budget(&self, n: usize) -> usize {
        (self.epsilon * n as f64 + 1e-9).floor() as usize
    }
}

/// Output of a noise operator with its provenance.
#[derive(Debug, Clone)]
pub struct NoiseOutcome {
    pub graph: SimpleGraph,
    pub removed: Vec<(usize, usize)>,
    pub added: Vec<(usize, usize)>,
    /// Rejection rounds used by the completion step.
    pub attempts: usize,
    /// True when plain rejection hit the retry cap and the completion was
    /// finished by local switchings among the added pairs.
    pub switching_repair: bool,
}

/// Perturbation contract: output must be regular of the same degree,
/// within distance `epsilon`, and, for respectful use, must not join fibers
/// that are non-adjacent in the base.
pub trait Adversary: Sync {
    fn name(&self) -> &str;
    fn perturb(
        &self,
        g: &SimpleGraph,
        lift: Option<&LiftedGraph>,
        epsilon: f64,
        rng: &mut Rng,
    ) -> Result<SimpleGraph>;
}

pub struct IdentityAdversary;

impl Adversary for IdentityAdversary {
    fn name(&self) -> &str {
        "identity"
    }
    fn perturb(&self, g: &SimpleGraph, _: Option<&LiftedGraph>, _: f64, _: &mut Rng) -> Result<SimpleGraph> {
        Ok(g.clone())
    }
}

/// Applies `floor(epsilon n / 2)` random switchings `{a,b},{c,d} -> {a,c},{b,d}`.
/// Each switching changes four edges, so the distance stays within `epsilon`.
pub struct RandomSwitching {
    pub respectful: bool,
}

impl Adversary for RandomSwitching {
    fn name(&self) -> &str {
        if self.respectful {
            "respectful-random-switching"
        } else {
            "random-switching"
        }
    }

    fn perturb(
        &self,
        g: &SimpleGraph,
        lift: Option<&LiftedGraph>,
        epsilon: f64,
        rng: &mut Rng,
    ) -> Result<SimpleGraph> {
        if self.respectful && lift.is_none() {
            return Err(Error::MissingBase);
        }
        let n = g.n();
        let target = ((epsilon * n as f64 + 1e-9).floor() as usize) / 2;
        let mut edges = g.edges();
        let mut set: HashSet<(usize, usize)> = edges.iter().copied().collect();
        let allowed = |u: usize, v: usize| match (self.respectful, lift) {
            (true, Some(l)) => l.base.mult(l.sigma[u], l.sigma[v]) > 0,
            _ => true,
        };
        let mut done = 0;
        let mut tries = 0;
        while done < target && tries < 1000 * (target + 1) {
            tries += 1;
            let i = rng.gen_range(0..edges.len());
            let j = rng.gen_range(0..edges.len());
            if i == j {
                continue;
            }
            let (a, b) = edges[i];
            let (c, d) = if rng.gen_bool(0.5) { edges[j] } else { (edges[j].1, edges[j].0) };
            let (e1, e2) = (key(a, c), key(b, d));
            if a == c || b == d || set.contains(&e1) || set.contains(&e2) || e1 == e2 {
                continue;
            }
            if !allowed(a, c) || !allowed(b, d) {
                continue;
            }
            set.remove(&edges[i]);
            set.remove(&key(edges[j].0, edges[j].1));
            set.insert(e1);
            set.insert(e2);
            edges[i] = e1;
            edges[j] = e2;
            done += 1;
        }
        let out: Vec<(usize, usize)> = edges;
        SimpleGraph::from_edges(n, &out)
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Applies a noise operator. `base` is required for respectful modes.
/// Adversarial modes use [`RandomSwitching`]; see [`apply_noise_with`].
pub fn apply_noise(g: &SimpleGraph, spec: &NoiseSpec, base: Option<&LiftedGraph>, seed: u64) -> Result<NoiseOutcome> {
    let adv = RandomSwitching { respectful: spec.mode.respectful() };
    apply_noise_with(g, spec, base, seed, &adv)
}

pub fn apply_noise_with(
    g: &SimpleGraph,
    spec: &NoiseSpec,
    base: Option<&LiftedGraph>,
    seed: u64,
    adversary: &dyn Adversary,
) -> Result<NoiseOutcome> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if spec.mode.respectful() && base.is_none() {
        return Err(Error::MissingBase);
    }
    if !(0.0..1.0).contains(&spec.epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon {} outside [0,1)", spec.epsilon)));
    }
    let mut rng = rng_from(seed);
    if spec.mode.adversarial() {
        let out = adversary.perturb(g, base, spec.epsilon, &mut rng)?;
        check_adversary_output(g, &out, d, spec, base, adversary.name())?;
        let (removed, added) = edge_diff(g, &out);
        return Ok(NoiseOutcome { graph: out, removed, added, attempts: 1, switching_repair: false });
    }

    let n = g.n();
    let budget = spec.budget(n);
    if budget == 0 {
        return Ok(NoiseOutcome {
            graph: g.clone(),
            removed: vec![],
            added: vec![],
            attempts: 0,
            switching_repair: false,
        });
    }
    let side: Option<Vec<u8>> = if spec.mode.bipartite() {
        Some(find_bipartition(g)?.ok_or(Error::NotBipartite)?.side_of())
    } else {
        None
    };
    let allowed = |u: usize, v: usize| -> bool {
        if u == v {
            return false;
        }
        if let Some(s) = &side {
            if s[u] == s[v] {
                return false;
            }
        }
        if spec.mode.respectful() {
            let l = base.expect("checked above");
            if l.base.mult(l.sigma[u], l.sigma[v]) == 0 {
                return false;
            }
        }
        true
    };

    let edges = g.edges();
    if budget > edges.len() {
        return Err(Error::InvalidParameter("noise budget exceeds edge count".into()));
    }
    let removed: Vec<(usize, usize)> = index::sample(&mut rng, edges.len(), budget)
        .into_iter()
        .map(|i| edges[i])
        .collect();
    let removed_set: HashSet<(usize, usize)> = removed.iter().copied().collect();
    let kept: HashSet<(usize, usize)> = edges.iter().copied().filter(|e| !removed_set.contains(e)).collect();

    // deficiency points, split by side in bipartite modes so that every
    // candidate pair crosses
    let (mut left, mut right): (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
    for &(u, v) in &removed {
        match &side {
            Some(s) if s[u] == 1 => {
                right.push(u);
                left.push(v);
            }
            Some(_) => {
                left.push(u);
                right.push(v);
            }
            None => {
                left.push(u);
                left.push(v);
            }
        }
    }

    let valid = |pairs: &[(usize, usize)]| -> bool {
        let mut seen = HashSet::with_capacity(pairs.len());
        pairs.iter().all(|&(u, v)| allowed(u, v) && !kept.contains(&key(u, v)) && seen.insert(key(u, v)))
    };
    let draw = |rng: &mut Rng| -> Vec<(usize, usize)> {
        if side.is_some() {
            let mut r = right.clone();
            r.shuffle(rng);
            left.iter().copied().zip(r).collect()
        } else {
            let mut p = left.clone();
            p.shuffle(rng);
            p.chunks_exact(2).map(|c| (c[0], c[1])).collect()
        }
    };

    let mut attempts = 0;
    let mut added = None;
    while attempts < spec.retry_cap {
        attempts += 1;
        let pairs = draw(&mut rng);
        if valid(&pairs) {
            added = Some(pairs);
            break;
        }
    }
    let mut switching_repair = false;
    let added = match added {
        Some(a) => a,
        None => {
            switching_repair = true;
            let start = draw(&mut rng);
            repair_by_switching(start, &allowed, &kept, side.is_some(), spec.retry_cap, &mut rng)
                .ok_or(Error::CompletionFailed(attempts))?
        }
    };

    let mut all: Vec<(usize, usize)> = kept.iter().copied().collect();
    all.extend(added.iter().map(|&(u, v)| key(u, v)));
    all.sort_unstable();
    let graph = SimpleGraph::from_edges(n, &all)?;
    Ok(NoiseOutcome {
        graph,
        removed,
        added: added.into_iter().map(|(u, v)| key(u, v)).collect(),
        attempts,
        switching_repair,
    })
}

/// Local search over re-pairings of the deficiency points: repeatedly swaps
/// partners of an invalid pair with another pair until every pair is valid.
fn repair_by_switching(
    mut pairs: Vec<(usize, usize)>,
    allowed: &dyn Fn(usize, usize) -> bool,
    kept: &HashSet<(usize, usize)>,
    crossing: bool,
    rounds: usize,
    rng: &mut Rng,
) -> Option<Vec<(usize, usize)>> {
    let bad = |pairs: &[(usize, usize)], i: usize| -> bool {
        let (u, v) = pairs[i];
        !allowed(u, v)
            || kept.contains(&key(u, v))
            || pairs.iter().enumerate().any(|(j, &(a, b))| j != i && key(a, b) == key(u, v))
    };
    for _ in 0..rounds.max(1) * 100 {
        let Some(i) = (0..pairs.len()).find(|&i| bad(&pairs, i)) else {
            return Some(pairs);
        };
        if pairs.len() < 2 {
            return None;
        }
        let j = loop {
            let j = rng.gen_range(0..pairs.len());
            if j != i {
                break j;
            }
        };
        let ((a, b), (c, d)) = (pairs[i], pairs[j]);
        if crossing || rng.gen_bool(0.5) {
            pairs[i] = (a, d);
            pairs[j] = (c, b);
        } else {
            pairs[i] = (a, c);
            pairs[j] = (b, d);
        }
    }
    None
}

type EdgeList = Vec<(usize, usize)>;

fn edge_diff(g: &SimpleGraph, h: &SimpleGraph) -> (EdgeList, EdgeList) {
    let a: HashSet<_> = g.edges().into_iter().collect();
    let b: HashSet<_> = h.edges().into_iter().collect();
    let mut removed: Vec<_> = a.difference(&b).copied().collect();
    let mut added: Vec<_> = b.difference(&a).copied().collect();
    removed.sort_unstable();
    added.sort_unstable();
    (removed, added)
}

fn check_adversary_output(
    g: &SimpleGraph,
    out: &SimpleGraph,
    d: usize,
    spec: &NoiseSpec,
    base: Option<&LiftedGraph>,
    name: &str,
) -> Result<()> {
    if out.n() != g.n() || out.regular_degree() != Some(d) {
        return Err(Error::InvalidParameter(format!("adversary {name} broke regularity")));
    }
    let dist = graph_distance(g, out)?;
    let dist = *dist.numer() as f64 / *dist.denom() as f64;
    if dist > spec.epsilon + 1e-12 {
        return Err(Error::InvalidParameter(format!("adversary {name} moved distance {dist} > {}", spec.epsilon)));
    }
    if spec.mode.respectful() {
        let l = base.ok_or(Error::MissingBase)?;
        let (_, added) = edge_diff(g, out);
        if added.iter().any(|&(u, v)| l.base.mult(l.sigma[u], l.sigma[v]) == 0) {
            return Err(Error::InvalidParameter(format!("adversary {name} added a disrespectful edge")));
        }
    }
    Ok(())
}
