use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{BipartiteLayout, SimpleGraph};
use crate::rng::{rng_from, Rng};

pub const DEFAULT_RETRY_CAP: usize = 200_000;

/// Largest degree for which plain pairing rejection is used by `Auto`;
/// above it the acceptance rate `~exp(-(d^2-1)/4)` is too small.
pub const PAIRING_MAX_DEGREE: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegularMethod {
    /// Pairing model with whole-sample rejection; exactly uniform.
    Pairing,
    /// Sequential pairing restricted to admissible pairs; asymptotically uniform.
    Sequential,
    #[default]
    Auto,
}

/// Uniform simple `d`-regular graph on `n` vertices.
pub fn sample_regular(n: usize, d: usize, seed: u64) -> Result<SimpleGraph> {
    sample_regular_with(n, d, seed, RegularMethod::Auto, DEFAULT_RETRY_CAP)
}

pub fn sample_regular_with(
    n: usize,
    d: usize,
    seed: u64,
    method: RegularMethod,
    retry_cap: usize,
) -> Result<SimpleGraph> {
    if (n * d) % 2 == 1 {
        return Err(Error::ParityViolation { n, d });
    }
    if d == 0 || d >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= d < n, got d={d}, n={n}")));
    }
    let mut rng = rng_from(seed);
    let sequential = match method {
        RegularMethod::Pairing => false,
        RegularMethod::Sequential => true,
        RegularMethod::Auto => d > PAIRING_MAX_DEGREE,
    };
    let points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    for _ in 0..retry_cap {
        let adj = if sequential {
            sequential_attempt(&points, n, &mut rng, |_, _| true)
        } else {
            pairing_attempt(&points, n, &mut rng)
        };
        if let Some(adj) = adj {
            return SimpleGraph::from_adjacency(adj);
        }
    }
    Err(Error::RetryCapExceeded(retry_cap))
}

fn pairing_attempt(points: &[usize], n: usize, rng: &mut Rng) -> Option<Vec<Vec<usize>>> {
    let mut p = points.to_vec();
    p.shuffle(rng);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for pair in p.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v || adj[u].contains(&v) {
            return None;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    Some(adj)
}

/// Pairs uniformly chosen admissible point pairs until none remain; `None`
/// if the process gets stuck.
fn sequential_attempt(
    points: &[usize],
    n: usize,
    rng: &mut Rng,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<Vec<Vec<usize>>> {
    let mut p = points.to_vec();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let ok = |adj: &[Vec<usize>], u: usize, v: usize| u != v && !adj[u].contains(&v) && allowed(u, v);
    let mut misses = 0;
    while !p.is_empty() {
        let i = rng.gen_range(0..p.len());
        let j = rng.gen_range(0..p.len());
        if i != j && ok(&adj, p[i], p[j]) {
            let (u, v) = (p[i], p[j]);
            adj[u].push(v);
            adj[v].push(u);
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            p.swap_remove(hi);
            p.swap_remove(lo);
            misses = 0;
            continue;
        }
        misses += 1;
        if misses > 64 {
            let any = (0..p.len()).any(|a| (a + 1..p.len()).any(|b| ok(&adj, p[a], p[b])));
            if !any {
                return None;
            }
            misses = 0;
        }
    }
    Some(adj)
}

/// Uniform simple bipartite `d`-regular graph with sides `0..n/2` and `n/2..n`.
///
/// Left points are matched to right points by a uniform bijection and the
/// sample is rejected unless simple, which is uniform over simple graphs.
pub fn sample_bipartite_regular(n: usize, d: usize, seed: u64) -> Result<(SimpleGraph, BipartiteLayout)> {
    sample_bipartite_regular_with(n, d, seed, RegularMethod::Auto, DEFAULT_RETRY_CAP)
}

pub fn sample_bipartite_regular_with(
    n: usize,
    d: usize,
    seed: u64,
    method: RegularMethod,
    retry_cap: usize,
) -> Result<(SimpleGraph, BipartiteLayout)> {
    if n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("bipartite sampling needs even n, got {n}")));
    }
    let h = n / 2;
    if d == 0 || d > h {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= n/2, got d={d}, n={n}")));
    }
    let mut rng = rng_from(seed);
    let sequential = match method {
        RegularMethod::Pairing => false,
        RegularMethod::Sequential => true,
        RegularMethod::Auto => d > PAIRING_MAX_DEGREE,
    };
    let points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let right: Vec<usize> = (h..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    for _ in 0..retry_cap {
        let adj = if sequential {
            sequential_attempt(&points, n, &mut rng, |u, v| (u < h) != (v < h))
        } else {
            let mut r = right.clone();
            r.shuffle(&mut rng);
            let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
            let mut good = true;
            for (idx, &v) in r.iter().enumerate() {
                let u = idx / d;
                if adj[u].contains(&v) {
                    good = false;
                    break;
                }
                adj[u].push(v);
                adj[v].push(u);
            }
            good.then_some(adj)
        };
        if let Some(adj) = adj {
            return Ok((SimpleGraph::from_adjacency(adj)?, BipartiteLayout::canonical(n)));
        }
    }
    Err(Error::RetryCapExceeded(retry_cap))
}
