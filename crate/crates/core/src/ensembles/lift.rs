use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, SimpleGraph};
use crate::linalg::Matrix;
use crate::rng::{rng_from, Rng};

pub const LIFT_RETRY_CAP: usize = 10_000;

/// A simple `m`-lift of a base multigraph. Vertex `v` lies in fiber `v / m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedGraph {
    pub graph: SimpleGraph,
    pub base: Multigraph,
    pub sigma: Vec<usize>,
    pub m: usize,
}

impl LiftedGraph {
    pub fn k(&self) -> usize {
        self.base.n()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn fiber(&self, i: usize) -> std::ops::Range<usize> {
        i * self.m..(i + 1) * self.m
    }

    /// Fiber-constant extension of a base vector.
    pub fn lift_vector(&self, v: &[f64]) -> Vec<f64> {
        self.sigma.iter().map(|&i| v[i]).collect()
    }

    /// `n x k` fiber indicator matrix.
    pub fn indicators(&self) -> Matrix {
        Matrix::from_fn(self.n(), self.k(), |u, i| if self.sigma[u] == i { 1.0 } else { 0.0 })
    }

    /// Checks balanced fibers and that every block has the base multiplicity
    /// as its regular degree.
    pub fn check_invariants(&self) -> bool {
        let (k, m) = (self.k(), self.m);
        if self.sigma.len() != k * m {
            return false;
        }
        let mut sizes = vec![0usize; k];
        for &i in &self.sigma {
            sizes[i] += 1;
        }
        if sizes.iter().any(|&s| s != m) {
            return false;
        }
        let mut counts = vec![0u32; k];
        for u in 0..self.n() {
            counts.iter_mut().for_each(|c| *c = 0);
            for &w in self.graph.neighbors(u) {
                counts[self.sigma[w]] += 1;
            }
            let i = self.sigma[u];
            if (0..k).any(|j| counts[j] != self.base.mult(i, j)) {
                return false;
            }
        }
        true
    }
}

fn validate(h: &Multigraph, m: usize) -> Result<()> {
    if h.regular_degree().is_none() {
        return Err(Error::NotRegular);
    }
    if m == 0 {
        return Err(Error::InvalidParameter("fiber size must be positive".into()));
    }
    if h.has_loops() && m % 2 == 1 {
        return Err(Error::OddFiberWithLoops(m));
    }
    Ok(())
}

/// Edge multiset of one random lift: one uniform perfect matching inside the
/// fiber per loop, one uniform bijection between fibers per parallel edge.
fn lift_edges(h: &Multigraph, m: usize, rng: &mut Rng) -> Vec<(usize, usize)> {
    let k = h.n();
    let mut edges = Vec::with_capacity(h.half_edge_count() * m / 2);
    let mut perm: Vec<usize> = (0..m).collect();
    for i in 0..k {
        for _ in 0..h.loops(i) {
            perm.shuffle(rng);
            for pair in perm.chunks_exact(2) {
                edges.push((i * m + pair[0], i * m + pair[1]));
            }
        }
        for j in i + 1..k {
            for _ in 0..h.mult(i, j) {
                perm.shuffle(rng);
                for (a, &b) in perm.iter().enumerate() {
                    edges.push((i * m + a, j * m + b));
                }
            }
        }
    }
    edges
}

/// Uniformly random simple `m`-lift, by rejection of whole lifts.
pub fn random_lift(h: &Multigraph, m: usize, seed: u64) -> Result<LiftedGraph> {
    random_lift_capped(h, m, seed, LIFT_RETRY_CAP)
}

pub fn random_lift_capped(h: &Multigraph, m: usize, seed: u64, retry_cap: usize) -> Result<LiftedGraph> {
    validate(h, m)?;
    let n = h.n() * m;
    let mut rng = rng_from(seed);
    'attempt: for _ in 0..retry_cap {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in lift_edges(h, m, &mut rng) {
            if adj[u].contains(&v) {
                continue 'attempt;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        return Ok(LiftedGraph {
            graph: SimpleGraph::from_adjacency(adj)?,
            base: h.clone(),
            sigma: (0..n).map(|v| v / m).collect(),
            m,
        });
    }
    Err(Error::RetryCapExceeded(retry_cap))
}

/// One random lift without the simplicity requirement, as a multigraph
/// together with its fiber map. Meant for diagnostics.
pub fn random_multilift(h: &Multigraph, m: usize, seed: u64) -> Result<(Multigraph, Vec<usize>)> {
    validate(h, m)?;
    let n = h.n() * m;
    let mut rng = rng_from(seed);
    let mut mult = vec![0u32; n * n];
    for (u, v) in lift_edges(h, m, &mut rng) {
        if u == v {
            mult[u * n + u] += 1;
        } else {
            mult[u * n + v] += 1;
            mult[v * n + u] += 1;
        }
    }
    Ok((Multigraph::from_flat(n, mult)?, (0..n).map(|v| v / m).collect()))
}
