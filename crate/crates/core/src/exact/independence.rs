use num_rational::Rational64;

use super::{EdgeWeighted, ExactResult, Quantity, Witness};
use crate::error::{Error, Result};
use crate::graph::Multigraph;

pub const MAX_INDEPENDENCE_N: usize = 60;

/// Exact normalized independence number. Vertices carrying loops are
/// adjacent to themselves and never belong to an independent set.
pub fn independence_exact<G: EdgeWeighted + ?Sized>(g: &G) -> Result<ExactResult> {
    let n = g.order();
    let edges = g.weighted_edges();
    let mut w = vec![1u32; n];
    for &(i, j, _) in &edges {
        if i == j {
            w[i] = 0;
        }
    }
    let (total, set) = solve(n, &edges, &w)?;
    Ok(ExactResult {
        quantity: Quantity::Independence,
        value: Rational64::new(total as i64, n.max(1) as i64),
        witness: Witness::Set(set),
        t: None,
        expansion: None,
        boundary: None,
        graph_fingerprint: g.fingerprint64(),
        notes: vec![],
    })
}

/// Modified normalized independence number of a multigraph: independent in
/// the graph with loops deleted, each member weighted 1, 1/2 or 0 according
/// to whether it carries 0, 1 or at least 2 loops, normalized by `k`.
pub fn modified_independence(h: &Multigraph) -> Result<ExactResult> {
    let k = h.n();
    let edges = h.weighted_edges();
    // doubled weights
    let w: Vec<u32> = (0..k)
        .map(|i| match h.loops(i) {
            0 => 2,
            1 => 1,
            _ => 0,
        })
        .collect();
    let (total, set) = solve(k, &edges, &w)?;
    Ok(ExactResult {
        quantity: Quantity::ModifiedIndependence,
        value: Rational64::new(total as i64, 2 * k.max(1) as i64),
        witness: Witness::Set(set),
        t: None,
        expansion: None,
        boundary: None,
        graph_fingerprint: h.fingerprint(),
        notes: vec![],
    })
}

/// Maximum-weight independent set (loops ignored) by branch and bound on
/// bitmasks. Branches on the smallest candidate, inclusion first, and keeps
/// only strict improvements, so the witness is the lexicographically
/// smallest optimum among positive-weight vertices.
fn solve(n: usize, edges: &[(usize, usize, u32)], w: &[u32]) -> Result<(u32, Vec<usize>)> {
    if n > MAX_INDEPENDENCE_N {
        return Err(Error::SizeCapExceeded(format!(
            "independence needs n <= {MAX_INDEPENDENCE_N}, got {n}"
        )));
    }
    let mut adj = vec![0u64; n];
    for &(i, j, _) in edges {
        if i != j {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
    }
    let cand: u64 = (0..n).filter(|&v| w[v] > 0).fold(0, |m, v| m | 1 << v);
    let mut s = Search { adj: &adj, w, best: -1, best_set: 0 };
    s.go(cand, 0, 0);
    let set = (0..n).filter(|&v| s.best_set >> v & 1 == 1).collect();
    Ok((s.best.max(0) as u32, set))
}

struct Search<'a> {
    adj: &'a [u64],
    w: &'a [u32],
    best: i64,
    best_set: u64,
}

impl Search<'_> {
    fn weight(&self, mut m: u64) -> i64 {
        let mut s = 0;
        while m != 0 {
            s += self.w[m.trailing_zeros() as usize] as i64;
            m &= m - 1;
        }
        s
    }

    fn go(&mut self, cand: u64, chosen: u64, value: i64) {
        if cand == 0 {
            if value > self.best {
                self.best = value;
                self.best_set = chosen;
            }
            return;
        }
        if value + self.weight(cand) <= self.best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        self.go(cand & !bit & !self.adj[v], chosen | bit, value + self.w[v] as i64);
        if self.adj[v] & cand != 0 {
            self.go(cand & !bit, chosen, value);
        }
    }
}
