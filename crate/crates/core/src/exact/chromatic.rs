use num_rational::Rational64;

use super::{EdgeWeighted, ExactResult, Quantity, Witness};
use crate::error::{Error, Result};

pub const MAX_CHROMATIC_N: usize = 20;

/// Exact chromatic number, trying `k = 1, 2, ...` with backtracking in
/// vertex order (new colors introduced in increasing order).
pub fn chromatic_exact<G: EdgeWeighted + ?Sized>(g: &G) -> Result<ExactResult> {
    let n = g.order();
    if n > MAX_CHROMATIC_N {
        return Err(Error::SizeCapExceeded(format!("chromatic needs n <= {MAX_CHROMATIC_N}, got {n}")));
    }
    let mut adj = vec![0u32; n];
    for (i, j, _) in g.weighted_edges() {
        if i == j {
            return Err(Error::LoopedVertex(i));
        }
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let mut colors = vec![0usize; n];
    let mut k = 1;
    while n > 0 && !color(&adj, k, 0, 0, &mut colors) {
        k += 1;
    }
    Ok(ExactResult {
        quantity: Quantity::Chromatic,
        value: Rational64::from_integer(k as i64),
        witness: Witness::Labels(colors),
        t: None,
        expansion: None,
        boundary: None,
        graph_fingerprint: g.fingerprint64(),
        notes: vec![],
    })
}

fn color(adj: &[u32], k: usize, v: usize, used: usize, colors: &mut [usize]) -> bool {
    if v == adj.len() {
        return true;
    }
    for c in 0..k.min(used + 1) {
        let clash = (0..v).any(|u| adj[v] >> u & 1 == 1 && colors[u] == c);
        if !clash {
            colors[v] = c;
            if color(adj, k, v + 1, used.max(c + 1), colors) {
                return true;
            }
        }
    }
    false
}
