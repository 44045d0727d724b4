use num_rational::Rational64;
use rayon::prelude::*;

use super::{degree_sum, EdgeWeighted, ExactResult, Quantity, Witness};
use crate::certificates::hoffman_max_t_cut_value;
use crate::error::{Error, Result};
use crate::spectral::{nontrivial_extremes, RegularGraph};

pub const MAX_CUT2_N: usize = 28;
pub const MAX_CUTT_N: usize = 16;

/// Exact maximum `t`-cut with the lexicographically smallest optimal
/// labelling (vertex 0 labelled 0, labels introduced in increasing order).
pub fn max_t_cut_exact<G: EdgeWeighted + RegularGraph + ?Sized>(g: &G, t: usize) -> Result<ExactResult> {
    let n = EdgeWeighted::order(g);
    if t < 2 {
        return Err(Error::InvalidParameter(format!("t must be at least 2, got {t}")));
    }
    let cap = if t == 2 { MAX_CUT2_N } else { MAX_CUTT_N };
    if n > cap {
        return Err(Error::SizeCapExceeded(format!("max {t}-cut needs n <= {cap}, got {n}")));
    }
    let edges = g.weighted_edges();
    let mut nbrs: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(i, j, m) in &edges {
        if i != j {
            nbrs[i].push((j, m as i64));
            nbrs[j].push((i, m as i64));
        }
    }
    let (cut, labels) = if n <= 1 {
        (0, vec![0; n])
    } else if t == 2 {
        two_cut(&nbrs)
    } else {
        let target = g.common_degree().and_then(|_| nontrivial_extremes(g, false).ok()).map(|ex| {
            let d = g.common_degree().unwrap_or(0) as f64;
            hoffman_max_t_cut_value(d, ex.lambda_n, t) * degree_sum(&edges) as f64 / 2.0
        });
        let mut s = TCut { nbrs: &nbrs, t, best: -1, best_labels: vec![], target, labels: vec![0; n] };
        let remaining: i64 = edges.iter().filter(|e| e.0 != e.1).map(|e| e.2 as i64).sum();
        s.search(0, 0, 0, remaining);
        (s.best, s.best_labels)
    };
    Ok(ExactResult {
        quantity: Quantity::MaxTCut,
        value: Rational64::new(2 * cut, degree_sum(&edges).max(1)),
        witness: Witness::Labels(labels),
        t: Some(t),
        expansion: None,
        boundary: None,
        graph_fingerprint: g.fingerprint64(),
        notes: vec![],
    })
}

/// Gray-code sweep over the `2^(n-1)` labellings with vertex 0 fixed,
/// split into independent chunks by the labels of a few leading vertices.
fn two_cut(nbrs: &[Vec<(usize, i64)>]) -> (i64, Vec<usize>) {
    let n = nbrs.len();
    let free = n - 1;
    let p = free.min(4);
    let tail = free - p;
    let best = (0u64..1 << p)
        .into_par_iter()
        .map(|prefix| {
            let mut label = vec![0u8; n];
            for b in 0..p {
                label[1 + b] = ((prefix >> b) & 1) as u8;
            }
            let mut cut: i64 = 0;
            for u in 0..n {
                for &(v, m) in &nbrs[u] {
                    if u < v && label[u] != label[v] {
                        cut += m;
                    }
                }
            }
            // key orders labellings lexicographically (vertex 0 most significant)
            let mut key: u64 = (0..n).fold(0, |k, v| k | ((label[v] as u64) << (n - 1 - v)));
            let (mut best_cut, mut best_key) = (cut, key);
            for i in 1u64..1 << tail {
                let v = 1 + p + i.trailing_zeros() as usize;
                let mut delta = 0;
                for &(u, m) in &nbrs[v] {
                    delta += if label[u] == label[v] { m } else { -m };
                }
                label[v] ^= 1;
                key ^= 1 << (n - 1 - v);
                cut += delta;
                if cut > best_cut || (cut == best_cut && key < best_key) {
                    best_cut = cut;
                    best_key = key;
                }
            }
            (best_cut, best_key)
        })
        .reduce(|| (-1, u64::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let labels = (0..n).map(|v| ((best.1 >> (n - 1 - v)) & 1) as usize).collect();
    (best.0, labels)
}

struct TCut<'a> {
    nbrs: &'a [Vec<(usize, i64)>],
    t: usize,
    best: i64,
    best_labels: Vec<usize>,
    /// Hoffman bound in edge units; reaching it proves optimality.
    target: Option<f64>,
    labels: Vec<usize>,
}

impl TCut<'_> {
    /// Returns true once the search can stop.
    fn search(&mut self, v: usize, used: usize, cut: i64, remaining: i64) -> bool {
        let n = self.nbrs.len();
        if v == n {
            if cut > self.best {
                self.best = cut;
                self.best_labels = self.labels.clone();
                if let Some(t) = self.target {
                    return cut as f64 >= t - 1e-9;
                }
            }
            return false;
        }
        if cut + remaining <= self.best {
            return false;
        }
        // weight of edges from v back to already labelled vertices
        let back: i64 = self.nbrs[v].iter().filter(|&&(u, _)| u < v).map(|&(_, m)| m).sum();
        for c in 0..self.t.min(used + 1) {
            self.labels[v] = c;
            let gain: i64 = self.nbrs[v]
                .iter()
                .filter(|&&(u, _)| u < v && self.labels[u] != c)
                .map(|&(_, m)| m)
                .sum();
            let used2 = used.max(c + 1);
            if self.search(v + 1, used2, cut + gain, remaining - back) {
                return true;
            }
        }
        false
    }
}
