use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{EdgeWeighted, ExactResult, ExpansionMode, Quantity, Witness};
use crate::error::{Error, Result};

pub const MAX_SET_SIZE: usize = 8;
pub const MAX_ALL_SUBSETS_N: usize = 20;

/// Whether the vertex boundary of `S` may contain members of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryConvention {
    /// Every vertex adjacent to some member of `S`, members included.
    #[default]
    Inclusive,
    /// Only non-members adjacent to `S`.
    Disjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionSearch {
    /// Connected candidate sets only (assumes a connected minimizer).
    #[default]
    Connected,
    /// Every subset; exact without assumptions, limited to small `n`.
    AllSubsets,
}

/// Minimum of `|boundary(S)| / |S|` over nonempty `S` with `|S| <= floor(epsilon n)`.
pub fn small_set_expansion_exact<G: EdgeWeighted + ?Sized>(
    g: &G,
    epsilon: f64,
    mode: ExpansionMode,
    search: ExpansionSearch,
    boundary: BoundaryConvention,
) -> Result<ExactResult> {
    let n = g.order();
    let smax = (epsilon * n as f64 + 1e-9).floor() as usize;
    if smax == 0 {
        return Err(Error::InvalidParameter(format!("floor(epsilon n) = 0 for epsilon={epsilon}, n={n}")));
    }
    let mut nbrs: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (i, j, m) in g.weighted_edges() {
        // a loop makes its vertex adjacent to itself, as its lift does within the fiber
        nbrs[i].push((j, m as i64));
        if i != j {
            nbrs[j].push((i, m as i64));
        }
    }
    let eval = Evaluator { nbrs: &nbrs, mode, boundary, member: vec![0; n], counted: vec![0; n], stamp: 0 };
    let mut best = Best { eval, ratio: None, set: vec![] };
    let mut notes = Vec::new();
    match search {
        ExpansionSearch::Connected => {
            if smax > MAX_SET_SIZE {
                return Err(Error::SizeCapExceeded(format!(
                    "connected enumeration needs floor(eps n) <= {MAX_SET_SIZE}, got {smax}"
                )));
            }
            notes.push("restricted to connected candidate sets".to_string());
            for v in 0..n {
                let ext: Vec<usize> = nbrs[v].iter().map(|e| e.0).filter(|&u| u > v).collect();
                esu(&nbrs, &mut vec![v], ext, v, smax, &mut best);
            }
        }
        ExpansionSearch::AllSubsets => {
            if n > MAX_ALL_SUBSETS_N {
                return Err(Error::SizeCapExceeded(format!(
                    "all-subsets search needs n <= {MAX_ALL_SUBSETS_N}, got {n}"
                )));
            }
            for mask in 1u32..1 << n {
                if mask.count_ones() as usize <= smax {
                    let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                    best.offer(&set);
                }
            }
        }
    }
    Ok(ExactResult {
        quantity: match mode {
            ExpansionMode::Vertex => Quantity::VertexExpansion,
            ExpansionMode::Edge => Quantity::EdgeExpansion,
        },
        value: best.ratio.expect("at least one candidate set"),
        witness: Witness::Set(best.set),
        t: None,
        expansion: Some(mode),
        boundary: (mode == ExpansionMode::Vertex).then_some(boundary),
        graph_fingerprint: g.fingerprint64(),
        notes,
    })
}

struct Evaluator<'a> {
    nbrs: &'a [Vec<(usize, i64)>],
    mode: ExpansionMode,
    boundary: BoundaryConvention,
    member: Vec<u32>,
    counted: Vec<u32>,
    stamp: u32,
}

impl Evaluator<'_> {
    fn ratio(&mut self, set: &[usize]) -> Rational64 {
        self.stamp += 1;
        let st = self.stamp;
        for &v in set {
            self.member[v] = st;
        }
        let mut num = 0i64;
        for &v in set {
            for &(u, m) in &self.nbrs[v] {
                let inside = self.member[u] == st;
                match self.mode {
                    ExpansionMode::Edge => {
                        if !inside {
                            num += m;
                        }
                    }
                    ExpansionMode::Vertex => {
                        if inside && self.boundary == BoundaryConvention::Disjoint {
                            continue;
                        }
                        if self.counted[u] != st {
                            self.counted[u] = st;
                            num += 1;
                        }
                    }
                }
            }
        }
        Rational64::new(num, set.len() as i64)
    }
}

struct Best<'a> {
    eval: Evaluator<'a>,
    ratio: Option<Rational64>,
    set: Vec<usize>,
}

impl Best<'_> {
    fn offer(&mut self, set: &[usize]) {
        let r = self.eval.ratio(set);
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let better = match self.ratio {
            None => true,
            Some(b) => r < b || (r == b && sorted < self.set),
        };
        if better {
            self.ratio = Some(r);
            self.set = sorted;
        }
    }
}

/// Enumerates each connected set with minimum vertex `v` exactly once.
fn esu(nbrs: &[Vec<(usize, i64)>], sub: &mut Vec<usize>, mut ext: Vec<usize>, v: usize, smax: usize, best: &mut Best<'_>) {
    best.offer(sub);
    if sub.len() == smax {
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &(u, _) in &nbrs[w] {
            if u > v
                && !sub.contains(&u)
                && !next.contains(&u)
                && u != w
                && !sub.iter().any(|&s| nbrs[s].iter().any(|e| e.0 == u))
            {
                next.push(u);
            }
        }
        sub.push(w);
        esu(nbrs, sub, next, v, smax, best);
        sub.pop();
    }
}
