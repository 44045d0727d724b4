//! Exact optimizers for small graphs, witness evaluators, and the pushing of
//! base witnesses through the fibers of a lift.
//!
//! Normalizations follow the multigraph conventions: a loop counts as half
//! an edge, so a `d`-regular base on `k` vertices has `dk/2` edges.

mod chromatic;
mod cut;
mod domination;
mod expansion;
mod independence;
mod lift_assign;

pub use chromatic::{chromatic_exact, MAX_CHROMATIC_N};
pub use cut::{max_t_cut_exact, MAX_CUT2_N, MAX_CUTT_N};
pub use domination::{domination_exact, MAX_DOMINATION_N};
pub use expansion::{
    small_set_expansion_exact, BoundaryConvention, ExpansionSearch, MAX_ALL_SUBSETS_N, MAX_SET_SIZE,
};
pub use independence::{independence_exact, modified_independence, MAX_INDEPENDENCE_N};
pub use lift_assign::{
    lift_assignment, repair_dominating, repair_independent, LiftedAssignment,
};

use num_rational::Rational64;
use serde::{Serialize, Serializer};

pub use crate::certificates::{ExpansionMode, Quantity};
use crate::graph::{Multigraph, SimpleGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Label per vertex (cuts, colorings).
    Labels(Vec<usize>),
    /// Sorted vertex set.
    Set(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactResult {
    pub quantity: Quantity,
    #[serde(serialize_with = "ser_ratio")]
    pub value: Rational64,
    pub witness: Witness,
    /// Parts (t) for cuts, expansion mode for expansion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryConvention>,
    /// Fingerprint of the graph the result was computed on.
    pub graph_fingerprint: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ExactResult {
    pub fn value_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

pub(crate) fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Weighted edge view shared by multigraphs and simple graphs.
pub trait EdgeWeighted {
    fn order(&self) -> usize;
    /// `(i, j, multiplicity)` with `i <= j`; `i == j` are loops.
    fn weighted_edges(&self) -> Vec<(usize, usize, u32)>;
    fn fingerprint64(&self) -> u64;
}

impl EdgeWeighted for Multigraph {
    fn order(&self) -> usize {
        self.n()
    }
    fn weighted_edges(&self) -> Vec<(usize, usize, u32)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let m = self.mult(i, j);
                if m > 0 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }
    fn fingerprint64(&self) -> u64 {
        self.fingerprint()
    }
}

impl EdgeWeighted for SimpleGraph {
    fn order(&self) -> usize {
        self.n()
    }
    fn weighted_edges(&self) -> Vec<(usize, usize, u32)> {
        self.edges().into_iter().map(|(u, v)| (u, v, 1)).collect()
    }
    fn fingerprint64(&self) -> u64 {
        Multigraph::from_simple(self).fingerprint()
    }
}

/// Twice the edge count with loops weighted one half (the sum of degrees).
pub(crate) fn degree_sum(edges: &[(usize, usize, u32)]) -> i64 {
    edges.iter().map(|&(i, j, m)| if i == j { m as i64 } else { 2 * m as i64 }).sum()
}

/// Fraction of edges (loops weighted one half) whose endpoints get different labels.
pub fn cut_fraction<G: EdgeWeighted + ?Sized>(g: &G, labels: &[usize]) -> Rational64 {
    let edges = g.weighted_edges();
    let cut: i64 = edges
        .iter()
        .filter(|&&(i, j, _)| labels[i] != labels[j])
        .map(|&(_, _, m)| m as i64)
        .sum();
    Rational64::new(2 * cut, degree_sum(&edges).max(1))
}

/// Proper coloring: no edge (and no loop) is monochromatic.
pub fn is_proper_coloring<G: EdgeWeighted + ?Sized>(g: &G, labels: &[usize]) -> bool {
    g.weighted_edges().iter().all(|&(i, j, _)| i != j && labels[i] != labels[j])
}

/// No two members adjacent and no member carries a loop.
pub fn is_independent<G: EdgeWeighted + ?Sized>(g: &G, set: &[usize]) -> bool {
    let mut inside = vec![false; g.order()];
    set.iter().for_each(|&v| inside[v] = true);
    g.weighted_edges().iter().all(|&(i, j, _)| !(inside[i] && inside[j]))
}

pub fn is_dominating<G: EdgeWeighted + ?Sized>(g: &G, set: &[usize]) -> bool {
    let n = g.order();
    let mut inside = vec![false; n];
    set.iter().for_each(|&v| inside[v] = true);
    let mut dom = inside.clone();
    for (i, j, _) in g.weighted_edges() {
        if inside[i] {
            dom[j] = true;
        }
        if inside[j] {
            dom[i] = true;
        }
    }
    dom.into_iter().all(|x| x)
}

/// `|boundary(S)| / |S|` for a nonempty set.
pub fn expansion_ratio<G: EdgeWeighted + ?Sized>(
    g: &G,
    set: &[usize],
    mode: ExpansionMode,
    boundary: BoundaryConvention,
) -> Rational64 {
    let n = g.order();
    let mut inside = vec![false; n];
    set.iter().for_each(|&v| inside[v] = true);
    let edges = g.weighted_edges();
    let num = match mode {
        ExpansionMode::Edge => edges
            .iter()
            .filter(|&&(i, j, _)| inside[i] != inside[j])
            .map(|&(_, _, m)| m as i64)
            .sum(),
        ExpansionMode::Vertex => {
            let mut nb = vec![false; n];
            for &(i, j, _) in &edges {
                if inside[i] {
                    nb[j] = true;
                }
                if inside[j] {
                    nb[i] = true;
                }
            }
            (0..n)
                .filter(|&v| nb[v] && (boundary == BoundaryConvention::Inclusive || !inside[v]))
                .count() as i64
        }
    };
    Rational64::new(num, set.len().max(1) as i64)
}
