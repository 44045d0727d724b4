use std::collections::HashSet;

use num_rational::Rational64;
use serde::Serialize;

use super::{
    cut_fraction, expansion_ratio, is_dominating, is_independent, is_proper_coloring, EdgeWeighted,
    ExactResult, Quantity, Witness,
};
use crate::ensembles::LiftedGraph;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// A base witness pushed through the fibers of a lift and re-evaluated there.
#[derive(Debug, Clone, Serialize)]
pub struct LiftedAssignment {
    pub quantity: Quantity,
    #[serde(serialize_with = "super::ser_ratio")]
    pub base_value: Rational64,
    #[serde(serialize_with = "super::ser_ratio")]
    pub lifted_value: Rational64,
    /// Feasibility of the lifted witness (proper coloring, independence, domination).
    pub valid: bool,
    pub witness: Witness,
}

pub fn lift_assignment(base_result: &ExactResult, lift: &LiftedGraph) -> Result<LiftedAssignment> {
    if base_result.graph_fingerprint != lift.base.fingerprint() {
        return Err(Error::BaseMismatch);
    }
    let g = &lift.graph;
    let n = g.n();
    let labels_of = |w: &Witness| -> Result<Vec<usize>> {
        match w {
            Witness::Labels(l) if l.len() == lift.k() => Ok(lift.sigma.iter().map(|&i| l[i]).collect()),
            _ => Err(Error::BaseMismatch),
        }
    };
    let fibers_of = |w: &Witness| -> Result<Vec<usize>> {
        match w {
            Witness::Set(s) => Ok(s.iter().flat_map(|&i| lift.fiber(i)).collect()),
            _ => Err(Error::BaseMismatch),
        }
    };
    let (lifted_value, valid, witness) = match base_result.quantity {
        Quantity::MaxTCut => {
            let l = labels_of(&base_result.witness)?;
            (cut_fraction(g, &l), true, Witness::Labels(l))
        }
        Quantity::Chromatic => {
            let l = labels_of(&base_result.witness)?;
            let colors = l.iter().collect::<HashSet<_>>().len() as i64;
            let ok = is_proper_coloring(g, &l);
            (Rational64::from_integer(colors), ok, Witness::Labels(l))
        }
        Quantity::Independence => {
            let s = fibers_of(&base_result.witness)?;
            let ok = is_independent(g, &s);
            (Rational64::new(s.len() as i64, n as i64), ok, Witness::Set(s))
        }
        Quantity::ModifiedIndependence => {
            let Witness::Set(base_set) = &base_result.witness else {
                return Err(Error::BaseMismatch);
            };
            let mut s = Vec::new();
            for &i in base_set {
                match lift.base.loops(i) {
                    0 => s.extend(lift.fiber(i)),
                    // the single loop lifts to a perfect matching of the fiber;
                    // keep the smaller end of each matching edge
                    1 => s.extend(lift.fiber(i).filter(|&u| {
                        g.neighbors(u).iter().any(|&w| lift.sigma[w] == i && w > u)
                    })),
                    _ => {}
                }
            }
            let ok = is_independent(g, &s);
            (Rational64::new(s.len() as i64, n as i64), ok, Witness::Set(s))
        }
        Quantity::Domination => {
            let s = fibers_of(&base_result.witness)?;
            let ok = is_dominating(g, &s);
            (Rational64::new(s.len() as i64, n as i64), ok, Witness::Set(s))
        }
        Quantity::VertexExpansion | Quantity::EdgeExpansion => {
            let s = fibers_of(&base_result.witness)?;
            let mode = base_result.expansion.ok_or(Error::BaseMismatch)?;
            let r = expansion_ratio(g, &s, mode, base_result.boundary.unwrap_or_default());
            (r, true, Witness::Set(s))
        }
    };
    Ok(LiftedAssignment {
        quantity: base_result.quantity,
        base_value: base_result.value,
        lifted_value,
        valid,
        witness,
    })
}

/// Drops the larger endpoint of every edge inside `set`.
pub fn repair_independent(g: &SimpleGraph, set: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.n()];
    set.iter().for_each(|&v| inside[v] = true);
    for (u, v, _) in g.weighted_edges() {
        if inside[u] && inside[v] {
            inside[u.max(v)] = false;
        }
    }
    (0..g.n()).filter(|&v| inside[v]).collect()
}

/// Adds every vertex left undominated by `set`.
pub fn repair_dominating(g: &SimpleGraph, set: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut inside = vec![false; n];
    set.iter().for_each(|&v| inside[v] = true);
    let mut dom = inside.clone();
    for (u, &inn) in inside.iter().enumerate() {
        if inn {
            g.neighbors(u).iter().for_each(|&w| dom[w] = true);
        }
    }
    (0..n).filter(|&v| inside[v] || !dom[v]).collect()
}
