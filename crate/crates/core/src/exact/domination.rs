use num_rational::Rational64;

use super::{EdgeWeighted, ExactResult, Quantity, Witness};
use crate::error::{Error, Result};

pub const MAX_DOMINATION_N: usize = 30;

/// Exact normalized domination number by set-cover branching: the first
/// undominated vertex must be covered by one of its closed neighbors.
pub fn domination_exact<G: EdgeWeighted + ?Sized>(g: &G) -> Result<ExactResult> {
    let n = g.order();
    if n > MAX_DOMINATION_N {
        return Err(Error::SizeCapExceeded(format!("domination needs n <= {MAX_DOMINATION_N}, got {n}")));
    }
    let mut closed: Vec<u32> = (0..n).map(|v| 1 << v).collect();
    for (i, j, _) in g.weighted_edges() {
        closed[i] |= 1 << j;
        closed[j] |= 1 << i;
    }
    let all: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut s = Search {
        closed: &closed,
        widest: closed.iter().map(|m| m.count_ones()).max().unwrap_or(1),
        best: all.count_ones(),
        best_set: all,
        all,
    };
    s.go(0, 0);
    let set = (0..n).filter(|&v| s.best_set >> v & 1 == 1).collect();
    Ok(ExactResult {
        quantity: Quantity::Domination,
        value: Rational64::new(s.best as i64, n.max(1) as i64),
        witness: Witness::Set(set),
        t: None,
        expansion: None,
        boundary: None,
        graph_fingerprint: g.fingerprint64(),
        notes: vec![],
    })
}

struct Search<'a> {
    closed: &'a [u32],
    widest: u32,
    best: u32,
    best_set: u32,
    all: u32,
}

impl Search<'_> {
    fn go(&mut self, chosen: u32, dominated: u32) {
        let size = chosen.count_ones();
        let open = self.all & !dominated;
        if open == 0 {
            if size < self.best {
                self.best = size;
                self.best_set = chosen;
            }
            return;
        }
        if size + open.count_ones().div_ceil(self.widest) >= self.best {
            return;
        }
        let u = open.trailing_zeros() as usize;
        let mut cover = self.closed[u];
        while cover != 0 {
            let w = cover.trailing_zeros() as usize;
            cover &= cover - 1;
            self.go(chosen | 1 << w, dominated | self.closed[w]);
        }
    }
}
