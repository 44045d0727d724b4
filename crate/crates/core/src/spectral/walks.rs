use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::linalg::Matrix;

pub const SA_DEFAULT_CAP: usize = 8;

pub fn self_avoiding_matrix(g: &SimpleGraph, s: usize) -> Result<Matrix> {
    self_avoiding_matrix_capped(g, s, SA_DEFAULT_CAP)
}

/// Entry `(u, v)` counts simple paths with `s` edges from `u` to `v`.
pub fn self_avoiding_matrix_capped(g: &SimpleGraph, s: usize, cap: usize) -> Result<Matrix> {
    if s > cap {
        return Err(Error::DepthCapExceeded { s, cap });
    }
    let n = g.n();
    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut counts = vec![0u64; n];
            let mut on_path = vec![false; n];
            on_path[u] = true;
            extend(g, u, s, &mut on_path, &mut counts);
            counts
        })
        .collect();
    Ok(Matrix::from_fn(n, n, |i, j| rows[i][j] as f64))
}

fn extend(g: &SimpleGraph, at: usize, left: usize, on_path: &mut [bool], counts: &mut [u64]) {
    if left == 0 {
        counts[at] += 1;
        return;
    }
    for &w in g.neighbors(at) {
        if !on_path[w] {
            on_path[w] = true;
            extend(g, w, left - 1, on_path, counts);
            on_path[w] = false;
        }
    }
}

/// Vertices within distance `l` of a cycle of length at most `c`.
pub fn bad_vertices(g: &SimpleGraph, l: usize, c: usize) -> Vec<usize> {
    let n = g.n();
    let mut bad = vec![false; n];
    if c >= 3 {
        let mut dist = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for (u, w) in g.edges() {
            // the edge lies on a short cycle iff w is reachable from u within
            // c - 1 steps without using the edge itself
            dist[u] = 0;
            touched.push(u);
            queue.push_back(u);
            let mut hit = false;
            while let Some(x) = queue.pop_front() {
                if dist[x] + 1 > c - 1 {
                    continue;
                }
                for &y in g.neighbors(x) {
                    if x == u && y == w {
                        continue;
                    }
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        touched.push(y);
                        if y == w {
                            hit = true;
                            break;
                        }
                        queue.push_back(y);
                    }
                }
                if hit {
                    break;
                }
            }
            queue.clear();
            for t in touched.drain(..) {
                dist[t] = usize::MAX;
            }
            if hit {
                bad[u] = true;
                bad[w] = true;
            }
        }
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| bad[v]).collect();
    for &v in &queue {
        dist[v] = 0;
    }
    while let Some(x) = queue.pop_front() {
        if dist[x] == l {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    (0..n).filter(|&v| dist[v] != usize::MAX).collect()
}
