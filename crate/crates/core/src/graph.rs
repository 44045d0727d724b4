//! Multigraph and simple-graph carriers, bipartitions and the graph metric.
//!
//! A loop at vertex `i` is stored in `mult[i][i]` and adds exactly one to the
//! degree of `i`; this is what makes loops lift to perfect matchings.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Symmetric nonnegative multiplicity matrix; the diagonal counts loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    mult: Vec<u32>,
}

impl Multigraph {
    pub fn new(mult: Vec<Vec<u32>>) -> Result<Self> {
        let n = mult.len();
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(n, flat)
    }

    pub fn from_flat(n: usize, mult: Vec<u32>) -> Result<Self> {
        if mult.len() != n * n {
            return Err(Error::SizeMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                mult.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if mult[i * n + j] != mult[j * n + i] {
                    return Err(Error::NotSymmetric(
                        (mult[i * n + j] as f64 - mult[j * n + i] as f64).abs(),
                    ));
                }
            }
        }
        Ok(Self { n, mult })
    }

    /// Single vertex carrying `loops` loops.
    pub fn bouquet(loops: u32) -> Self {
        Self { n: 1, mult: vec![loops] }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut mult = vec![1; n * n];
        for i in 0..n {
            mult[i * n + i] = 0;
        }
        Self { n, mult }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mult(&self, i: usize, j: usize) -> u32 {
        self.mult[i * self.n + j]
    }

    pub fn loops(&self, i: usize) -> u32 {
        self.mult(i, i)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.mult[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|&m| m as usize).sum()
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|i| self.loops(i) > 0)
    }

    /// Common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|i| self.degree(i) == d).then_some(d)
    }

    /// Sum of degrees: twice the edge count when loops are weighted one half,
    /// so an `m`-lift has exactly `m` times as many edges.
    pub fn half_edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum()
    }

    pub fn is_connected(&self) -> bool {
        connected(self.n, |u, out| {
            out.extend((0..self.n).filter(|&v| v != u && self.mult(u, v) > 0))
        })
    }

    pub fn adjacency_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.mult(i, j) as f64)
    }

    /// Two-coloring of the multigraph; `None` if it has a loop or odd cycle.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        if self.has_loops() {
            return None;
        }
        two_color(self.n, |u, out| {
            out.extend((0..self.n).filter(|&v| self.mult(u, v) > 0))
        })
    }

    pub fn from_simple(g: &SimpleGraph) -> Self {
        let n = g.n();
        let mut mult = vec![0; n * n];
        for u in 0..n {
            for &v in g.neighbors(u) {
                mult[u * n + v] = 1;
            }
        }
        Self { n, mult }
    }

    /// Relabels vertices so that old vertex `perm[new]` becomes `new`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut mult = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = self.mult(perm[a], perm[b]);
            }
        }
        Self { n, mult }
    }

    /// Stable 64-bit fingerprint of the multiplicity matrix.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ self.n as u64;
        for &m in &self.mult {
            h ^= m as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

/// Vertex degrees under the loop-adds-one convention.
pub fn degree_profile(g: &Multigraph) -> Vec<usize> {
    (0..g.n()).map(|i| g.degree(i)).collect()
}

/// Simple undirected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::SizeMismatch(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Parse(format!("loop at vertex {u} in a simple graph")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Self::from_adjacency(adj)
    }

    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Result<Self> {
        let n = adj.len();
        for (u, nb) in adj.iter_mut().enumerate() {
            nb.sort_unstable();
            if nb.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse(format!("parallel edge at vertex {u}")));
            }
            if nb.iter().any(|&v| v == u || v >= n) {
                return Err(Error::Parse(format!("bad neighbor list at vertex {u}")));
            }
        }
        for u in 0..n {
            for &v in &adj[u] {
                if adj[v].binary_search(&u).is_err() {
                    return Err(Error::NotSymmetric(1.0));
                }
            }
        }
        Ok(Self { adj })
    }

    /// Simple graph from a multigraph without loops or parallel edges.
    pub fn from_multigraph(h: &Multigraph) -> Result<Self> {
        let n = h.n();
        let mut adj = vec![Vec::new(); n];
        for (u, nb) in adj.iter_mut().enumerate() {
            for v in 0..n {
                match h.mult(u, v) {
                    0 => {}
                    1 if u != v => nb.push(v),
                    _ => {
                        return Err(Error::Parse(format!(
                            "multigraph has a loop or parallel edge at ({u},{v})"
                        )))
                    }
                }
            }
        }
        Ok(Self { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|nb| nb.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        connected(self.n(), |u, out| out.extend_from_slice(&self.adj[u]))
    }

    pub fn adjacency_matrix(&self) -> Matrix {
        let n = self.n();
        let mut a = Matrix::zeros(n, n);
        for u in 0..n {
            for &v in &self.adj[u] {
                a[(u, v)] = 1.0;
            }
        }
        a
    }

    /// `y = A x` for a vector `x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, nb) in self.adj.iter().enumerate() {
            y[u] = nb.iter().map(|&v| x[v]).sum();
        }
    }

    /// Relabels vertices so that old vertex `perm[new]` becomes `new`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let adj = (0..n)
            .map(|new| {
                let mut nb: Vec<usize> = self.adj[perm[new]].iter().map(|&v| inv[v]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Self { adj }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson::Simple {
            n: self.n(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

/// Balanced two-sided layout of a connected bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteLayout {
    /// Side containing the smallest vertex label, ascending.
    pub left: Vec<usize>,
    /// The other side, ascending.
    pub right: Vec<usize>,
    /// `perm[new] = old`: left vertices first, then right vertices.
    pub perm: Vec<usize>,
}

impl BipartiteLayout {
    /// `+1` on the left side and `-1` on the right side, in original labels.
    pub fn signs(&self) -> Vec<f64> {
        let n = self.left.len() + self.right.len();
        let mut s = vec![1.0; n];
        for &v in &self.right {
            s[v] = -1.0;
        }
        s
    }

    pub fn side_of(&self) -> Vec<u8> {
        let n = self.left.len() + self.right.len();
        let mut s = vec![0; n];
        for &v in &self.right {
            s[v] = 1;
        }
        s
    }

    /// Layout of the graph already arranged as `0..n/2 | n/2..n`.
    pub fn canonical(n: usize) -> Self {
        Self {
            left: (0..n / 2).collect(),
            right: (n / 2..n).collect(),
            perm: (0..n).collect(),
        }
    }
}

/// Unique balanced bipartition of a connected graph, or `None` if an odd
/// cycle exists.
pub fn find_bipartition(g: &SimpleGraph) -> Result<Option<BipartiteLayout>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let Some(color) = two_color(g.n(), |u, out| out.extend_from_slice(g.neighbors(u))) else {
        return Ok(None);
    };
    let first = color.first().copied().unwrap_or(0);
    let left: Vec<usize> = (0..g.n()).filter(|&v| color[v] == first).collect();
    let right: Vec<usize> = (0..g.n()).filter(|&v| color[v] != first).collect();
    if left.len() != right.len() {
        return Err(Error::UnbalancedBipartition { left: left.len(), right: right.len() });
    }
    let perm = left.iter().chain(right.iter()).copied().collect();
    Ok(Some(BipartiteLayout { left, right, perm }))
}

/// `|E(G1) △ E(G2)| / 2n` for `d`-regular simple graphs on the same vertex set.
pub fn graph_distance(g1: &SimpleGraph, g2: &SimpleGraph) -> Result<Ratio<u64>> {
    if g1.n() != g2.n() {
        return Err(Error::SizeMismatch(format!("{} vs {} vertices", g1.n(), g2.n())));
    }
    match (g1.regular_degree(), g2.regular_degree()) {
        (Some(a), Some(b)) if a == b => {}
        _ => return Err(Error::NotRegular),
    }
    let mut diff = 0u64;
    for u in 0..g1.n() {
        let (a, b) = (g1.neighbors(u), g2.neighbors(u));
        let common = sorted_intersection_len(a, b);
        diff += (a.len() - common + b.len() - common) as u64;
    }
    // every edge of the symmetric difference was seen from both endpoints
    Ok(Ratio::new(diff / 2, 2 * g1.n() as u64))
}

/// Kronecker double cover `[[0, M], [M, 0]]`.
pub fn double_cover(h: &Multigraph) -> Multigraph {
    let k = h.n();
    let n = 2 * k;
    let mut mult = vec![0; n * n];
    for i in 0..k {
        for j in 0..k {
            let m = h.mult(i, j);
            mult[i * n + (k + j)] = m;
            mult[(k + i) * n + j] = m;
        }
    }
    Multigraph { n, mult }
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn connected(n: usize, mut nbrs: impl FnMut(usize, &mut Vec<usize>)) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    let mut buf = Vec::new();
    while let Some(u) = queue.pop_front() {
        buf.clear();
        nbrs(u, &mut buf);
        for &v in &buf {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

fn two_color(n: usize, mut nbrs: impl FnMut(usize, &mut Vec<usize>)) -> Option<Vec<u8>> {
    let mut color = vec![u8::MAX; n];
    let mut buf = Vec::new();
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            buf.clear();
            nbrs(u, &mut buf);
            for &v in &buf {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

/// On-disk JSON graph formats.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphJson {
    Multi { n: usize, mult: Vec<Vec<u32>> },
    Simple { n: usize, edges: Vec<[usize; 2]> },
}

impl GraphJson {
    pub fn into_multigraph(self) -> Result<Multigraph> {
        match self {
            GraphJson::Multi { n, mult } => {
                if mult.len() != n {
                    return Err(Error::SizeMismatch(format!("n = {n} but {} rows", mult.len())));
                }
                Multigraph::new(mult)
            }
            GraphJson::Simple { .. } => Ok(Multigraph::from_simple(&self.into_simple()?)),
        }
    }

    pub fn into_simple(self) -> Result<SimpleGraph> {
        match self {
            GraphJson::Simple { n, edges } => {
                let e: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
                SimpleGraph::from_edges(n, &e)
            }
            GraphJson::Multi { .. } => SimpleGraph::from_multigraph(&self.into_multigraph()?),
        }
    }
}

impl From<&Multigraph> for GraphJson {
    fn from(h: &Multigraph) -> Self {
        GraphJson::Multi { n: h.n(), mult: h.rows() }
    }
}

impl From<&SimpleGraph> for GraphJson {
    fn from(g: &SimpleGraph) -> Self {
        g.to_json()
    }
}
