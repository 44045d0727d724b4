use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Multigraph, SimpleGraph};

pub const MAX_PLG_VERTICES: usize = 8;
pub const MAX_PLG_EDGES: usize = 8;

/// A small graph `alpha` with labels `tau` on the distinguished vertices.
/// In bipartite mode `sides` fixes the bipartition `(V_1, V_2)` of `alpha`;
/// labels below `k/2` belong to the first side of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartiallyLabelledGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub labels: Vec<Option<usize>>,
    pub sides: Option<Vec<u8>>,
}

impl PartiallyLabelledGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, labels: Vec<Option<usize>>) -> Result<Self> {
        if vertices > MAX_PLG_VERTICES || edges.len() > MAX_PLG_EDGES {
            return Err(Error::SizeCapExceeded(format!(
                "partially labelled graphs are limited to {MAX_PLG_VERTICES} vertices and {MAX_PLG_EDGES} edges"
            )));
        }
        if labels.len() != vertices {
            return Err(Error::SizeMismatch(format!("{} labels for {vertices} vertices", labels.len())));
        }
        let mut seen = Vec::new();
        for &(u, v) in &edges {
            if u == v || u >= vertices || v >= vertices {
                return Err(Error::InvalidParameter(format!("bad edge ({u}, {v})")));
            }
            let key = (u.min(v), u.max(v));
            if seen.contains(&key) {
                return Err(Error::InvalidParameter(format!("repeated edge ({u}, {v})")));
            }
            seen.push(key);
        }
        Ok(PartiallyLabelledGraph { vertices, edges, labels, sides: None })
    }

    /// Path with `s` edges whose endpoints carry labels `i` and `j`.
    pub fn path(s: usize, i: usize, j: usize) -> Result<Self> {
        if s == 0 {
            if i != j {
                return Err(Error::InvalidParameter("a 0-path has a single endpoint".into()));
            }
            return Self::new(1, vec![], vec![Some(i)]);
        }
        let mut labels = vec![None; s + 1];
        labels[0] = Some(i);
        labels[s] = Some(j);
        Self::new(s + 1, (0..s).map(|t| (t, t + 1)).collect(), labels)
    }

    pub fn edgeless(labels: Vec<Option<usize>>) -> Result<Self> {
        Self::new(labels.len(), vec![], labels)
    }

    /// Bipartite mode with the 2-coloring that puts the smallest vertex of
    /// every component on side 0.
    pub fn into_bipartite(mut self) -> Result<Self> {
        let adj = self.adjacency();
        let mut side: Vec<Option<u8>> = vec![None; self.vertices];
        for root in 0..self.vertices {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].expect("visited");
                for &w in &adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(1 - su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return Err(Error::NotBipartite),
                        _ => {}
                    }
                }
            }
        }
        self.sides = Some(side.into_iter().map(|s| s.expect("colored")).collect());
        Ok(self)
    }

    pub fn with_sides(mut self, sides: Vec<u8>) -> Result<Self> {
        if sides.len() != self.vertices || sides.iter().any(|&s| s > 1) {
            return Err(Error::InvalidParameter("sides must be 0/1 per vertex".into()));
        }
        if self.edges.iter().any(|&(u, v)| sides[u] == sides[v]) {
            return Err(Error::NotBipartite);
        }
        self.sides = Some(sides);
        Ok(self)
    }

    /// Disjoint union, relabelling the vertices of `other` after those of `self`.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let off = self.vertices;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().copied());
        let mut out = Self::new(self.vertices + other.vertices, edges, labels)?;
        if let (Some(a), Some(b)) = (&self.sides, &other.sides) {
            out.sides = Some(a.iter().chain(b).copied().collect());
        }
        Ok(out)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn distinguished(&self) -> Vec<usize> {
        (0..self.vertices).filter(|&v| self.labels[v].is_some()).collect()
    }

    /// `|V(alpha)| - |E(alpha)|`.
    pub fn zeta(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64
    }

    pub fn components(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut count = 0;
        for r in 0..self.vertices {
            if seen[r] {
                continue;
            }
            count += 1;
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_forest(&self) -> bool {
        self.zeta() == self.components() as i64
    }

    /// A forest whose leaves are all distinguished.
    pub fn is_pruned(&self) -> bool {
        let adj = self.adjacency();
        self.is_forest() && (0..self.vertices).all(|v| adj[v].len() != 1 || self.labels[v].is_some())
    }

    fn check_labels(&self, k: usize) -> Result<()> {
        if let Some(l) = self.labels.iter().flatten().find(|&&l| l >= k) {
            return Err(Error::InvalidParameter(format!("label {l} out of range for k = {k}")));
        }
        if self.sides.is_some() && k % 2 == 1 {
            return Err(Error::InvalidParameter("bipartite labels need even k".into()));
        }
        Ok(())
    }

    /// Orientations (0 = as given, 1 = swapped) for which every label lies
    /// on the base side matching its vertex; a single `0` outside bipartite mode.
    fn orientations(&self, k: usize) -> Vec<u8> {
        match &self.sides {
            None => vec![0],
            Some(sides) => (0..2u8)
                .filter(|&o| {
                    (0..self.vertices).all(|v| self.labels[v].map_or(true, |l| label_side(l, k) == sides[v] ^ o))
                })
                .collect(),
        }
    }

    /// Non-isolated vertices, each after one of its neighbors unless it
    /// starts a component; labelled vertices start components first.
    fn search_order(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut order = Vec::new();
        let mut parent = Vec::new();
        let mut roots: Vec<usize> = self.distinguished();
        roots.extend((0..self.vertices).filter(|&v| self.labels[v].is_none()));
        for r in roots {
            if seen[r] || adj[r].is_empty() {
                continue;
            }
            seen[r] = true;
            order.push(r);
            parent.push(None);
            let mut queue = VecDeque::from([r]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                        parent.push(Some(u));
                        queue.push_back(w);
                    }
                }
            }
        }
        (order, parent)
    }
}

fn label_side(label: usize, k: usize) -> u8 {
    u8::from(label >= k / 2)
}

fn falling(x: i128, r: usize) -> i128 {
    (0..r as i128).map(|t| x - t).product()
}

fn falling_big(x: i128, r: usize) -> BigInt {
    (0..r as i128).fold(BigInt::one(), |acc, t| acc * BigInt::from(x - t))
}

/// Number of occurrences (injective homomorphisms agreeing on labels) of
/// `plg` in the labelled graph `(g, sigma)`. In bipartite mode `g_sides`
/// gives the side of each vertex of `g` and the injection must send
/// `V_1(alpha)` and `V_2(alpha)` to opposite sides, in either orientation.
pub fn count_occurrences(
    plg: &PartiallyLabelledGraph,
    g: &SimpleGraph,
    sigma: &[usize],
    k: usize,
    g_sides: Option<&[u8]>,
) -> Result<u128> {
    let n = g.n();
    if sigma.len() != n {
        return Err(Error::SizeMismatch(format!("{} labels for {n} vertices", sigma.len())));
    }
    plg.check_labels(k)?;
    let bip = plg.sides.is_some();
    let gs: Vec<u8> = match (bip, g_sides) {
        (false, _) => vec![0; n],
        (true, Some(s)) if s.len() == n => s.to_vec(),
        (true, Some(_)) => return Err(Error::SizeMismatch("side vector length".into())),
        (true, None) => return Err(Error::LayoutMissing),
    };
    let a_sides = plg.sides.clone().unwrap_or_else(|| vec![0; plg.vertices]);
    let (order, parent) = plg.search_order();
    let adj = plg.adjacency();
    let mut pos = vec![usize::MAX; plg.vertices];
    for (t, &v) in order.iter().enumerate() {
        pos[v] = t;
    }
    // (label, side) class sizes of g
    let mut class = vec![[0i128; 2]; k];
    let mut side_total = [0i128; 2];
    for u in 0..n {
        if sigma[u] >= k {
            return Err(Error::InvalidParameter(format!("sigma({u}) = {} out of range", sigma[u])));
        }
        class[sigma[u]][gs[u] as usize] += 1;
        side_total[gs[u] as usize] += 1;
    }
    let orientations: Vec<u8> = if bip { vec![0, 1] } else { vec![0] };
    let mut total: u128 = 0;
    for o in orientations {
        let want: Vec<u8> = a_sides.iter().map(|&s| s ^ o).collect();
        let mut iso_lab = vec![[0usize; 2]; k];
        let mut iso_free = [0usize; 2];
        for v in (0..plg.vertices).filter(|&v| adj[v].is_empty()) {
            match plg.labels[v] {
                Some(l) => iso_lab[l][want[v] as usize] += 1,
                None => iso_free[want[v] as usize] += 1,
            }
        }
        let mut st = Occ {
            g,
            sigma,
            gs: &gs,
            plg,
            adj: &adj,
            order: &order,
            parent: &parent,
            pos: &pos,
            want: &want,
            phi: vec![usize::MAX; plg.vertices],
            used: vec![false; n],
            used_class: vec![[0i128; 2]; k],
            used_side: [0i128; 2],
            class: &class,
            side_total,
            iso_lab: &iso_lab,
            iso_free,
            total: 0,
        };
        st.go(0);
        total += st.total;
    }
    Ok(total)
}

struct Occ<'a> {
    g: &'a SimpleGraph,
    sigma: &'a [usize],
    gs: &'a [u8],
    plg: &'a PartiallyLabelledGraph,
    adj: &'a [Vec<usize>],
    order: &'a [usize],
    parent: &'a [Option<usize>],
    pos: &'a [usize],
    want: &'a [u8],
    phi: Vec<usize>,
    used: Vec<bool>,
    used_class: Vec<[i128; 2]>,
    used_side: [i128; 2],
    class: &'a [[i128; 2]],
    side_total: [i128; 2],
    iso_lab: &'a [[usize; 2]],
    iso_free: [usize; 2],
    total: u128,
}

impl Occ<'_> {
    fn isolated_ways(&self) -> u128 {
        let mut ways: i128 = 1;
        let mut placed = [0i128; 2];
        for (l, counts) in self.iso_lab.iter().enumerate() {
            for t in 0..2 {
                if counts[t] > 0 {
                    ways *= falling(self.class[l][t] - self.used_class[l][t], counts[t]);
                    placed[t] += counts[t] as i128;
                    if ways <= 0 {
                        return 0;
                    }
                }
            }
        }
        for (t, &p) in placed.iter().enumerate() {
            ways *= falling(self.side_total[t] - self.used_side[t] - p, self.iso_free[t]);
        }
        ways.max(0) as u128
    }

    fn fits(&self, v: usize, u: usize) -> bool {
        !self.used[u]
            && self.gs[u] == self.want[v]
            && self.plg.labels[v].map_or(true, |l| self.sigma[u] == l)
            && self.adj[v]
                .iter()
                .all(|&w| self.pos[w] == usize::MAX || self.phi[w] == usize::MAX || self.g.has_edge(self.phi[w], u))
    }

    fn go(&mut self, t: usize) {
        if t == self.order.len() {
            self.total += self.isolated_ways();
            return;
        }
        let v = self.order[t];
        let cands: Vec<usize> = match self.parent[t] {
            Some(p) => self.g.neighbors(self.phi[p]).to_vec(),
            None => (0..self.g.n()).collect(),
        };
        for u in cands {
            if self.fits(v, u) {
                self.phi[v] = u;
                self.used[u] = true;
                self.used_class[self.sigma[u]][self.gs[u] as usize] += 1;
                self.used_side[self.gs[u] as usize] += 1;
                self.go(t + 1);
                self.used_side[self.gs[u] as usize] -= 1;
                self.used_class[self.sigma[u]][self.gs[u] as usize] -= 1;
                self.used[u] = false;
                self.phi[v] = usize::MAX;
            }
        }
    }
}

/// The falling-factorial weight `(M)^{(alpha,S)}_tau`: a sum over
/// extensions of `tau` to all of `alpha` (partition-respecting in either
/// orientation in bipartite mode) of
/// `prod_v prod_i (M_{tau(v),i})_{deg_i(v)} / prod_{uv} M_{tau(u),tau(v)}`.
/// Extensions using an edge with multiplicity 0 contribute 0.
pub fn m_weight(plg: &PartiallyLabelledGraph, m: &Multigraph) -> Result<BigRational> {
    let k = m.n();
    plg.check_labels(k)?;
    if plg.vertices == 0 {
        return Ok(BigRational::one());
    }
    let adj = plg.adjacency();
    let (order, _) = plg.search_order();
    let a_sides = plg.sides.clone().unwrap_or_else(|| vec![0; plg.vertices]);
    let orientations: Vec<u8> = if plg.sides.is_some() { vec![0, 1] } else { vec![0] };
    let mut total = BigRational::zero();
    for o in orientations {
        let allowed = |v: usize, l: usize| plg.sides.is_none() || label_side(l, k) == a_sides[v] ^ o;
        if plg.labels.iter().enumerate().any(|(v, l)| l.is_some_and(|l| !allowed(v, l))) {
            continue;
        }
        // isolated unlabelled vertices contribute one factor per admissible label
        let mut free_factor = BigInt::one();
        for v in (0..plg.vertices).filter(|&v| adj[v].is_empty() && plg.labels[v].is_none()) {
            free_factor *= BigInt::from((0..k).filter(|&l| allowed(v, l)).count());
        }
        if free_factor.is_zero() {
            continue;
        }
        let mut tau: Vec<Option<usize>> = plg.labels.clone();
        let mut sum = BigRational::zero();
        let mut st = Weight { m, k, adj: &adj, order: &order, allowed: &allowed, sum: &mut sum };
        st.go(0, &mut tau);
        total += sum * BigRational::from_integer(free_factor);
    }
    Ok(total)
}

struct Weight<'a, F: Fn(usize, usize) -> bool> {
    m: &'a Multigraph,
    k: usize,
    adj: &'a [Vec<usize>],
    order: &'a [usize],
    allowed: &'a F,
    sum: &'a mut BigRational,
}

impl<F: Fn(usize, usize) -> bool> Weight<'_, F> {
    fn go(&mut self, t: usize, tau: &mut [Option<usize>]) {
        if t == self.order.len() {
            *self.sum += self.term(tau);
            return;
        }
        let v = self.order[t];
        let consistent = |tau: &[Option<usize>], l: usize| {
            self.adj[v].iter().all(|&w| tau[w].map_or(true, |lw| self.m.mult(l, lw) > 0))
        };
        if let Some(l) = tau[v] {
            if consistent(tau, l) {
                self.go(t + 1, tau);
            }
            return;
        }
        for l in 0..self.k {
            if (self.allowed)(v, l) && consistent(tau, l) {
                tau[v] = Some(l);
                self.go(t + 1, tau);
                tau[v] = None;
            }
        }
    }

    fn term(&self, tau: &[Option<usize>]) -> BigRational {
        let mut num = BigInt::one();
        let mut deg = vec![0usize; self.k];
        for v in self.order {
            let lv = tau[*v].expect("assigned");
            deg.iter_mut().for_each(|x| *x = 0);
            for &w in &self.adj[*v] {
                deg[tau[w].expect("assigned")] += 1;
            }
            for (i, &c) in deg.iter().enumerate() {
                if c > 0 {
                    num *= falling_big(self.m.mult(lv, i) as i128, c);
                }
            }
        }
        if num.is_zero() {
            return BigRational::zero();
        }
        let mut den = BigInt::one();
        for (v, nb) in self.adj.iter().enumerate() {
            for &w in nb {
                if v < w {
                    den *= BigInt::from(self.m.mult(tau[v].expect("assigned"), tau[w].expect("assigned")));
                }
            }
        }
        BigRational::new(num, den)
    }
}

/// `N_{(alpha,S,tau)}` for edgeless `alpha`: the number of occurrences in
/// any lift with `n` vertices over a `k`-vertex base. In bipartite mode
/// each orientation consistent with `tau` contributes the same product.
pub fn n_edgeless(plg: &PartiallyLabelledGraph, n: usize, k: usize) -> Result<BigInt> {
    if !plg.edges.is_empty() {
        return Err(Error::InvalidParameter("n_edgeless needs an edgeless graph".into()));
    }
    plg.check_labels(k)?;
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidParameter(format!("n = {n} is not a multiple of k = {k}")));
    }
    let per = (n / k) as i128;
    let mut counts = vec![0usize; k];
    for l in plg.labels.iter().flatten() {
        counts[*l] += 1;
    }
    let labelled = counts.iter().fold(BigInt::one(), |acc, &c| acc * falling_big(per, c));
    let s = plg.distinguished().len();
    match &plg.sides {
        None => Ok(labelled * falling_big((n - s) as i128, plg.vertices - s)),
        Some(sides) => {
            let mut v_side = [0usize; 2];
            let mut s_side = [0usize; 2];
            for v in 0..plg.vertices {
                v_side[sides[v] as usize] += 1;
                if plg.labels[v].is_some() {
                    s_side[sides[v] as usize] += 1;
                }
            }
            let half = (n / 2) as i128;
            let free = (0..2).fold(BigInt::one(), |acc, j| {
                acc * falling_big(half - s_side[j] as i128, v_side[j] - s_side[j])
            });
            Ok(labelled * free * BigInt::from(plg.orientations(k).len()))
        }
    }
}
