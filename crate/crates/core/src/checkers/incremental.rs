//! Incremental predicate states: "may this edge be added?" in sub-linear
//! time, with exact undo. Used by the extremal search and by generators.

use crate::cliques::has_clique_in;
use crate::vertex_set::VertexSet;

/// Cancellativity of a growing 3-graph.
///
/// Adding `e` breaks cancellativity iff
/// * some pair `{a, b}` of `e` has `N(T) ⊇ {a, b}` for a shadow pair `T`
///   (then `e` plays `C`), or
/// * for a pair `T ⊂ e` with third vertex `a`, some `b ∈ N(T)` already
///   shares an edge with `a` (then `e` plays `A`).
#[derive(Clone, Debug)]
pub struct CancellativeState {
    n: usize,
    /// `pair_nbrs[u * n + a]`: every `b` with `{u, a, b}` an edge.
    pair_nbrs: Vec<VertexSet>,
    /// Edge multiplicity of every pair.
    cover_count: Vec<u16>,
    /// `cover[a]`: vertices sharing at least one edge with `a`.
    cover: Vec<VertexSet>,
}

impl CancellativeState {
    pub fn new(n: usize) -> Self {
        CancellativeState {
            n,
            pair_nbrs: vec![VertexSet::EMPTY; n * n],
            cover_count: vec![0; n * n],
            cover: vec![VertexSet::EMPTY; n],
        }
    }

    #[inline]
    fn nbrs(&self, a: usize, b: usize) -> VertexSet {
        self.pair_nbrs[a * self.n + b]
    }

    fn triple(e: VertexSet) -> [usize; 3] {
        let mut it = e.iter();
        [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
    }

    /// Assumes `e` is not yet present.
    pub fn can_add(&self, e: VertexSet) -> bool {
        let [x, y, z] = Self::triple(e);
        for (a, b, third) in [(x, y, z), (x, z, y), (y, z, x)] {
            // e as C: A = T ∪ {a}, B = T ∪ {b}
            for p in 0..self.n {
                if !self.nbrs(a, p).is_disjoint(self.nbrs(b, p)) {
                    return false;
                }
            }
            // e as A with T = {a, b}: B = T ∪ {w}, C covers {third, w}
            if !self.nbrs(a, b).is_disjoint(self.cover[third]) {
                return false;
            }
        }
        true
    }

    pub fn add(&mut self, e: VertexSet) {
        let [x, y, z] = Self::triple(e);
        let n = self.n;
        for (a, b, c) in [(x, y, z), (y, z, x), (x, z, y)] {
            self.pair_nbrs[a * n + b].insert(c);
            self.pair_nbrs[b * n + a].insert(c);
            self.cover_count[a * n + b] += 1;
            self.cover_count[b * n + a] += 1;
            self.cover[a].insert(b);
            self.cover[b].insert(a);
        }
    }

    pub fn remove(&mut self, e: VertexSet) {
        let [x, y, z] = Self::triple(e);
        let n = self.n;
        for (a, b, c) in [(x, y, z), (y, z, x), (x, z, y)] {
            self.pair_nbrs[a * n + b].remove(c);
            self.pair_nbrs[b * n + a].remove(c);
            self.cover_count[a * n + b] -= 1;
            self.cover_count[b * n + a] -= 1;
            if self.cover_count[a * n + b] == 0 {
                self.cover[a].remove(b);
                self.cover[b].remove(a);
            }
        }
    }
}

/// `𝒦_{ℓ+1}`-freeness of a growing r-graph, tracked through its auxiliary
/// graph: the hypergraph stays free iff no `K_{ℓ+1}` appears there.
#[derive(Clone, Debug)]
pub struct KFreeState {
    n: usize,
    ell: usize,
    adj: Vec<VertexSet>,
    cover_count: Vec<u16>,
}

impl KFreeState {
    pub fn new(n: usize, ell: usize) -> Self {
        KFreeState {
            n,
            ell,
            adj: vec![VertexSet::EMPTY; n],
            cover_count: vec![0; n * n],
        }
    }

    pub fn can_add(&self, e: VertexSet) -> bool {
        let vs: Vec<usize> = e.to_vec();
        let mut fresh: Vec<(usize, usize)> = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                if !self.adj[a].contains(b) {
                    fresh.push((a, b));
                }
            }
        }
        if fresh.is_empty() {
            return true;
        }
        // a single r-set already spans K_r in the auxiliary graph
        if vs.len() > self.ell {
            return false;
        }
        let mut adj = self.adj.clone();
        for &v in &vs {
            adj[v] = adj[v].union(e.without(v));
        }
        fresh.iter().all(|&(a, b)| {
            let common = adj[a].intersection(adj[b]);
            !has_clique_in(&adj, common, self.ell - 1)
        })
    }

    pub fn add(&mut self, e: VertexSet) {
        let vs: Vec<usize> = e.to_vec();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                self.cover_count[a * self.n + b] += 1;
                self.cover_count[b * self.n + a] += 1;
                self.adj[a].insert(b);
                self.adj[b].insert(a);
            }
        }
    }

    pub fn remove(&mut self, e: VertexSet) {
        let vs: Vec<usize> = e.to_vec();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                self.cover_count[a * self.n + b] -= 1;
                self.cover_count[b * self.n + a] -= 1;
                if self.cover_count[a * self.n + b] == 0 {
                    self.adj[a].remove(b);
                    self.adj[b].remove(a);
                }
            }
        }
    }
}

/// Cancellativity for any uniformity, straight from the definition.
#[derive(Clone, Debug, Default)]
pub struct GeneralCancellativeState {
    edges: Vec<VertexSet>,
}

impl GeneralCancellativeState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn can_add(&self, e: VertexSet) -> bool {
        for (i, &a) in self.edges.iter().enumerate() {
            // e as C
            for &b in &self.edges[i + 1..] {
                if a.symmetric_difference(b).is_subset(e) {
                    return false;
                }
            }
            // e as A, a as B, C among the rest
            let d = e.symmetric_difference(a);
            if self
                .edges
                .iter()
                .any(|&c| c != a && d.is_subset(c))
            {
                return false;
            }
        }
        true
    }

    pub fn add(&mut self, e: VertexSet) {
        self.edges.push(e);
    }

    pub fn remove(&mut self, e: VertexSet) {
        if let Some(pos) = self.edges.iter().rposition(|&x| x == e) {
            self.edges.swap_remove(pos);
        }
    }
}
