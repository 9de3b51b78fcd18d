//! The uniform hypergraph type and its shadow, link and neighborhood
//! operators.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// An `r`-uniform hypergraph on vertices `0..n`.
///
/// Edges are kept sorted (colex) and unique; the value is immutable once
/// built.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LabeledHypergraph")]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<VertexSet>,
}

/// The JSON shape: 1-based labels, validated on the way in.
#[derive(Deserialize)]
struct LabeledHypergraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<LabeledHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(raw: LabeledHypergraph) -> Result<Self> {
        let mut edges = Vec::with_capacity(raw.edges.len());
        for labels in raw.edges {
            if labels.iter().any(|&v| v == 0 || v > raw.n) {
                return Err(Error::InvalidEdge {
                    edge: labels,
                    reason: format!("labels must lie in 1..={}", raw.n),
                });
            }
            let e: VertexSet = labels.iter().map(|v| v - 1).collect();
            if e.len() != labels.len() {
                return Err(Error::InvalidEdge {
                    edge: labels,
                    reason: "repeated vertex".into(),
                });
            }
            edges.push(e);
        }
        Hypergraph::new(raw.n, raw.r, edges)
    }
}

/// An ordered pair of vertices; `first == second` is allowed and then
/// stands for the single vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPair {
    pub first: usize,
    pub second: usize,
}

impl OrderedPair {
    pub fn new(first: usize, second: usize) -> Self {
        OrderedPair { first, second }
    }

    pub fn as_set(self) -> VertexSet {
        VertexSet::pair(self.first, self.second)
    }
}

impl Serialize for OrderedPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.first + 1, self.second + 1].serialize(serializer)
    }
}

impl Hypergraph {
    /// Builds a hypergraph, validating every edge. Duplicates are an error.
    pub fn new<I>(n: usize, r: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = VertexSet>,
    {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "n",
                value: n,
                limit: MAX_VERTICES,
            });
        }
        if r < 2 {
            return Err(Error::InvalidParameter(format!(
                "uniformity must be at least 2, got {r}"
            )));
        }
        let universe = VertexSet::full(n);
        let mut list: Vec<VertexSet> = Vec::new();
        for e in edges {
            if e.len() != r {
                return Err(Error::InvalidEdge {
                    edge: e.labels(),
                    reason: format!("expected {r} distinct vertices"),
                });
            }
            if !e.is_subset(universe) {
                return Err(Error::InvalidEdge {
                    edge: e.labels(),
                    reason: format!("vertex outside 1..{n}"),
                });
            }
            list.push(e);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].labels()));
        }
        Ok(Hypergraph { n, r, edges: list })
    }

    /// Builds from 0-based vertex lists; mostly a test convenience.
    pub fn from_lists(n: usize, r: usize, edges: &[&[usize]]) -> Result<Self> {
        for e in edges {
            if e.iter().any(|&v| v >= MAX_VERTICES) {
                return Err(Error::InvalidEdge {
                    edge: e.iter().map(|v| v + 1).collect(),
                    reason: format!("vertex outside 1..{n}"),
                });
            }
            let s: VertexSet = e.iter().collect();
            if s.len() != e.len() {
                return Err(Error::InvalidEdge {
                    edge: e.iter().map(|v| v + 1).collect(),
                    reason: "repeated vertex".into(),
                });
            }
        }
        Self::new(n, r, edges.iter().map(|e| e.iter().collect()))
    }

    pub fn empty(n: usize, r: usize) -> Result<Self> {
        Self::new(n, r, std::iter::empty())
    }

    /// Internal constructor for callers that already hold a sorted,
    /// duplicate-free, validated edge list.
    pub(crate) fn from_sorted_unchecked(n: usize, r: usize, edges: Vec<VertexSet>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|e| e.len() == r));
        Hypergraph { n, r, edges }
    }

    /// Like [`Hypergraph::new`] but silently drops duplicates.
    pub(crate) fn from_unsorted_unchecked(n: usize, r: usize, mut edges: Vec<VertexSet>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_unchecked(n, r, edges)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    #[inline]
    pub fn contains(&self, e: VertexSet) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Number of edges containing `v`.
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Vertices lying in at least one edge.
    pub fn covered_vertices(&self) -> VertexSet {
        self.edges
            .iter()
            .fold(VertexSet::EMPTY, |acc, &e| acc.union(e))
    }

    /// All `(r-1)`-sets contained in some edge, sorted.
    pub fn shadow(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = self
            .edges
            .iter()
            .flat_map(|&e| e.iter().map(move |v| e.without(v)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `L(S)`: shadow sets `A` with `A ∪ {s}` an edge for every `s` in `S`.
    pub fn link(&self, s: VertexSet) -> Result<Vec<VertexSet>> {
        let first = s
            .first()
            .ok_or_else(|| Error::InvalidParameter("link of the empty set".into()))?;
        let mut out: Vec<VertexSet> = self
            .edges
            .iter()
            .filter(|e| e.contains(first))
            .map(|e| e.without(first))
            .filter(|a| {
                a.is_disjoint(s)
                    && s.iter()
                        .skip(1)
                        .all(|other| self.contains(a.with(other)))
            })
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `L(u, v)`, with `L(u, u) = L({u})`.
    pub fn pair_link(&self, pair: OrderedPair) -> Vec<VertexSet> {
        self.link(pair.as_set()).expect("pair is nonempty")
    }

    fn check_boundary_set(&self, t: VertexSet) -> Result<()> {
        if t.len() + 1 != self.r {
            return Err(Error::InvalidParameter(format!(
                "expected a set of size {}, got {}",
                self.r - 1,
                t.len()
            )));
        }
        if !t.is_subset(self.vertices()) {
            return Err(Error::InvalidParameter(format!(
                "set {t:?} has a vertex outside 1..{}",
                self.n
            )));
        }
        Ok(())
    }

    /// `N(T) = {v : T ∪ {v} ∈ H}` for an `(r-1)`-set `T`.
    pub fn neighborhood(&self, t: VertexSet) -> Result<VertexSet> {
        self.check_boundary_set(t)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| t.is_subset(**e))
            .map(|e| e.difference(t))
            .fold(VertexSet::EMPTY, |acc, x| acc.union(x)))
    }

    pub fn degree(&self, t: VertexSet) -> Result<usize> {
        self.neighborhood(t).map(VertexSet::len)
    }

    /// The 2-graph of pairs covered by some edge.
    pub fn auxiliary_graph(&self) -> Hypergraph {
        let mut pairs: Vec<VertexSet> = Vec::new();
        for e in &self.edges {
            let vs = e.to_vec();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    pairs.push(VertexSet::pair(a, b));
                }
            }
        }
        Hypergraph::from_unsorted_unchecked(self.n, 2, pairs)
    }

    /// Adjacency masks; meaningful for `r = 2`.
    pub fn adjacency(&self) -> Result<Vec<VertexSet>> {
        if self.r != 2 {
            return Err(Error::InvalidParameter(format!(
                "adjacency requires a graph (r = 2), got r = {}",
                self.r
            )));
        }
        let mut adj = vec![VertexSet::EMPTY; self.n];
        for e in &self.edges {
            let a = e.first().unwrap();
            let b = e.last().unwrap();
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(adj)
    }

    /// Graph from adjacency masks.
    pub fn from_adjacency(adj: &[VertexSet]) -> Hypergraph {
        let mut edges = Vec::new();
        for (a, nb) in adj.iter().enumerate() {
            for b in nb.iter().filter(|&b| b > a) {
                edges.push(VertexSet::pair(a, b));
            }
        }
        Hypergraph::from_unsorted_unchecked(adj.len(), 2, edges)
    }

    /// Image under `perm`, where `perm[v]` is the new label of `v`.
    pub fn relabel(&self, perm: &[usize]) -> Hypergraph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|v| perm[v]).collect())
            .collect();
        Hypergraph::from_unsorted_unchecked(self.n, self.r, edges)
    }

    /// Same edges with one more (isolated) vertex slot, or a different
    /// vertex count as long as every edge still fits.
    pub fn with_vertex_count(&self, n: usize) -> Result<Hypergraph> {
        Hypergraph::new(n, self.r, self.edges.iter().copied())
    }

    /// Copy with `extra` added and `removed` taken out.
    pub fn edit(&self, removed: &[VertexSet], extra: &[VertexSet]) -> Result<Hypergraph> {
        let mut edges: Vec<VertexSet> = self
            .edges
            .iter()
            .copied()
            .filter(|e| !removed.contains(e))
            .collect();
        edges.extend_from_slice(extra);
        Hypergraph::new(self.n, self.r, edges)
    }

    /// Edges that place at least two vertices in one block of `blocks`.
    pub fn bad_edges(&self, blocks: &[VertexSet]) -> Vec<VertexSet> {
        self.edges
            .iter()
            .copied()
            .filter(|e| blocks.iter().any(|b| e.intersection(*b).len() >= 2))
            .collect()
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, r={}, edges=", self.n, self.r)?;
        f.debug_list().entries(&self.edges).finish()?;
        write!(f, ")")
    }
}

/// Per-vertex link tables for a 3-graph: `pair_nbrs[u][a]` holds every `b`
/// with `{u, a, b}` an edge. This makes `N({a, b})` a lookup and `|L(u, v)|`
/// an `O(n)` popcount sum.
#[derive(Clone, Debug)]
pub struct TripleIndex {
    n: usize,
    pair_nbrs: Vec<VertexSet>,
}

impl TripleIndex {
    pub fn new(h: &Hypergraph) -> Result<Self> {
        if h.r() != 3 {
            return Err(Error::InvalidParameter(format!(
                "operation requires a 3-graph, got r = {}",
                h.r()
            )));
        }
        let n = h.n();
        let mut pair_nbrs = vec![VertexSet::EMPTY; n * n];
        for e in h.edges() {
            let v = e.to_vec();
            let (a, b, c) = (v[0], v[1], v[2]);
            pair_nbrs[a * n + b].insert(c);
            pair_nbrs[b * n + a].insert(c);
            pair_nbrs[a * n + c].insert(b);
            pair_nbrs[c * n + a].insert(b);
            pair_nbrs[b * n + c].insert(a);
            pair_nbrs[c * n + b].insert(a);
        }
        Ok(TripleIndex { n, pair_nbrs })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `N({a, b})`.
    #[inline]
    pub fn neighborhood(&self, a: usize, b: usize) -> VertexSet {
        self.pair_nbrs[a * self.n + b]
    }

    /// Neighbors of `a` in the link graph `L(u)`.
    #[inline]
    pub fn link_neighbors(&self, u: usize, a: usize) -> VertexSet {
        self.pair_nbrs[u * self.n + a]
    }

    /// Neighbors of `a` in `L(u, v)`.
    #[inline]
    pub fn pair_link_neighbors(&self, u: usize, v: usize, a: usize) -> VertexSet {
        self.link_neighbors(u, a)
            .intersection(self.link_neighbors(v, a))
    }

    /// `|L(u, v)|`; `u == v` gives the vertex link size.
    pub fn pair_link_size(&self, u: usize, v: usize) -> usize {
        (0..self.n)
            .map(|a| self.pair_link_neighbors(u, v, a).len())
            .sum::<usize>()
            / 2
    }

    /// `L(u, v)` as adjacency masks.
    pub fn pair_link_adjacency(&self, u: usize, v: usize) -> Vec<VertexSet> {
        (0..self.n)
            .map(|a| self.pair_link_neighbors(u, v, a))
            .collect()
    }
}
