//! Exact clique counting.
//!
//! Counting uses pivot-based enumeration: every clique is represented in a
//! leaf of the recursion as a set of mandatory ("held") vertices plus a free
//! choice among "pivot" vertices, so a leaf with `h` held and `p` pivots
//! contributes `C(p, k - h)` cliques of size `k` without listing them.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::{binomial, VertexSet};

/// `counts[k]` is the number of `k`-cliques of the graph induced on `cand`
/// (`counts[0] = 1` for the empty clique).
pub fn clique_counts_in(adj: &[VertexSet], cand: VertexSet) -> Vec<u128> {
    let mut counts = vec![0u128; cand.len() + 1];
    pivot_count(adj, cand, 0, 0, &mut counts);
    counts
}

fn pivot_count(adj: &[VertexSet], cand: VertexSet, held: usize, pivots: usize, counts: &mut [u128]) {
    if cand.is_empty() {
        for k in 0..=pivots {
            counts[held + k] += binomial(pivots as u64, k as u64);
        }
        return;
    }
    let pivot = cand
        .iter()
        .max_by_key(|&v| (adj[v].intersection(cand).len(), std::cmp::Reverse(v)))
        .expect("nonempty");
    pivot_count(adj, cand.intersection(adj[pivot]), held, pivots + 1, counts);

    let mut excluded = VertexSet::singleton(pivot);
    for w in cand.difference(adj[pivot]).without(pivot) {
        let next = adj[w].intersection(cand).difference(excluded);
        pivot_count(adj, next, held + 1, pivots, counts);
        excluded.insert(w);
    }
}

/// Whether the graph induced on `cand` contains a `q`-clique.
pub fn has_clique_in(adj: &[VertexSet], cand: VertexSet, q: usize) -> bool {
    find_clique_in(adj, cand, q).is_some()
}

/// Some `q`-clique inside `cand`, if one exists.
pub fn find_clique_in(adj: &[VertexSet], cand: VertexSet, q: usize) -> Option<VertexSet> {
    fn go(adj: &[VertexSet], mut cand: VertexSet, q: usize, acc: VertexSet) -> Option<VertexSet> {
        if q == 0 {
            return Some(acc);
        }
        while cand.len() >= q {
            let v = cand.first().unwrap();
            cand.remove(v);
            let next = adj[v].intersection(cand);
            if next.len() + 1 >= q {
                if let Some(found) = go(adj, next, q - 1, acc.with(v)) {
                    return Some(found);
                }
            }
        }
        None
    }
    go(adj, cand, q, VertexSet::EMPTY)
}

fn require_graph(g: &Hypergraph) -> Result<Vec<VertexSet>> {
    g.adjacency()
        .map_err(|_| Error::InvalidParameter(format!("clique operations need r = 2, got {}", g.r())))
}

/// Number of copies of `K_i`. `k_1 = n` counts isolated vertices too.
pub fn count_cliques(g: &Hypergraph, i: usize) -> Result<u128> {
    if i == 0 {
        return Err(Error::InvalidParameter("clique size must be at least 1".into()));
    }
    let adj = require_graph(g)?;
    let counts = clique_counts_in(&adj, g.vertices());
    Ok(counts.get(i).copied().unwrap_or(0))
}

/// `counts[i]` for every `i` in `0..=n`.
pub fn clique_counts(g: &Hypergraph) -> Result<Vec<u128>> {
    let adj = require_graph(g)?;
    Ok(clique_counts_in(&adj, g.vertices()))
}

pub fn contains_clique(g: &Hypergraph, q: usize) -> Result<bool> {
    let adj = require_graph(g)?;
    Ok(has_clique_in(&adj, g.vertices(), q))
}

pub fn find_clique(g: &Hypergraph, q: usize) -> Result<Option<VertexSet>> {
    let adj = require_graph(g)?;
    Ok(find_clique_in(&adj, g.vertices(), q))
}

/// Number of `q`-cliques through the edge `{a, b}`.
pub fn cliques_through_edge(adj: &[VertexSet], a: usize, b: usize, q: usize) -> u128 {
    if q < 2 {
        return 0;
    }
    let common = adj[a].intersection(adj[b]);
    clique_counts_in(adj, common)
        .get(q - 2)
        .copied()
        .unwrap_or(0)
}
