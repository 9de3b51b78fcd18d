//! Maximum ℓ-cuts of graphs: exact branch-and-bound for small graphs and
//! multi-restart vertex-move hill climbing otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::partition::Partition;
use crate::vertex_set::VertexSet;

pub const EXACT_CUT_LIMIT: usize = 20;
pub const LOCAL_RESTARTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutMode {
    Exact,
    Local,
}

impl CutMode {
    /// Exact when the graph is small enough, local search otherwise.
    pub fn auto(n: usize) -> Self {
        if n <= EXACT_CUT_LIMIT {
            CutMode::Exact
        } else {
            CutMode::Local
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutResult {
    pub partition: Partition,
    /// Edges joining different blocks.
    pub cut: usize,
    pub mode: CutMode,
}

/// Largest number of crossing edges over partitions of `V(G)` into `ell`
/// blocks. The returned partition is always vertex-move-optimal, and has
/// no empty block when `n >= ell`.
pub fn max_ell_cut(g: &Hypergraph, ell: usize, mode: CutMode, seed: u64) -> Result<CutResult> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!("ell must be at least 2, got {ell}")));
    }
    let adj = g.adjacency()?;
    let n = g.n();
    if mode == CutMode::Exact && n > EXACT_CUT_LIMIT {
        return Err(Error::TooLarge {
            what: "n for exact max cut",
            value: n,
            limit: EXACT_CUT_LIMIT,
        });
    }
    let mut assign = local_search(&adj, ell, seed);
    if mode == CutMode::Exact {
        let incumbent = cut_size(&adj, &assign);
        if let Some(better) = exact_search(&adj, ell, incumbent) {
            assign = better;
            fill_empty_blocks(&adj, &mut assign, ell);
        }
    }
    debug_assert!(is_vertex_move_optimal(&adj, &assign, ell));
    Ok(CutResult {
        cut: cut_size(&adj, &assign),
        partition: Partition::from_assignment(&assign, ell),
        mode,
    })
}

pub fn cut_size(adj: &[VertexSet], assign: &[usize]) -> usize {
    let mut cut = 0;
    for (v, nb) in adj.iter().enumerate() {
        cut += nb.iter().filter(|&w| w > v && assign[w] != assign[v]).count();
    }
    cut
}

/// `counts[v * ell + b]`: neighbors of `v` in block `b`.
fn block_degrees(adj: &[VertexSet], assign: &[usize], ell: usize) -> Vec<usize> {
    let mut counts = vec![0; adj.len() * ell];
    for (v, nb) in adj.iter().enumerate() {
        for w in nb.iter() {
            counts[v * ell + assign[w]] += 1;
        }
    }
    counts
}

/// No single vertex relocation increases the cut, i.e. every vertex has at
/// most as many neighbors in its own block as in any other.
pub fn is_vertex_move_optimal(adj: &[VertexSet], assign: &[usize], ell: usize) -> bool {
    let counts = block_degrees(adj, assign, ell);
    (0..adj.len()).all(|v| {
        let own = counts[v * ell + assign[v]];
        (0..ell).all(|b| counts[v * ell + b] >= own)
    })
}

fn move_vertex(adj: &[VertexSet], assign: &mut [usize], counts: &mut [usize], ell: usize, v: usize, to: usize) {
    let from = assign[v];
    for w in adj[v].iter() {
        counts[w * ell + from] -= 1;
        counts[w * ell + to] += 1;
    }
    assign[v] = to;
}

/// Best-improvement single-vertex moves until none gains.
fn climb(adj: &[VertexSet], assign: &mut [usize], ell: usize) {
    let mut counts = block_degrees(adj, assign, ell);
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..adj.len() {
            let own = counts[v * ell + assign[v]];
            for b in 0..ell {
                let there = counts[v * ell + b];
                if there < own {
                    let gain = own - there;
                    if best.is_none_or(|(g, _, _)| gain > g) {
                        best = Some((gain, v, b));
                    }
                }
            }
        }
        let Some((_, v, b)) = best else { return };
        move_vertex(adj, assign, &mut counts, ell, v, b);
    }
}

/// Moves vertices into empty blocks; a move into an empty block never
/// lowers the cut.
fn fill_empty_blocks(adj: &[VertexSet], assign: &mut [usize], ell: usize) {
    let n = adj.len();
    let mut counts = block_degrees(adj, assign, ell);
    loop {
        let mut sizes = vec![0usize; ell];
        for &b in assign.iter() {
            sizes[b] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else { break };
        let candidate = (0..n)
            .filter(|&v| sizes[assign[v]] >= 2)
            .max_by_key(|&v| (counts[v * ell + assign[v]], std::cmp::Reverse(v)));
        let Some(v) = candidate else { break };
        move_vertex(adj, assign, &mut counts, ell, v, empty);
    }
    climb(adj, assign, ell);
}

fn greedy_assignment(adj: &[VertexSet], ell: usize) -> Vec<usize> {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    let mut assign = vec![usize::MAX; n];
    let mut members = vec![VertexSet::EMPTY; ell];
    for v in order {
        let b = (0..ell)
            .min_by_key(|&b| (adj[v].intersection(members[b]).len(), b))
            .unwrap();
        assign[v] = b;
        members[b].insert(v);
    }
    assign
}

fn local_search(adj: &[VertexSet], ell: usize, seed: u64) -> Vec<usize> {
    let n = adj.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for restart in 0..LOCAL_RESTARTS {
        let mut assign = if restart == 0 {
            greedy_assignment(adj, ell)
        } else {
            (0..n).map(|_| rng.gen_range(0..ell)).collect()
        };
        climb(adj, &mut assign, ell);
        fill_empty_blocks(adj, &mut assign, ell);
        let cut = cut_size(adj, &assign);
        if best.as_ref().is_none_or(|(c, _)| cut > *c) {
            best = Some((cut, assign));
        }
    }
    best.map(|(_, a)| a).unwrap_or_default()
}

struct Exact<'a> {
    adj: &'a [VertexSet],
    ell: usize,
    order: Vec<usize>,
    assign: Vec<usize>,
    /// `counts[v * ell + b]`: assigned neighbors of `v` in block `b`.
    counts: Vec<usize>,
    assigned_nbrs: Vec<usize>,
    best: usize,
    best_assign: Option<Vec<usize>>,
}

impl Exact<'_> {
    fn bound(&self, depth: usize, cut: usize, free_edges: usize) -> usize {
        let mut extra = free_edges;
        for &u in &self.order[depth..] {
            let row = &self.counts[u * self.ell..(u + 1) * self.ell];
            extra += self.assigned_nbrs[u] - row.iter().min().unwrap();
        }
        cut + extra
    }

    fn go(&mut self, depth: usize, used: usize, cut: usize, free_edges: usize) {
        if depth == self.order.len() {
            if cut > self.best {
                self.best = cut;
                self.best_assign = Some(self.assign.clone());
            }
            return;
        }
        if self.bound(depth, cut, free_edges) <= self.best {
            return;
        }
        let v = self.order[depth];
        let limit = (used + 1).min(self.ell);
        let nbrs = self.adj[v];
        let free_nbrs = nbrs.iter().filter(|&w| self.assign[w] == usize::MAX).count();
        for b in 0..limit {
            let gained = self.assigned_nbrs[v] - self.counts[v * self.ell + b];
            self.assign[v] = b;
            for w in nbrs.iter() {
                self.counts[w * self.ell + b] += 1;
                self.assigned_nbrs[w] += 1;
            }
            self.go(depth + 1, used.max(b + 1), cut + gained, free_edges - free_nbrs);
            for w in nbrs.iter() {
                self.counts[w * self.ell + b] -= 1;
                self.assigned_nbrs[w] -= 1;
            }
            self.assign[v] = usize::MAX;
        }
    }
}

/// An assignment with cut strictly above `incumbent`, if one exists; the
/// first block choice of each vertex is restricted to already used blocks
/// plus one fresh block.
fn exact_search(adj: &[VertexSet], ell: usize, incumbent: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    let edges = adj.iter().map(|s| s.len()).sum::<usize>() / 2;
    let mut search = Exact {
        adj,
        ell,
        order,
        assign: vec![usize::MAX; n],
        counts: vec![0; n * ell],
        assigned_nbrs: vec![0; n],
        best: incumbent,
        best_assign: None,
    };
    search.go(0, 0, 0, edges);
    search.best_assign
}
