//! Ordered vertex partitions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

/// Disjoint blocks covering `0..n`; serialized as 1-based label lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition {
    pub blocks: Vec<VertexSet>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<VertexSet>) -> Result<Self> {
        let p = Partition { blocks };
        if !p.covers(n) {
            return Err(Error::InvalidParameter(format!(
                "blocks do not partition {n} vertices: {:?}",
                p.blocks
            )));
        }
        Ok(p)
    }

    /// `assignment[v]` is the block of `v`.
    pub fn from_assignment(assignment: &[usize], parts: usize) -> Self {
        let mut blocks = vec![VertexSet::EMPTY; parts];
        for (v, &b) in assignment.iter().enumerate() {
            blocks[b].insert(v);
        }
        Partition { blocks }
    }

    pub fn assignment(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for v in b.iter() {
                out[v] = i;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Pairwise disjoint with union `0..n`.
    pub fn covers(&self, n: usize) -> bool {
        let mut seen = VertexSet::EMPTY;
        for &b in &self.blocks {
            if !seen.is_disjoint(b) {
                return false;
            }
            seen = seen.union(b);
        }
        seen == VertexSet::full(n)
    }

    /// Edges of `h` with at least two vertices in one block.
    pub fn bad_edges(&self, h: &Hypergraph) -> Vec<VertexSet> {
        h.bad_edges(&self.blocks)
    }

    /// Blocks as sets, ignoring their order.
    pub fn unordered(&self) -> Vec<VertexSet> {
        let mut b = self.blocks.clone();
        b.sort();
        b
    }

    /// Equal up to renaming blocks.
    pub fn same_blocks(&self, other: &Partition) -> bool {
        self.unordered() == other.unordered()
    }
}
