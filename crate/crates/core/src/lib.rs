//! Exact extremal numbers, structural checkers and stability partitions for
//! Turán-type problems on small uniform hypergraphs.

pub mod cache;
pub mod canon;
pub mod checkers;
pub mod cli;
pub mod cliques;
pub mod constructions;
pub mod embed;
pub mod error;
pub mod format;
pub mod hypergraph;
pub mod manifest;
pub mod partition;
pub mod search;
pub mod stability;
pub mod vertex_set;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, OrderedPair};
pub use partition::Partition;
pub use vertex_set::VertexSet;
