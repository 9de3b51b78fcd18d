//! Structural predicates and inequality certificates.

pub mod certificates;
pub mod incremental;

use serde::Serialize;

use crate::cliques::{find_clique_in, has_clique_in};
use crate::constructions::{k_family_within, ForbiddenFamily};
use crate::embed::is_subgraph;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, TripleIndex};
use crate::vertex_set::VertexSet;

pub use certificates::{
    fisher_ryan_certificate, inequality2_certificate, link_count_identity, mantel_link_bound,
    theorem13_certificate, verify, CertificateReport, Quantity, VERIFY_NAMES,
};

/// Three distinct edges with `A △ B ⊆ C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CancellativeWitness {
    pub a: VertexSet,
    pub b: VertexSet,
    pub c: VertexSet,
}

fn require_triple_system(h: &Hypergraph) -> Result<()> {
    if h.r() != 3 {
        return Err(Error::InvalidParameter(format!(
            "this check is defined for 3-graphs, got r = {}",
            h.r()
        )));
    }
    Ok(())
}

/// For `r = 3` only pairs with `|A ∩ B| = 2` can fail (otherwise
/// `|A △ B| > 3`), and then `A △ B` is a pair, so it suffices to look for
/// an edge through that pair.
pub fn find_cancellative_violation(h: &Hypergraph) -> Result<Option<CancellativeWitness>> {
    require_triple_system(h)?;
    let idx = TripleIndex::new(h)?;
    for t in h.shadow() {
        let ab = t.to_vec();
        let nbhd = idx.neighborhood(ab[0], ab[1]);
        for u in nbhd.iter() {
            for v in nbhd.iter().filter(|&v| v > u) {
                if let Some(w) = idx.neighborhood(u, v).first() {
                    return Ok(Some(CancellativeWitness {
                        a: t.with(u),
                        b: t.with(v),
                        c: VertexSet::from_iter([u, v, w]),
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_cancellative(h: &Hypergraph) -> Result<bool> {
    Ok(find_cancellative_violation(h)?.is_none())
}

/// The definition applied literally; any uniformity.
pub fn find_cancellative_violation_general(h: &Hypergraph) -> Option<CancellativeWitness> {
    let edges = h.edges();
    for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            let d = a.symmetric_difference(b);
            if let Some(&c) = edges.iter().find(|&&c| c != a && c != b && d.is_subset(c)) {
                return Some(CancellativeWitness { a, b, c });
            }
        }
    }
    None
}

pub fn is_cancellative_general(h: &Hypergraph) -> bool {
    find_cancellative_violation_general(h).is_none()
}

fn check_k_free_params(h: &Hypergraph, ell: usize) -> Result<()> {
    if ell < h.r() {
        return Err(Error::InvalidParameter(format!(
            "k-freeness needs ell >= r (got ell = {ell}, r = {})",
            h.r()
        )));
    }
    Ok(())
}

/// `H` is `𝒦^{(r)}_{ℓ+1}`-free iff its auxiliary graph is `K_{ℓ+1}`-free.
pub fn is_k_free(h: &Hypergraph, ell: usize) -> Result<bool> {
    Ok(find_k_clique_in_shadow_graph(h, ell)?.is_none())
}

/// An `(ℓ+1)`-set all of whose pairs are covered, if any.
pub fn find_k_clique_in_shadow_graph(h: &Hypergraph, ell: usize) -> Result<Option<VertexSet>> {
    check_k_free_params(h, ell)?;
    let adj = h.auxiliary_graph().adjacency()?;
    Ok(find_clique_in(&adj, h.vertices(), ell + 1))
}

/// Slow cross-check of [`is_k_free`]: direct embedding of every minimal
/// family member that fits on `n` vertices.
pub fn is_k_free_by_embedding(h: &Hypergraph, ell: usize) -> Result<bool> {
    check_k_free_params(h, ell)?;
    Ok(!contains_member(h, &k_family_within(h.r(), ell, h.n())?)?)
}

/// Whether some member of `family` embeds into `h`.
pub fn contains_member(h: &Hypergraph, family: &ForbiddenFamily) -> Result<bool> {
    for f in &family.members {
        if is_subgraph(f, h)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A vertex whose link graph contains a triangle, with the triangle.
pub fn find_link_triangle(h: &Hypergraph) -> Result<Option<(usize, VertexSet)>> {
    require_triple_system(h)?;
    let idx = TripleIndex::new(h)?;
    for v in 0..h.n() {
        let adj: Vec<VertexSet> = (0..h.n()).map(|a| idx.link_neighbors(v, a)).collect();
        if let Some(tri) = find_clique_in(&adj, h.vertices(), 3) {
            return Ok(Some((v, tri)));
        }
    }
    Ok(None)
}

pub fn links_triangle_free(h: &Hypergraph) -> Result<bool> {
    Ok(find_link_triangle(h)?.is_none())
}

/// A shadow pair `T` and an edge containing two vertices of `N(T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DependentNeighborhood {
    pub t: VertexSet,
    pub neighborhood: VertexSet,
    pub edge: VertexSet,
}

pub fn find_dependent_neighborhood(h: &Hypergraph) -> Result<Option<DependentNeighborhood>> {
    require_triple_system(h)?;
    let idx = TripleIndex::new(h)?;
    for t in h.shadow() {
        let ab = t.to_vec();
        let nbhd = idx.neighborhood(ab[0], ab[1]);
        if let Some(&edge) = h.edges().iter().find(|e| e.intersection(nbhd).len() >= 2) {
            return Ok(Some(DependentNeighborhood {
                t,
                neighborhood: nbhd,
                edge,
            }));
        }
    }
    Ok(None)
}

pub fn neighborhoods_independent(h: &Hypergraph) -> Result<bool> {
    Ok(find_dependent_neighborhood(h)?.is_none())
}

/// Whether the graph `g` is `K_q`-free.
pub fn is_clique_free(g: &Hypergraph, q: usize) -> Result<bool> {
    let adj = g.adjacency()?;
    Ok(!has_clique_in(&adj, g.vertices(), q))
}
