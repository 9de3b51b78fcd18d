//! Subgraph containment by backtracking embedding.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

/// Whether `f` is isomorphic to a (not necessarily induced) subgraph of `h`.
pub fn is_subgraph(f: &Hypergraph, h: &Hypergraph) -> Result<bool> {
    Ok(find_embedding(f, h)?.is_some())
}

/// An injective map `phi` (indexed by vertices of `f`) sending every edge of
/// `f` onto an edge of `h`.
pub fn find_embedding(f: &Hypergraph, h: &Hypergraph) -> Result<Option<Vec<usize>>> {
    if f.r() != h.r() {
        return Err(Error::InvalidParameter(format!(
            "uniformity mismatch: {} vs {}",
            f.r(),
            h.r()
        )));
    }
    if f.n() > h.n() || f.len() > h.len() {
        return Ok(None);
    }

    let f_deg: Vec<usize> = (0..f.n()).map(|v| f.vertex_degree(v)).collect();
    let h_deg: Vec<usize> = (0..h.n()).map(|v| h.vertex_degree(v)).collect();

    // Place high-degree vertices first, then stay connected to what is placed.
    let active: Vec<usize> = (0..f.n()).filter(|&v| f_deg[v] > 0).collect();
    let mut order: Vec<usize> = Vec::with_capacity(active.len());
    let mut placed = VertexSet::EMPTY;
    while order.len() < active.len() {
        let next = active
            .iter()
            .copied()
            .filter(|&v| !placed.contains(v))
            .max_by_key(|&v| {
                let touching = f
                    .edges()
                    .iter()
                    .filter(|e| e.contains(v) && !e.is_disjoint(placed))
                    .count();
                (touching, f_deg[v], std::cmp::Reverse(v))
            })
            .unwrap();
        order.push(next);
        placed.insert(next);
    }

    // Edges of f that become fully mapped once order[i] is placed.
    let mut checks: Vec<Vec<VertexSet>> = vec![Vec::new(); order.len()];
    let mut prefix = VertexSet::EMPTY;
    for (i, &v) in order.iter().enumerate() {
        prefix.insert(v);
        checks[i] = f
            .edges()
            .iter()
            .copied()
            .filter(|e| e.contains(v) && e.is_subset(prefix))
            .collect();
    }

    let mut phi = vec![usize::MAX; f.n()];
    let mut used = VertexSet::EMPTY;
    let found = extend(0, &order, &checks, &f_deg, &h_deg, h, &mut phi, &mut used);
    if !found {
        return Ok(None);
    }
    // Isolated vertices of f take any unused vertices.
    let mut free = VertexSet::full(h.n()).difference(used).iter();
    for v in 0..f.n() {
        if phi[v] == usize::MAX {
            phi[v] = free.next().expect("f.n() <= h.n()");
        }
    }
    Ok(Some(phi))
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    checks: &[Vec<VertexSet>],
    f_deg: &[usize],
    h_deg: &[usize],
    h: &Hypergraph,
    phi: &mut [usize],
    used: &mut VertexSet,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..h.n() {
        if used.contains(w) || h_deg[w] < f_deg[v] {
            continue;
        }
        phi[v] = w;
        let ok = checks[depth]
            .iter()
            .all(|e| h.contains(e.iter().map(|x| phi[x]).collect()));
        if ok {
            used.insert(w);
            if extend(depth + 1, order, checks, f_deg, h_deg, h, phi, used) {
                return true;
            }
            used.remove(w);
        }
    }
    phi[v] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::turan_hypergraph;

    #[test]
    fn spec_examples() {
        let f = Hypergraph::from_lists(3, 3, &[&[0, 1, 2]]).unwrap();
        let h = Hypergraph::from_lists(6, 3, &[&[3, 4, 5]]).unwrap();
        assert!(is_subgraph(&f, &h).unwrap());

        let two = Hypergraph::from_lists(6, 3, &[&[0, 1, 2], &[3, 4, 5]]).unwrap();
        let one = Hypergraph::from_lists(6, 3, &[&[0, 1, 2]]).unwrap();
        assert!(!is_subgraph(&two, &one).unwrap());

        let t6 = turan_hypergraph(6, 3, 3).unwrap();
        let t9 = turan_hypergraph(9, 3, 3).unwrap();
        let phi = find_embedding(&t6, &t9).unwrap().expect("embeds");
        for e in t6.edges() {
            assert!(t9.contains(e.iter().map(|v| phi[v]).collect()));
        }
        assert!(!is_subgraph(&t9, &t6).unwrap());
    }

    #[test]
    fn mismatched_uniformity_rejected() {
        let g = Hypergraph::from_lists(3, 2, &[&[0, 1]]).unwrap();
        let h = Hypergraph::from_lists(3, 3, &[&[0, 1, 2]]).unwrap();
        assert!(is_subgraph(&g, &h).is_err());
    }

    #[test]
    fn triangle_not_in_bipartite() {
        let tri = Hypergraph::from_lists(3, 2, &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
        let c4 = Hypergraph::from_lists(4, 2, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]).unwrap();
        assert!(!is_subgraph(&tri, &c4).unwrap());
        let p3 = Hypergraph::from_lists(4, 2, &[&[0, 1], &[1, 2]]).unwrap();
        assert!(is_subgraph(&p3, &c4).unwrap());
    }
}
