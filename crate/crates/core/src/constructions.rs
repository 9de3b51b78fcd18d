//! Named extremal objects and seeded instance generators.

use std::collections::BTreeMap;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::{canonical_form_with_ceiling, CanonicalForm};
use crate::checkers::incremental::{CancellativeState, KFreeState};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::{binomial, k_subsets, VertexSet};

/// Blocks of sizes `⌈n/ℓ⌉` then `⌊n/ℓ⌋`, consecutive labels, larger blocks
/// on the lowest labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedPartition {
    pub blocks: Vec<VertexSet>,
}

impl BalancedPartition {
    pub fn new(n: usize, parts: usize) -> Result<Self> {
        if parts == 0 {
            return Err(Error::InvalidParameter("number of parts must be positive".into()));
        }
        let base = n / parts;
        let extra = n % parts;
        let mut blocks = Vec::with_capacity(parts);
        let mut next = 0;
        for i in 0..parts {
            let size = base + usize::from(i < extra);
            blocks.push((next..next + size).collect());
            next += size;
        }
        Ok(BalancedPartition { blocks })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    /// Block index of every vertex.
    pub fn block_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for v in b.iter() {
                out[v] = i;
            }
        }
        out
    }
}

fn check_turan_params(n: usize, r: usize, ell: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    if ell < r {
        return Err(Error::InvalidParameter(format!(
            "need ell >= r (got ell = {ell}, r = {r}): no transversal r-set exists otherwise"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

/// `T_r(n, ℓ)`: every `r`-set meeting each balanced block at most once.
pub fn turan_hypergraph(n: usize, r: usize, ell: usize) -> Result<Hypergraph> {
    check_turan_params(n, r, ell)?;
    let part = BalancedPartition::new(n, ell)?;
    let mut edges = Vec::new();
    // pick r blocks, then one vertex from each
    for chosen in k_subsets(ell, r) {
        let blocks: Vec<VertexSet> = chosen.iter().map(|i| part.blocks[i]).collect();
        let mut stack: Vec<(usize, VertexSet)> = vec![(0, VertexSet::EMPTY)];
        while let Some((depth, acc)) = stack.pop() {
            if depth == blocks.len() {
                edges.push(acc);
                continue;
            }
            for v in blocks[depth].iter() {
                stack.push((depth + 1, acc.with(v)));
            }
        }
    }
    Hypergraph::new(n, r, edges)
}

/// `t_r(n, ℓ)`: the elementary symmetric polynomial `e_r` of the balanced
/// block sizes.
pub fn turan_count(n: usize, r: usize, ell: usize) -> Result<u128> {
    check_turan_params(n, r, ell)?;
    let sizes = BalancedPartition::new(n, ell)?.sizes();
    Ok(elementary_symmetric(&sizes, r))
}

pub(crate) fn elementary_symmetric(values: &[usize], k: usize) -> u128 {
    let mut e = vec![0u128; k + 1];
    e[0] = 1;
    for &x in values {
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * x as u128;
        }
    }
    e[k]
}

/// A forbidden family of same-uniformity hypergraphs.
#[derive(Clone, Debug, Serialize)]
pub struct ForbiddenFamily {
    pub name: String,
    pub r: usize,
    #[serde(skip)]
    pub members: Vec<Hypergraph>,
}

/// Largest member vertex count that [`k_family`] will enumerate.
pub const K_FAMILY_VERTEX_LIMIT: usize = 16;

/// Inclusion-minimal members of `𝒦^{(r)}_{ℓ+1}`, up to isomorphism.
///
/// A hypergraph contains a member of the family iff it contains one of the
/// minimal members, so these are the ones embedding tests need. Members are
/// returned in canonical-code order.
pub fn k_family(r: usize, ell: usize) -> Result<ForbiddenFamily> {
    let bound = ell + 1 + binomial(ell as u64 + 1, 2) as usize * r.saturating_sub(2);
    k_family_within(r, ell, bound)
}

/// As [`k_family`], keeping only members with at most `max_vertices`
/// vertices.
pub fn k_family_within(r: usize, ell: usize, max_vertices: usize) -> Result<ForbiddenFamily> {
    if !(2..=4).contains(&r) || !(2..=4).contains(&ell) {
        return Err(Error::InvalidParameter(format!(
            "k_family enumerates only 2 <= r <= 4 and 2 <= ell <= 4 (got r = {r}, ell = {ell})"
        )));
    }
    if max_vertices > K_FAMILY_VERTEX_LIMIT {
        return Err(Error::TooLarge {
            what: "k_family member vertex bound",
            value: max_vertices,
            limit: K_FAMILY_VERTEX_LIMIT,
        });
    }
    let core = ell + 1;
    let mut found: BTreeMap<CanonicalForm, Hypergraph> = BTreeMap::new();
    if core <= max_vertices {
        let pairs: Vec<(usize, usize)> = (0..core)
            .flat_map(|a| (a + 1..core).map(move |b| (a, b)))
            .collect();
        let mut ctx = FamilyEnum {
            r,
            ell,
            core,
            max_vertices,
            pairs,
            found: &mut found,
        };
        ctx.grow(&mut Vec::new(), core)?;
    }
    Ok(ForbiddenFamily {
        name: format!("K^({r})_{}", ell + 1),
        r,
        members: found.into_values().collect(),
    })
}

struct FamilyEnum<'a> {
    r: usize,
    ell: usize,
    core: usize,
    max_vertices: usize,
    pairs: Vec<(usize, usize)>,
    found: &'a mut BTreeMap<CanonicalForm, Hypergraph>,
}

impl FamilyEnum<'_> {
    fn grow(&mut self, edges: &mut Vec<VertexSet>, next_fresh: usize) -> Result<()> {
        let uncovered = self
            .pairs
            .iter()
            .copied()
            .find(|&(a, b)| !edges.iter().any(|e| e.contains(a) && e.contains(b)));
        let Some((a, b)) = uncovered else {
            return self.record(edges, next_fresh);
        };
        let extra_needed = self.r - 2;
        let existing: Vec<usize> = (0..next_fresh).filter(|&v| v != a && v != b).collect();
        for fresh in 0..=extra_needed {
            if next_fresh + fresh > self.max_vertices {
                break;
            }
            let reuse = extra_needed - fresh;
            if reuse > existing.len() {
                continue;
            }
            for pick in k_subsets(existing.len(), reuse) {
                let mut e = VertexSet::pair(a, b);
                for i in pick.iter() {
                    e.insert(existing[i]);
                }
                for j in 0..fresh {
                    e.insert(next_fresh + j);
                }
                if edges.contains(&e) {
                    continue;
                }
                edges.push(e);
                self.grow(edges, next_fresh + fresh)?;
                edges.pop();
            }
        }
        Ok(())
    }

    fn record(&mut self, edges: &[VertexSet], vertex_count: usize) -> Result<()> {
        let minimal = (0..edges.len()).all(|skip| {
            let rest: Vec<VertexSet> = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, e)| *e)
                .collect();
            !covers_some_clique(vertex_count, &rest, self.ell + 1)
        });
        if !minimal {
            return Ok(());
        }
        debug_assert!(self.core <= vertex_count);
        let f = Hypergraph::new(vertex_count, self.r, edges.iter().copied())?;
        let code = canonical_form_with_ceiling(&f, K_FAMILY_VERTEX_LIMIT)?;
        self.found.entry(code).or_insert(f);
        Ok(())
    }
}

fn covers_some_clique(n: usize, edges: &[VertexSet], q: usize) -> bool {
    let mut adj = vec![VertexSet::EMPTY; n];
    for e in edges {
        for a in e.iter() {
            adj[a] = adj[a].union(e.without(a));
        }
    }
    crate::cliques::has_clique_in(&adj, VertexSet::full(n), q)
}

/// What [`perturb`] may add.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AddPolicy {
    Any,
    /// Only r-sets that keep a 3-graph cancellative.
    KeepCancellative,
    /// Only r-sets that keep the hypergraph `𝒦_{ℓ+1}`-free.
    KeepKFree(usize),
}

/// Deletes `⌊fraction · |H|⌋` uniformly chosen edges, then adds `add_count`
/// uniformly chosen absent r-sets allowed by `policy`. Stops adding early
/// when no allowed r-set remains.
pub fn perturb(
    h: &Hypergraph,
    delete_fraction: f64,
    add_count: usize,
    seed: u64,
    policy: AddPolicy,
) -> Result<Hypergraph> {
    if !(0.0..=1.0).contains(&delete_fraction) {
        return Err(Error::InvalidParameter(format!(
            "delete fraction must lie in [0, 1], got {delete_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = h.len();
    // tolerance keeps e.g. 0.29 * 100 from flooring to 28
    let delete = ((delete_fraction * m as f64) + 1e-9).floor() as usize;
    let delete = delete.min(m);
    let mut doomed = vec![false; m];
    for i in index::sample(&mut rng, m, delete).into_iter() {
        doomed[i] = true;
    }
    let mut edges: Vec<VertexSet> = h
        .edges()
        .iter()
        .zip(&doomed)
        .filter(|(_, &d)| !d)
        .map(|(e, _)| *e)
        .collect();

    if add_count > 0 {
        let current = Hypergraph::from_sorted_unchecked(h.n(), h.r(), edges.clone());
        let mut gate = AddGate::new(&current, policy)?;
        let universe = binomial(h.n() as u64, h.r() as u64);
        let mut present: std::collections::HashSet<VertexSet> = edges.iter().copied().collect();
        if universe <= 2_000_000 {
            let all = k_subsets(h.n(), h.r());
            for _ in 0..add_count {
                let eligible: Vec<VertexSet> = all
                    .iter()
                    .copied()
                    .filter(|e| !present.contains(e) && gate.allows(*e))
                    .collect();
                let Some(&pick) = eligible.choose(&mut rng) else {
                    log::warn!("perturb: no admissible r-set left to add");
                    break;
                };
                gate.add(pick);
                present.insert(pick);
                edges.push(pick);
            }
        } else {
            let mut added = 0;
            let mut attempts = 0usize;
            while added < add_count && attempts < 10_000 + 1_000 * add_count {
                attempts += 1;
                let e: VertexSet = index::sample(&mut rng, h.n(), h.r()).into_iter().collect();
                if present.contains(&e) || !gate.allows(e) {
                    continue;
                }
                gate.add(e);
                present.insert(e);
                edges.push(e);
                added += 1;
            }
            if added < add_count {
                log::warn!("perturb: placed only {added} of {add_count} additions");
            }
        }
    }
    Ok(Hypergraph::from_unsorted_unchecked(h.n(), h.r(), edges))
}

enum AddGate {
    Any,
    Cancellative(CancellativeState),
    KFree(KFreeState),
}

impl AddGate {
    fn new(h: &Hypergraph, policy: AddPolicy) -> Result<Self> {
        Ok(match policy {
            AddPolicy::Any => AddGate::Any,
            AddPolicy::KeepCancellative => {
                if h.r() != 3 {
                    return Err(Error::InvalidParameter(
                        "cancellative add policy requires r = 3".into(),
                    ));
                }
                let mut st = CancellativeState::new(h.n());
                for &e in h.edges() {
                    st.add(e);
                }
                AddGate::Cancellative(st)
            }
            AddPolicy::KeepKFree(ell) => {
                let mut st = KFreeState::new(h.n(), ell);
                for &e in h.edges() {
                    st.add(e);
                }
                AddGate::KFree(st)
            }
        })
    }

    fn allows(&self, e: VertexSet) -> bool {
        match self {
            AddGate::Any => true,
            AddGate::Cancellative(st) => st.can_add(e),
            AddGate::KFree(st) => st.can_add(e),
        }
    }

    fn add(&mut self, e: VertexSet) {
        match self {
            AddGate::Any => {}
            AddGate::Cancellative(st) => st.add(e),
            AddGate::KFree(st) => st.add(e),
        }
    }
}

/// Greedy insertion of all triples in a seeded random order, keeping the
/// 3-graph cancellative. The result is maximal.
pub fn random_maximal_cancellative(n: usize, seed: u64) -> Result<Hypergraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = k_subsets(n, 3);
    triples.shuffle(&mut rng);
    let mut st = CancellativeState::new(n);
    let mut edges = Vec::new();
    for e in triples {
        if st.can_add(e) {
            st.add(e);
            edges.push(e);
        }
    }
    Ok(Hypergraph::from_unsorted_unchecked(n, 3, edges))
}

/// A triangle-free graph with `⌊(1/4 − ε)n²⌋` edges near
/// `K_{⌈n/2⌉,⌊n/2⌋}`.
///
/// `noise` in `[0, 1]` is the share of the edge deficit spent on inserting
/// edges inside the two sides (each insertion deletes cross edges to the
/// common neighbors to stay triangle-free); the rest of the deficit is
/// removed as uniformly random cross edges.
pub fn random_triangle_free_near_bipartite(
    n: usize,
    epsilon: f64,
    noise: f64,
    seed: u64,
) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::InvalidParameter(format!("noise must lie in [0, 1], got {noise}")));
    }
    let max_edges = (n * n) / 4;
    let raw_target = (0.25 - epsilon) * (n * n) as f64;
    if !(raw_target.is_finite()) || raw_target < -1e-9 || raw_target.floor() as i64 > max_edges as i64 {
        return Err(Error::InvalidParameter(format!(
            "target edge count (1/4 - {epsilon})·{n}² is infeasible for a triangle-free graph"
        )));
    }
    let target = ((raw_target + 1e-9).floor() as usize).min(max_edges);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let big = n.div_ceil(2);
    let side_a = VertexSet::full(big);
    let side_b = VertexSet::full(n).difference(side_a);
    let mut adj = vec![VertexSet::EMPTY; n];
    for a in side_a.iter() {
        adj[a] = side_b;
    }
    for b in side_b.iter() {
        adj[b] = side_a;
    }
    let mut count = big * (n - big);

    let internal_budget = (noise * (count - target) as f64).round() as usize;
    let floor_after_noise = count - internal_budget;
    let mut attempts = 0;
    while count > floor_after_noise && attempts < 50 * n {
        attempts += 1;
        let side = if rng.gen_bool(0.5) { side_a } else { side_b };
        if side.len() < 2 {
            continue;
        }
        let members = side.to_vec();
        let pick = index::sample(&mut rng, members.len(), 2);
        let (a, b) = (members[pick.index(0)], members[pick.index(1)]);
        if adj[a].contains(b) {
            continue;
        }
        let common = adj[a].intersection(adj[b]);
        if count + 1 < target + common.len() {
            continue;
        }
        for w in common.iter() {
            let x = if rng.gen_bool(0.5) { a } else { b };
            adj[x].remove(w);
            adj[w].remove(x);
        }
        adj[a].insert(b);
        adj[b].insert(a);
        count = count + 1 - common.len();
    }

    if count > target {
        let cross: Vec<(usize, usize)> = side_a
            .iter()
            .flat_map(|a| adj[a].intersection(side_b).iter().map(move |b| (a, b)))
            .collect();
        let drop = (count - target).min(cross.len());
        for i in index::sample(&mut rng, cross.len(), drop).into_iter() {
            let (a, b) = cross[i];
            adj[a].remove(b);
            adj[b].remove(a);
        }
        count -= drop;
    }
    debug_assert_eq!(count, adj.iter().map(|s| s.len()).sum::<usize>() / 2);
    let g = Hypergraph::from_adjacency(&adj);
    debug_assert!(!crate::cliques::contains_clique(&g, 3).unwrap());
    Ok(g)
}
