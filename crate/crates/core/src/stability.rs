//! Stability partitions for near-extremal inputs and the ε–δ measurements
//! around them.

use std::cmp::Reverse;

use rayon::prelude::*;
use serde::Serialize;

use crate::checkers::{find_cancellative_violation, find_k_clique_in_shadow_graph};
use crate::cliques::{cliques_through_edge, count_cliques, find_clique_in, has_clique_in};
use crate::constructions::{
    perturb, random_triangle_free_near_bipartite, turan_count, turan_hypergraph, AddPolicy,
};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, OrderedPair, TripleIndex};
use crate::partition::Partition;
use crate::search::cut::{max_ell_cut, CutMode};
use crate::vertex_set::VertexSet;

/// Seed for the local-search restarts inside the extractors.
pub const CUT_SEED: u64 = 0;

/// The choices made by the cancellative extractor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessChain {
    pub t: VertexSet,
    pub t_degree: usize,
    /// `Σ_{(u,v) ∈ N²(T)} |L(u,v)| / (d²(T)·((n − d(T))/2)²)`.
    pub score: f64,
    pub pair: OrderedPair,
    pub link_size: usize,
    /// The link edge `{x, y}`; absent when the link is edgeless.
    pub x: Option<usize>,
    pub y: Option<usize>,
    pub degenerate: bool,
    pub link_avoids_t_neighborhood: bool,
    pub v2_v3_disjoint: bool,
    pub v2_independent: bool,
    pub v3_independent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub method: String,
    pub n: usize,
    pub r: usize,
    pub ell: usize,
    pub edges: usize,
    /// The extremal count ε is measured against.
    pub target: u128,
    pub epsilon: f64,
    pub delta: f64,
    pub bad_edges: usize,
    pub partition: Partition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_mode: Option<CutMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_chain: Option<WitnessChain>,
    /// Edges dropped to destroy every `K_{ℓ+1}` (generalized pipeline).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub removed_edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cliques_after_removal: Option<u128>,
}

fn power(n: usize, r: usize) -> f64 {
    (n as f64).powi(r as i32)
}

/// `1 − count/target`, with one rounding.
fn deficit(count: u128, target: u128) -> f64 {
    if target == 0 {
        return 0.0;
    }
    (target as f64 - count as f64) / target as f64
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// The k-free extractor's target `δ ≤ ε / (r − 2)!`.
pub fn kfree_delta_bound(epsilon: f64, r: usize) -> f64 {
    epsilon / factorial(r.saturating_sub(2)) as f64
}

/// `𝒦_{ℓ+1}`-free input: max ℓ-cut of the auxiliary graph, then count the
/// edges of `H` with two vertices in one block.
pub fn extract_partition_kfree(h: &Hypergraph, ell: usize) -> Result<StabilityReport> {
    if let Some(s) = find_k_clique_in_shadow_graph(h, ell)? {
        return Err(Error::Precondition(format!(
            "input is not K_{}-free: every pair of {s:?} is covered",
            ell + 1
        )));
    }
    let n = h.n();
    let g = h.auxiliary_graph();
    let mode = CutMode::auto(n);
    let cut = max_ell_cut(&g, ell, mode, CUT_SEED)?;
    let bad = cut.partition.bad_edges(h).len();
    let target = turan_count(n, h.r(), ell)?;
    Ok(StabilityReport {
        method: "kfree".into(),
        n,
        r: h.r(),
        ell,
        edges: h.len(),
        target,
        epsilon: deficit(h.len() as u128, target),
        delta: bad as f64 / power(n, h.r()),
        bad_edges: bad,
        partition: cut.partition,
        cut_mode: Some(mode),
        witness_chain: None,
        removed_edges: None,
        cliques_after_removal: None,
    })
}

/// Cancellative 3-graph: pick the shadow pair with the best normalized link
/// mass, the heaviest pair in its neighborhood, the heaviest edge `{x, y}` of
/// that pair's link, and split by the link neighborhoods of `x` and `y`.
pub fn extract_partition_cancellative(h: &Hypergraph) -> Result<StabilityReport> {
    if let Some(w) = find_cancellative_violation(h)? {
        return Err(Error::Precondition(format!(
            "input is not cancellative: {:?}, {:?}, {:?}",
            w.a, w.b, w.c
        )));
    }
    let shadow = h.shadow();
    if shadow.is_empty() {
        return Err(Error::Precondition("empty shadow: nothing to extract from".into()));
    }
    let n = h.n();
    let idx = TripleIndex::new(h)?;

    struct Scored {
        t: VertexSet,
        nbhd: VertexSet,
        mass: u128,
    }
    let scored: Vec<Scored> = shadow
        .par_iter()
        .map(|&t| {
            let ab = t.to_vec();
            let nbhd = idx.neighborhood(ab[0], ab[1]);
            let mut mass = 0u128;
            for u in nbhd.iter() {
                for v in nbhd.iter() {
                    mass += idx.pair_link_size(u, v) as u128;
                }
            }
            Scored { t, nbhd, mass }
        })
        .collect();
    // score = 4·mass / (d²(n − d)²); compared by cross-multiplication
    let denom = |s: &Scored| {
        let d = s.nbhd.len() as u128;
        let rest = (n as u128) - d;
        d * d * rest * rest
    };
    let best = scored
        .iter()
        .reduce(|a, b| {
            let (lhs, rhs) = (b.mass * denom(a), a.mass * denom(b));
            let b_wins = rhs < lhs
                || (rhs == lhs
                    && (b.nbhd.len() > a.nbhd.len()
                        || (b.nbhd.len() == a.nbhd.len() && b.t.to_vec() < a.t.to_vec())));
            if b_wins {
                b
            } else {
                a
            }
        })
        .unwrap();
    let d = best.nbhd.len();
    let score = 4.0 * best.mass as f64 / denom(best) as f64;

    let mut pair = (usize::MAX, usize::MAX, 0usize);
    for u in best.nbhd.iter() {
        for v in best.nbhd.iter() {
            let size = idx.pair_link_size(u, v);
            if pair.0 == usize::MAX || size > pair.2 {
                pair = (u, v, size);
            }
        }
    }
    let (u, v, link_size) = pair;
    let link = idx.pair_link_adjacency(u, v);
    let support: VertexSet = (0..n).filter(|&a| !link[a].is_empty()).collect();

    let mut xy: Option<(usize, usize)> = None;
    let mut best_sum = 0;
    for x in 0..n {
        for y in link[x].iter().filter(|&y| y > x) {
            let sum = link[x].len() + link[y].len();
            if xy.is_none() || sum > best_sum {
                xy = Some((x, y));
                best_sum = sum;
            }
        }
    }
    let (v2, v3, degenerate) = match xy {
        Some((x, y)) => (link[x], link[y], false),
        // No link edge: fall back to the link's vertices against the rest.
        None => (support, VertexSet::EMPTY, true),
    };
    let v1 = VertexSet::full(n).difference(v2.union(v3));
    let independent = |s: VertexSet| h.edges().iter().all(|e| e.intersection(s).len() < 2);
    let chain = WitnessChain {
        t: best.t,
        t_degree: d,
        score,
        pair: OrderedPair::new(u, v),
        link_size,
        x: xy.map(|p| p.0),
        y: xy.map(|p| p.1),
        degenerate,
        link_avoids_t_neighborhood: support.is_disjoint(best.nbhd),
        v2_v3_disjoint: v2.is_disjoint(v3),
        v2_independent: independent(v2),
        v3_independent: independent(v3),
    };
    // a partition needs disjoint blocks; overlap would mean H is not cancellative
    let partition = Partition::new(n, vec![v1, v2, v3.difference(v2)])?;
    let bad = partition.bad_edges(h).len();
    let target = turan_count(n, 3, 3)?;
    Ok(StabilityReport {
        method: "cancellative".into(),
        n,
        r: 3,
        ell: 3,
        edges: h.len(),
        target,
        epsilon: deficit(h.len() as u128, target),
        delta: bad as f64 / power(n, 3),
        bad_edges: bad,
        partition,
        cut_mode: None,
        witness_chain: Some(chain),
        removed_edges: None,
        cliques_after_removal: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeNeighborhoods {
    pub x: usize,
    pub y: usize,
    pub nx: VertexSet,
    pub ny: VertexSet,
    pub degree_sum: usize,
    /// `N(x) ∩ N(y) = ∅`.
    pub disjoint: bool,
    /// `d(x) + d(y) ≥ 4|E|/n`.
    pub meets_average: bool,
}

/// An edge of a triangle-free graph with the largest degree sum.
pub fn lemma25_pair(g: &Hypergraph) -> Result<EdgeNeighborhoods> {
    let adj = g.adjacency()?;
    if let Some(t) = find_clique_in(&adj, g.vertices(), 3) {
        return Err(Error::Precondition(format!("graph has a triangle {t:?}")));
    }
    let (x, y) = g
        .edges()
        .iter()
        .map(|e| (e.first().unwrap(), e.last().unwrap()))
        .min_by_key(|&(a, b)| (Reverse(adj[a].len() + adj[b].len()), a, b))
        .ok_or_else(|| Error::Precondition("graph has no edges".into()))?;
    let degree_sum = adj[x].len() + adj[y].len();
    let pair = EdgeNeighborhoods {
        x,
        y,
        nx: adj[x],
        ny: adj[y],
        degree_sum,
        disjoint: adj[x].is_disjoint(adj[y]),
        meets_average: g.n() * degree_sum >= 4 * g.len(),
    };
    assert!(pair.disjoint && pair.meets_average);
    Ok(pair)
}

/// Repeatedly deletes an edge lying in the most `K_{ℓ+1}` copies (ties to
/// the lexicographically first edge) until none is left.
pub fn greedy_clique_removal(g: &Hypergraph, ell: usize) -> Result<(Hypergraph, Vec<VertexSet>)> {
    let mut adj = g.adjacency()?;
    let q = ell + 1;
    let mut removed = Vec::new();
    while has_clique_in(&adj, g.vertices(), q) {
        let mut pick: Option<(u128, usize, usize)> = None;
        for a in 0..g.n() {
            for b in adj[a].iter().filter(|&b| b > a) {
                let c = cliques_through_edge(&adj, a, b, q);
                if c > 0 && pick.is_none_or(|(best, _, _)| c > best) {
                    pick = Some((c, a, b));
                }
            }
        }
        let (_, a, b) = pick.expect("a clique has edges");
        adj[a].remove(b);
        adj[b].remove(a);
        removed.push(VertexSet::pair(a, b));
    }
    let mut kept = Hypergraph::from_adjacency(&adj);
    if kept.n() != g.n() {
        kept = kept.with_vertex_count(g.n())?;
    }
    Ok((kept, removed))
}

/// Graph with many `K_r` copies: strip the `K_{ℓ+1}` copies greedily, cut
/// what is left into ℓ blocks, and count edges of the original graph inside
/// blocks.
pub fn extract_partition_generalized(g: &Hypergraph, ell: usize, r: usize) -> Result<StabilityReport> {
    if r < 3 || ell < r {
        return Err(Error::InvalidParameter(format!(
            "generalized pipeline needs ell >= r >= 3 (got ell = {ell}, r = {r})"
        )));
    }
    let n = g.n();
    let (kept, removed) = greedy_clique_removal(g, ell)?;
    let cliques = count_cliques(&kept, r)?;
    let target = turan_count(n, r, ell)?;
    let mode = CutMode::auto(n);
    let cut = max_ell_cut(&kept, ell, mode, CUT_SEED)?;
    let bad = cut.partition.bad_edges(g).len();
    Ok(StabilityReport {
        method: "generalized".into(),
        n,
        r,
        ell,
        edges: g.len(),
        target,
        epsilon: deficit(cliques, target),
        delta: bad as f64 / power(n, 2),
        bad_edges: bad,
        partition: cut.partition,
        cut_mode: Some(mode),
        witness_chain: None,
        removed_edges: Some(removed.len()),
        cliques_after_removal: Some(cliques),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: i128,
    pub rhs: i128,
    pub holds: bool,
}

impl InequalityCheck {
    /// `lhs ≤ rhs`.
    fn at_most(name: &str, lhs: i128, rhs: i128) -> Self {
        InequalityCheck {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteDistanceReport {
    pub n: usize,
    pub edges: usize,
    /// `[V_1, V_2]` with `V_1` the side holding more bad edges.
    pub partition: Partition,
    pub bad_edges: Vec<VertexSet>,
    pub bad_count: usize,
    pub missing_pairs: Vec<VertexSet>,
    pub missing_count: usize,
    /// Bad edges inside `V_1`.
    pub b1_count: usize,
    /// `Δ = max_{v ∈ V_1} d_1(v)` and a vertex attaining it.
    pub max_inner_degree: usize,
    pub max_inner_vertex: Option<usize>,
    /// 1 when `Δ ≥ δ^{1/3} n`, else 2.
    pub case: u8,
    pub matching: Vec<VertexSet>,
    pub epsilon: f64,
    pub delta: f64,
    pub inequalities: Vec<InequalityCheck>,
    /// The display `|M| ≥ (Δn)²` read literally; reported, not certified.
    pub literal_case1_bound: u128,
    pub literal_case1_holds: bool,
    pub all_hold: bool,
}

/// Distance of a triangle-free graph from its best bipartite split, with
/// the inequalities of both cases checked on the instance.
pub fn bipartite_distance_analysis(g: &Hypergraph) -> Result<BipartiteDistanceReport> {
    let adj = g.adjacency()?;
    if let Some(t) = find_clique_in(&adj, g.vertices(), 3) {
        return Err(Error::Precondition(format!("graph has a triangle {t:?}")));
    }
    let n = g.n();
    let cut = max_ell_cut(g, 2, CutMode::auto(n), CUT_SEED)?;
    let blocks = &cut.partition.blocks;
    let inner = |b: VertexSet| g.edges().iter().filter(|e| e.is_subset(b)).count();
    let (v1, v2) = if inner(blocks[1]) > inner(blocks[0]) {
        (blocks[1], blocks[0])
    } else {
        (blocks[0], blocks[1])
    };
    let bad: Vec<VertexSet> = g.bad_edges(&[v1, v2]);
    let b1: Vec<VertexSet> = bad.iter().copied().filter(|e| e.is_subset(v1)).collect();
    let mut missing = Vec::new();
    for a in v1.iter() {
        for b in v2.difference(adj[a]).iter() {
            missing.push(VertexSet::pair(a, b));
        }
    }
    missing.sort();
    let m = missing.len() as i128;
    let (s1, s2) = (v1.len() as i128, v2.len() as i128);
    debug_assert_eq!(m, s1 * s2 - (g.len() - bad.len()) as i128);

    let own = |v: usize| {
        let side = if v1.contains(v) { v1 } else { v2 };
        adj[v].intersection(side).len()
    };
    let d1 = |v: usize| adj[v].intersection(v1).len();
    let d2 = |v: usize| adj[v].intersection(v2).len();
    let mut checks = Vec::new();

    // (a) local optimality, vertex by vertex
    let worst = (0..n)
        .map(|v| own(v) as i128 - (adj[v].len() - own(v)) as i128)
        .max()
        .unwrap_or(0);
    checks.push(InequalityCheck::at_most("(a) max_v d_own(v) - d_other(v) <= 0", worst, 0));

    // (b) the two neighborhoods of a max-degree vertex span only missing pairs
    let top = v1.iter().min_by_key(|&v| (Reverse(d1(v)), v));
    let delta_max = top.map_or(0, d1);
    if let Some(v) = top {
        let n1 = adj[v].intersection(v1);
        let n2 = adj[v].intersection(v2);
        let spanned_edges = n1
            .iter()
            .map(|a| adj[a].intersection(n2).len())
            .sum::<usize>() as i128;
        checks.push(InequalityCheck::at_most("(b) edges between N1(v) and N2(v) <= 0", spanned_edges, 0));
        let product = (n1.len() * n2.len()) as i128;
        checks.push(InequalityCheck::at_most("(b) d1(v) d2(v) <= |M|", product, m));
        checks.push(InequalityCheck::at_most(
            "(b) Delta^2 <= d1(v) d2(v)",
            (delta_max * delta_max) as i128,
            product,
        ));
    }

    // (c) greedy matching inside V_1
    let mut matching = Vec::new();
    let mut covered = VertexSet::EMPTY;
    for &e in &b1 {
        if e.is_disjoint(covered) {
            matching.push(e);
            covered = covered.union(e);
        }
    }
    let mut worst_pair = i128::MIN;
    let mut matched_missing = 0i128;
    for e in &matching {
        let (a, b) = (e.first().unwrap(), e.last().unwrap());
        worst_pair = worst_pair.max((d2(a) + d2(b)) as i128 - s2);
        matched_missing += 2 * s2 - (d2(a) + d2(b)) as i128;
    }
    if !matching.is_empty() {
        checks.push(InequalityCheck::at_most(
            "(c) max_i d2(u_i) + d2(v_i) - |V2| <= 0",
            worst_pair,
            0,
        ));
    }
    checks.push(InequalityCheck::at_most(
        "(c) m |V2| <= sum_i (2|V2| - d2(u_i) - d2(v_i))",
        matching.len() as i128 * s2,
        matched_missing,
    ));
    checks.push(InequalityCheck::at_most(
        "(c) sum_i (2|V2| - d2(u_i) - d2(v_i)) <= |M|",
        matched_missing,
        m,
    ));
    if delta_max > 0 {
        // a maximal matching meets every edge; one matched edge meets at most 2Δ − 1
        checks.push(InequalityCheck::at_most(
            "(c) |B1| <= m (2 Delta - 1)",
            b1.len() as i128,
            matching.len() as i128 * (2 * delta_max as i128 - 1),
        ));
    }

    // (d) |M| ≤ (ε + δ) n², scaled by 4
    let nn = (n * n) as i128;
    checks.push(InequalityCheck::at_most(
        "(d) 4|M| <= n^2 - 4|E| + 4|B|",
        4 * m,
        nn - 4 * g.len() as i128 + 4 * bad.len() as i128,
    ));

    let literal = (delta_max as u128 * n as u128).pow(2);
    let case = if (delta_max as u128).pow(3) >= bad.len() as u128 * n as u128 && !bad.is_empty() {
        1
    } else {
        2
    };
    let all_hold = checks.iter().all(|c| c.holds);
    Ok(BipartiteDistanceReport {
        n,
        edges: g.len(),
        partition: Partition::new(n, vec![v1, v2])?,
        bad_count: bad.len(),
        bad_edges: bad.clone(),
        missing_count: missing.len(),
        missing_pairs: missing,
        b1_count: b1.len(),
        max_inner_degree: delta_max,
        max_inner_vertex: top,
        case,
        matching,
        epsilon: (nn - 4 * g.len() as i128) as f64 / (4 * nn) as f64,
        delta: bad.len() as f64 / nn as f64,
        inequalities: checks,
        literal_case1_bound: literal,
        literal_case1_holds: m as u128 >= literal,
        all_hold,
    })
}

/// Sizes below this only log a miss of the linear ε–δ law instead of
/// failing.
pub const LINEAR_LAW_MIN_N: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ScanKind {
    /// `perturb(T_3(n,3), f, 0, seed)` through the cancellative extractor;
    /// law `δ ≤ 100 ε`.
    Cancellative { fractions: Vec<f64> },
    /// The same inputs through the k-free extractor with ℓ = 3; law
    /// `δ ≤ ε/(r − 2)!`.
    KFree { fractions: Vec<f64> },
    /// Generated triangle-free graphs through the bipartite analyzer.
    TriangleFree { epsilons: Vec<f64>, noise: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub seed: u64,
    /// Grid value: deletion fraction or target ε.
    pub parameter: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub bad_edges: usize,
    pub case: Option<u8>,
    /// The row breaks its law (or an inequality).
    pub violation: bool,
    /// Violations here fail a run; smaller n only logs them.
    pub enforced: bool,
}

pub const SCAN_HEADER: &str = "n,seed,epsilon,delta,bad_edges,case";

impl ScanRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.seed,
            self.epsilon,
            self.delta,
            self.bad_edges,
            self.case.map_or(String::new(), |c| c.to_string())
        )
    }
}

/// Laws compared with a little slack for floating-point rounding.
const LAW_SLACK: f64 = 1e-12;

fn scan_row(kind: &ScanKind, n: usize, parameter: f64, seed: u64) -> Result<ScanRow> {
    let enforced = n >= LINEAR_LAW_MIN_N;
    Ok(match kind {
        ScanKind::Cancellative { .. } | ScanKind::KFree { .. } => {
            let base = turan_hypergraph(n, 3, 3)?;
            let h = perturb(&base, parameter, 0, seed, AddPolicy::Any)?;
            let (report, limit) = if matches!(kind, ScanKind::Cancellative { .. }) {
                let rep = extract_partition_cancellative(&h)?;
                let limit = 100.0 * rep.epsilon;
                (rep, limit)
            } else {
                let rep = extract_partition_kfree(&h, 3)?;
                let limit = kfree_delta_bound(rep.epsilon, 3);
                (rep, limit)
            };
            ScanRow {
                n,
                seed,
                parameter,
                epsilon: report.epsilon,
                delta: report.delta,
                bad_edges: report.bad_edges,
                case: None,
                violation: report.delta > limit + LAW_SLACK,
                enforced,
            }
        }
        ScanKind::TriangleFree { noise, .. } => {
            let g = random_triangle_free_near_bipartite(n, parameter, *noise, seed)?;
            let rep = bipartite_distance_analysis(&g)?;
            ScanRow {
                n,
                seed,
                parameter,
                epsilon: rep.epsilon,
                delta: rep.delta,
                bad_edges: rep.bad_count,
                case: Some(rep.case),
                violation: !rep.all_hold,
                // the inequalities are unconditional
                enforced: true,
            }
        }
    })
}

/// One row per (n, grid value, seed), in that nesting order.
pub fn epsilon_delta_scan(kind: &ScanKind, ns: &[usize], seeds: &[u64]) -> Result<Vec<ScanRow>> {
    let grid: &[f64] = match kind {
        ScanKind::Cancellative { fractions } | ScanKind::KFree { fractions } => fractions,
        ScanKind::TriangleFree { epsilons, .. } => epsilons,
    };
    let jobs: Vec<(usize, f64, u64)> = ns
        .iter()
        .flat_map(|&n| grid.iter().flat_map(move |&p| seeds.iter().map(move |&s| (n, p, s))))
        .collect();
    let rows: Vec<ScanRow> = jobs
        .par_iter()
        .map(|&(n, p, s)| scan_row(kind, n, p, s))
        .collect::<Result<_>>()?;
    for row in rows.iter().filter(|r| r.violation) {
        if row.enforced {
            log::error!("law violated: {row:?}");
        } else {
            log::warn!("law missed below n = {LINEAR_LAW_MIN_N}: {row:?}");
        }
    }
    Ok(rows)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{random_maximal_cancellative, BalancedPartition};
    use crate::vertex_set::k_subsets;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Hypergraph {
        Hypergraph::new(n, 2, edges.iter().map(|&(a, b)| VertexSet::pair(a, b))).unwrap()
    }

    fn canonical_blocks(n: usize) -> Partition {
        Partition {
            blocks: BalancedPartition::new(n, 3).unwrap().blocks,
        }
    }

    #[test]
    fn kfree_examples() {
        let t = turan_hypergraph(9, 3, 3).unwrap();
        let rep = extract_partition_kfree(&t, 3).unwrap();
        assert_eq!(rep.bad_edges, 0);
        assert_eq!(rep.delta, 0.0);
        assert_eq!(rep.epsilon, 0.0);

        let p = perturb(&t, 0.1, 0, 7, AddPolicy::Any).unwrap();
        assert_eq!(p.len(), 25);
        assert_eq!(extract_partition_kfree(&p, 3).unwrap().bad_edges, 0);

        // two deletions then one triple inside a part pair
        let inside = VertexSet::from_iter([0, 1, 3]);
        let edited = t.edit(&t.edges()[..2], &[inside]).unwrap();
        if crate::checkers::is_k_free(&edited, 3).unwrap() {
            let rep = extract_partition_kfree(&edited, 3).unwrap();
            assert_eq!(rep.bad_edges, rep.partition.bad_edges(&edited).len());
        } else {
            assert!(matches!(extract_partition_kfree(&edited, 3), Err(Error::Precondition(_))));
        }
    }

    #[test]
    fn cancellative_recovers_turan_partition() {
        for n in 6..=15 {
            let t = turan_hypergraph(n, 3, 3).unwrap();
            let rep = extract_partition_cancellative(&t).unwrap();
            assert_eq!(rep.bad_edges, 0, "n = {n}");
            assert!(rep.partition.same_blocks(&canonical_blocks(n)), "n = {n}");
            let chain = rep.witness_chain.unwrap();
            assert!(chain.link_avoids_t_neighborhood && chain.v2_v3_disjoint);
            assert!(chain.v2_independent && chain.v3_independent);
        }
    }

    #[test]
    fn cancellative_single_triple() {
        let h = Hypergraph::from_lists(3, 3, &[&[0, 1, 2]]).unwrap();
        let rep = extract_partition_cancellative(&h).unwrap();
        assert!(rep.partition.covers(3));
        assert_eq!(rep.bad_edges, 0);
        let chain = rep.witness_chain.unwrap();
        assert!(!chain.degenerate);
        assert_eq!(chain.link_size, 1);
        assert!(matches!(
            extract_partition_cancellative(&Hypergraph::empty(4, 3).unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cancellative_invariants_on_random_inputs() {
        for seed in 0..40 {
            let h = random_maximal_cancellative(7 + (seed as usize % 6), seed).unwrap();
            let rep = extract_partition_cancellative(&h).unwrap();
            let chain = rep.witness_chain.as_ref().unwrap();
            assert!(chain.link_avoids_t_neighborhood);
            assert!(chain.v2_v3_disjoint && chain.v2_independent && chain.v3_independent);
            assert!(rep.partition.covers(h.n()));
            assert_eq!(rep.bad_edges, rep.partition.bad_edges(&h).len());
            assert_eq!(rep.delta, rep.bad_edges as f64 / (h.n() as f64).powi(3));
        }
    }

    #[test]
    fn heaviest_edge_examples() {
        let k33 = turan_hypergraph(6, 2, 2).unwrap();
        assert_eq!(lemma25_pair(&k33).unwrap().degree_sum, 6);
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        assert_eq!(lemma25_pair(&c5).unwrap().degree_sum, 4);
        let star = graph(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let p = lemma25_pair(&star).unwrap();
        assert_eq!(p.degree_sum, 6);
        assert_eq!(p.x, 0);
        assert!(lemma25_pair(&Hypergraph::empty(3, 2).unwrap()).is_err());
        assert!(lemma25_pair(&graph(3, &[(0, 1), (1, 2), (0, 2)])).is_err());
    }

    #[test]
    fn greedy_removal_examples() {
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        assert!(greedy_clique_removal(&c5, 3).unwrap().1.is_empty());

        let k4 = Hypergraph::new(4, 2, k_subsets(4, 2)).unwrap();
        let (kept, removed) = greedy_clique_removal(&k4, 3).unwrap();
        assert_eq!(removed.len(), 1);
        assert_eq!(kept.len(), 5);

        let mut two: Vec<VertexSet> = k_subsets(4, 2);
        two.extend(k_subsets(4, 2).into_iter().map(|e| e.iter().map(|v| v + 4).collect::<VertexSet>()));
        let g = Hypergraph::new(8, 2, two).unwrap();
        let (kept, removed) = greedy_clique_removal(&g, 3).unwrap();
        assert_eq!(removed.len(), 2);
        assert!(!crate::cliques::contains_clique(&kept, 4).unwrap());
    }

    #[test]
    fn generalized_examples() {
        let g = turan_hypergraph(9, 2, 3).unwrap();
        let rep = extract_partition_generalized(&g, 3, 3).unwrap();
        assert_eq!(rep.removed_edges, Some(0));
        assert_eq!(rep.bad_edges, 0);
        assert_eq!(rep.epsilon, 0.0);

        let k222 = turan_hypergraph(6, 2, 3).unwrap();
        let plus = k222.edit(&[], &[VertexSet::pair(0, 1)]).unwrap();
        assert!(extract_partition_generalized(&plus, 3, 3).unwrap().bad_edges <= 1);

        let empty = Hypergraph::empty(6, 2).unwrap();
        let rep = extract_partition_generalized(&empty, 3, 3).unwrap();
        assert_eq!((rep.epsilon, rep.delta), (1.0, 0.0));
        assert!(extract_partition_generalized(&empty, 2, 2).is_err());
    }

    #[test]
    fn bipartite_examples() {
        let k55 = turan_hypergraph(10, 2, 2).unwrap();
        let rep = bipartite_distance_analysis(&k55).unwrap();
        assert_eq!((rep.bad_count, rep.missing_count), (0, 0));
        assert_eq!((rep.epsilon, rep.delta), (0.0, 0.0));
        assert!(rep.all_hold);

        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let rep = bipartite_distance_analysis(&c5).unwrap();
        assert_eq!(rep.bad_count, 1);
        assert_eq!(rep.edges - rep.bad_count, 4);
        assert_eq!(rep.partition.blocks[0].len() * rep.partition.blocks[1].len() - 4, rep.missing_count);
        assert!(rep.all_hold, "{:?}", rep.inequalities);
        assert!(bipartite_distance_analysis(&graph(3, &[(0, 1), (1, 2), (0, 2)])).is_err());
    }

    #[test]
    fn bipartite_case_one_on_a_concentrated_star() {
        // vertex 0 carries all bad edges: 0 ~ 1..=5 inside, 0 ~ 10..=14 across
        let mut edges = Vec::new();
        for x in 1..=5 {
            edges.push((0, x));
            edges.extend((15..20).map(|y| (x, y)));
        }
        edges.extend((10..15).map(|y| (0, y)));
        for x in 6..10 {
            edges.extend((10..20).map(|y| (x, y)));
        }
        let g = graph(20, &edges);
        let rep = bipartite_distance_analysis(&g).unwrap();
        assert!(rep.all_hold, "{:?}", rep.inequalities);
        assert_eq!(rep.bad_count, 5);
        assert_eq!(rep.max_inner_degree, 5);
        assert_eq!(rep.case, 1);
    }

    #[test]
    fn bipartite_inequalities_on_generated_graphs() {
        for seed in 0..30 {
            for &eps in &[0.005, 0.02, 0.05] {
                let g = random_triangle_free_near_bipartite(40, eps, 0.5, seed).unwrap();
                let rep = bipartite_distance_analysis(&g).unwrap();
                assert!(rep.all_hold, "{:?}", rep.inequalities);
                assert_eq!(
                    rep.missing_count as i128,
                    (rep.partition.blocks[0].len() * rep.partition.blocks[1].len()) as i128
                        - (rep.edges - rep.bad_count) as i128
                );
            }
        }
    }

    #[test]
    fn scans_are_deterministic() {
        let kind = ScanKind::Cancellative { fractions: vec![0.0, 0.03] };
        let a = epsilon_delta_scan(&kind, &[15], &[1, 2]).unwrap();
        let b = epsilon_delta_scan(&kind, &[15], &[1, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert_eq!((a[0].epsilon, a[0].delta), (0.0, 0.0));
        let csv = scan_csv(&a);
        assert!(csv.starts_with("n,seed,epsilon,delta,bad_edges,case\n"));
        assert_eq!(csv.lines().count(), 5);

        let tf = ScanKind::TriangleFree { epsilons: vec![0.01, 0.02, 0.04], noise: 0.3 };
        let rows = epsilon_delta_scan(&tf, &[20], &[0]).unwrap();
        assert!(rows.iter().all(|r| !r.violation && r.case.is_some()));
    }
}
