//! Exact extremal numbers by exhaustive branch-and-bound.
//!
//! Nodes are edge sets `S` listed in increasing colex order; the children of
//! `S` add one compatible candidate beyond its last edge, so every edge set
//! is visited at most once. A node is cut when even adding every remaining
//! compatible candidate cannot reach the incumbent, or when some vertex
//! cannot reach the minimum degree an extremal graph must have. At shallow
//! depths only edge sets that are lexicographically least among their
//! relabelings are expanded; prefixes of a least labeling are least, so
//! every isomorphism class keeps a representative.

pub mod cut;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form_with_ceiling, is_isomorphic, CanonicalForm, DEFAULT_CANON_CEILING};
use crate::checkers::incremental::{CancellativeState, GeneralCancellativeState, KFreeState};
use crate::checkers::{is_cancellative, is_cancellative_general, is_k_free};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::{binomial, k_subsets, VertexSet};

pub use cut::{max_ell_cut, CutMode, CutResult, EXACT_CUT_LIMIT, LOCAL_RESTARTS};

pub const WITNESS_CAP: usize = 1000;
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000_000;

type CheckFn = dyn Fn(&Hypergraph) -> bool + Send + Sync;

/// A user-supplied edge-set property. Only hereditary properties (closed
/// under deleting edges) are accepted.
#[derive(Clone)]
pub struct CustomPredicate {
    name: String,
    check: Arc<CheckFn>,
}

impl CustomPredicate {
    pub fn new(
        name: &str,
        hereditary: bool,
        check: impl Fn(&Hypergraph) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        if !hereditary {
            return Err(Error::InvalidParameter(format!(
                "predicate '{name}' is not hereditary; the search bound would be unsound"
            )));
        }
        Ok(CustomPredicate {
            name: name.to_string(),
            check: Arc::new(check),
        })
    }
}

impl std::fmt::Debug for CustomPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CustomPredicate({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Predicate {
    /// 3-graphs only.
    Cancellative,
    /// The same definition for any uniformity.
    CancellativeGeneral,
    /// `𝒦_{ℓ+1}`-free.
    KFree(usize),
    /// Graphs without a triangle.
    TriangleFree,
    Custom(CustomPredicate),
}

impl Predicate {
    pub fn parse(name: &str, ell: Option<usize>) -> Result<Self> {
        Ok(match name {
            "cancellative" => Predicate::Cancellative,
            "cancellative-general" => Predicate::CancellativeGeneral,
            "triangle-free" => Predicate::TriangleFree,
            "k-free" => Predicate::KFree(ell.ok_or_else(|| {
                Error::InvalidParameter("predicate k-free needs --ell".into())
            })?),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown predicate '{other}'; expected cancellative, cancellative-general, k-free or triangle-free"
                )))
            }
        })
    }

    pub fn id(&self) -> String {
        match self {
            Predicate::Cancellative => "cancellative".into(),
            Predicate::CancellativeGeneral => "cancellative-general".into(),
            Predicate::KFree(_) => "k-free".into(),
            Predicate::TriangleFree => "triangle-free".into(),
            Predicate::Custom(c) => format!("custom:{}", c.name),
        }
    }

    pub fn ell(&self) -> Option<usize> {
        match self {
            Predicate::KFree(ell) => Some(*ell),
            _ => None,
        }
    }

    fn validate(&self, r: usize) -> Result<()> {
        match self {
            Predicate::Cancellative if r != 3 => Err(Error::InvalidParameter(format!(
                "cancellative search is for r = 3 (got {r}); use cancellative-general"
            ))),
            Predicate::TriangleFree if r != 2 => Err(Error::InvalidParameter(format!(
                "triangle-free search is for r = 2 (got {r})"
            ))),
            Predicate::KFree(ell) if *ell < r => Err(Error::InvalidParameter(format!(
                "k-free needs ell >= r (got ell = {ell}, r = {r})"
            ))),
            _ => Ok(()),
        }
    }

    pub fn holds(&self, h: &Hypergraph) -> Result<bool> {
        self.validate(h.r())?;
        match self {
            Predicate::Cancellative => is_cancellative(h),
            Predicate::CancellativeGeneral => Ok(is_cancellative_general(h)),
            Predicate::KFree(ell) => is_k_free(h, *ell),
            Predicate::TriangleFree => is_k_free(h, 2),
            Predicate::Custom(c) => Ok((c.check)(h)),
        }
    }

    /// Vertex-deletion bounds need the property to be invariant under
    /// relabeling and isolated vertices, which custom predicates need not be.
    fn supports_degree_bound(&self) -> bool {
        !matches!(self, Predicate::Custom(_))
    }

    fn state(&self, n: usize, r: usize) -> State {
        match self {
            Predicate::Cancellative => State::Cancellative(CancellativeState::new(n)),
            Predicate::CancellativeGeneral => State::General(GeneralCancellativeState::new()),
            Predicate::KFree(ell) => State::KFree(KFreeState::new(n, *ell)),
            Predicate::TriangleFree => State::KFree(KFreeState::new(n, 2)),
            Predicate::Custom(c) => State::Custom {
                check: c.check.clone(),
                n,
                r,
                edges: Vec::new(),
            },
        }
    }
}

#[derive(Clone)]
enum State {
    Cancellative(CancellativeState),
    General(GeneralCancellativeState),
    KFree(KFreeState),
    Custom {
        check: Arc<CheckFn>,
        n: usize,
        r: usize,
        edges: Vec<VertexSet>,
    },
}

impl State {
    fn can_add(&self, e: VertexSet) -> bool {
        match self {
            State::Cancellative(s) => s.can_add(e),
            State::General(s) => s.can_add(e),
            State::KFree(s) => s.can_add(e),
            State::Custom { check, n, r, edges } => {
                let mut with = edges.clone();
                with.push(e);
                check(&Hypergraph::from_unsorted_unchecked(*n, *r, with))
            }
        }
    }

    fn add(&mut self, e: VertexSet) {
        match self {
            State::Cancellative(s) => s.add(e),
            State::General(s) => s.add(e),
            State::KFree(s) => s.add(e),
            State::Custom { edges, .. } => edges.push(e),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateOrder {
    /// Children in colex order.
    #[default]
    Colex,
    /// Children touching high-degree vertices first; the tree is unchanged.
    DegreeGreedy,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub ordering: CandidateOrder,
    /// Depths (edge counts) at which non-least labelings are rejected.
    pub symmetry_depth: usize,
    /// Worker threads; 0 means one per available core.
    pub thread_count: usize,
    pub node_budget: u64,
    /// Refuse sizes beyond the desk-scale defaults (n ≤ 10 for graphs,
    /// C(n, r) ≤ 56 otherwise).
    pub size_guard: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            ordering: CandidateOrder::Colex,
            symmetry_depth: 3,
            thread_count: 0,
            node_budget: DEFAULT_NODE_BUDGET,
            size_guard: true,
        }
    }
}

/// Bookkeeping that varies between runs; kept out of the serialized record.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_explored: u64,
    pub runtime_seconds: f64,
    pub threads: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub r: usize,
    pub predicate: String,
    pub ell: Option<usize>,
    pub value: usize,
    pub extremal_classes: usize,
    /// One representative per class, in canonical order.
    pub witnesses: Vec<Hypergraph>,
    /// More than [`WITNESS_CAP`] classes exist; the count is a lower bound.
    pub witness_cap_hit: bool,
    #[serde(skip)]
    pub stats: SearchStats,
}

fn check_size(n: usize, r: usize, config: &SearchConfig) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    if n > crate::vertex_set::MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "n",
            value: n,
            limit: crate::vertex_set::MAX_VERTICES,
        });
    }
    if config.size_guard {
        let ok = if r == 2 { n <= 10 } else { binomial(n as u64, r as u64) <= 56 };
        if !ok {
            let limit = if r == 2 { 10 } else { 8 };
            return Err(Error::TooLarge {
                what: "n for exhaustive search",
                value: n,
                limit,
            });
        }
    }
    if config.node_budget == 0 {
        return Err(Error::InvalidParameter("node budget must be positive".into()));
    }
    Ok(())
}

/// `ex(n, predicate)` with every extremal isomorphism class.
pub fn extremal_number(
    n: usize,
    r: usize,
    predicate: &Predicate,
    config: &SearchConfig,
) -> Result<ExtremalRecord> {
    check_size(n, r, config)?;
    predicate.validate(r)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.thread_count)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let started = Instant::now();
    let nodes = AtomicU64::new(0);
    let (value, classes, cap_hit) = pool.install(|| -> Result<_> {
        let sub = smaller_value(n, r, predicate, config, &nodes)?;
        let run = run_search(n, r, predicate, config, sub, true, &nodes)?;
        Ok((run.value, run.classes, run.cap_hit))
    })?;
    let witnesses: Vec<Hypergraph> = classes.iter().map(CanonicalForm::to_hypergraph).collect();
    Ok(ExtremalRecord {
        n,
        r,
        predicate: predicate.id(),
        ell: predicate.ell(),
        value,
        extremal_classes: witnesses.len(),
        witnesses,
        witness_cap_hit: cap_hit,
        stats: SearchStats {
            nodes_explored: nodes.load(Ordering::Relaxed),
            runtime_seconds: started.elapsed().as_secs_f64(),
            threads: pool.current_num_threads(),
        },
    })
}

/// `ex(n − 1)`, used for the minimum-degree cut.
fn smaller_value(
    n: usize,
    r: usize,
    predicate: &Predicate,
    config: &SearchConfig,
    nodes: &AtomicU64,
) -> Result<Option<usize>> {
    if !predicate.supports_degree_bound() || n <= r {
        return Ok(None);
    }
    let sub = smaller_value(n - 1, r, predicate, config, nodes)?;
    Ok(Some(run_search(n - 1, r, predicate, config, sub, false, nodes)?.value))
}

/// True exactly when the sorted edge list `edges` is lexicographically
/// least among all of its relabelings.
pub fn is_least_labeling(edges: &[VertexSet]) -> bool {
    let used = edges.iter().fold(VertexSet::EMPTY, |a, &e| a.union(e));
    let k = used.len();
    if used != VertexSet::full(k) {
        return false;
    }
    // by_max[j]: edges whose largest vertex is j
    let mut by_max: Vec<Vec<VertexSet>> = vec![Vec::new(); k];
    for &e in edges {
        by_max[e.last().unwrap()].push(e);
    }
    let mut new_label = vec![usize::MAX; k];
    !smaller_relabeling_exists(edges, &by_max, &mut new_label, VertexSet::EMPTY, 0)
}

/// Labels `0..j` are placed. Edges inside the placed set sort before all
/// others, so each step appends one block of the code and can be compared
/// against the block of the original with the same largest label.
fn smaller_relabeling_exists(
    edges: &[VertexSet],
    by_max: &[Vec<VertexSet>],
    new_label: &mut [usize],
    placed: VertexSet,
    j: usize,
) -> bool {
    let k = new_label.len();
    if j == k {
        return false;
    }
    for v in 0..k {
        if placed.contains(v) {
            continue;
        }
        new_label[v] = j;
        let now = placed.with(v);
        let mut block: Vec<VertexSet> = edges
            .iter()
            .filter(|e| e.contains(v) && e.is_subset(now))
            .map(|e| e.iter().map(|x| new_label[x]).collect())
            .collect();
        block.sort_unstable();
        let reference = &by_max[j];
        let mut verdict = None;
        for (a, b) in block.iter().zip(reference) {
            if a != b {
                verdict = Some(a < b);
                break;
            }
        }
        let verdict = verdict.or(if block.len() > reference.len() {
            Some(true)
        } else if block.len() < reference.len() {
            Some(false)
        } else {
            None
        });
        match verdict {
            Some(true) => {
                new_label[v] = usize::MAX;
                return true;
            }
            Some(false) => {}
            None => {
                if smaller_relabeling_exists(edges, by_max, new_label, now, j + 1) {
                    new_label[v] = usize::MAX;
                    return true;
                }
            }
        }
        new_label[v] = usize::MAX;
    }
    false
}

struct Outcome {
    value: usize,
    classes: BTreeSet<CanonicalForm>,
    cap_hit: bool,
}

struct Shared<'a> {
    n: usize,
    cands: Vec<VertexSet>,
    config: &'a SearchConfig,
    best: AtomicUsize,
    nodes: &'a AtomicU64,
    budget_hit: AtomicBool,
    /// `ex(n − 1)` when known.
    sub_value: Option<usize>,
    collect: bool,
    witnesses: Mutex<(usize, BTreeSet<CanonicalForm>, bool)>,
}

#[derive(Clone)]
struct Node {
    chosen: Vec<usize>,
    state: State,
    degree: Vec<usize>,
    compat: Vec<usize>,
}

impl Shared<'_> {
    /// Size an extension of the current node must reach to matter.
    fn target(&self) -> usize {
        let best = self.best.load(Ordering::Relaxed);
        if self.collect {
            best
        } else {
            best + 1
        }
    }

    fn record(&self, node: &Node) {
        let size = node.chosen.len();
        if !self.collect {
            self.best.fetch_max(size, Ordering::Relaxed);
            return;
        }
        if size < self.best.load(Ordering::Relaxed) {
            return;
        }
        let edges: Vec<VertexSet> = node.chosen.iter().map(|&i| self.cands[i]).collect();
        let h = Hypergraph::from_sorted_unchecked(self.n, self.cands[0].len(), edges);
        let form = canonical_form_with_ceiling(&h, self.n.max(DEFAULT_CANON_CEILING))
            .expect("ceiling covers n");
        let mut acc = self.witnesses.lock().unwrap();
        if size > acc.0 {
            acc.0 = size;
            acc.1.clear();
            acc.2 = false;
        }
        if size == acc.0 {
            if acc.1.len() < WITNESS_CAP {
                acc.1.insert(form);
            } else if !acc.1.contains(&form) {
                acc.2 = true;
            }
        }
        self.best.fetch_max(size, Ordering::Relaxed);
    }

    /// Some vertex cannot reach the degree every extremal graph has.
    fn degree_cut(&self, node: &Node) -> bool {
        let Some(sub) = self.sub_value else { return false };
        let need = self.target().saturating_sub(sub);
        if need == 0 {
            return false;
        }
        let mut reach = node.degree.clone();
        for &j in &node.compat {
            for v in self.cands[j].iter() {
                reach[v] += 1;
            }
        }
        reach.iter().any(|&d| d < need)
    }

    fn tick(&self) -> bool {
        if self.budget_hit.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.config.node_budget {
            self.budget_hit.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn children(&self, node: &Node) -> Vec<(usize, usize)> {
        // (position in compat, candidate)
        let mut kids: Vec<(usize, usize)> = node.compat.iter().copied().enumerate().collect();
        if self.config.ordering == CandidateOrder::DegreeGreedy {
            kids.sort_by_key(|&(pos, c)| {
                let weight: usize = self.cands[c].iter().map(|v| node.degree[v]).sum();
                (std::cmp::Reverse(weight), pos)
            });
        }
        kids
    }

    fn child(&self, node: &Node, pos: usize, c: usize) -> Option<Node> {
        let remaining = node.compat.len() - pos - 1;
        if node.chosen.len() + 1 + remaining < self.target() {
            return None;
        }
        let mut chosen = node.chosen.clone();
        chosen.push(c);
        if chosen.len() <= self.config.symmetry_depth {
            let edges: Vec<VertexSet> = chosen.iter().map(|&i| self.cands[i]).collect();
            if !is_least_labeling(&edges) {
                return None;
            }
        }
        let mut state = node.state.clone();
        state.add(self.cands[c]);
        let mut degree = node.degree.clone();
        for v in self.cands[c].iter() {
            degree[v] += 1;
        }
        let compat = node.compat[pos + 1..]
            .iter()
            .copied()
            .filter(|&j| state.can_add(self.cands[j]))
            .collect();
        Some(Node {
            chosen,
            state,
            degree,
            compat,
        })
    }

    /// Visits `node`; returns false when the budget ran out.
    fn dfs(&self, node: &Node) -> bool {
        if !self.tick() {
            return false;
        }
        self.record(node);
        if self.degree_cut(node) {
            return true;
        }
        for (pos, c) in self.children(node) {
            if let Some(kid) = self.child(node, pos, c) {
                if !self.dfs(&kid) {
                    return false;
                }
            }
        }
        true
    }

    /// Nodes at `depth`, visiting shallower ones on the way.
    fn frontier(&self, node: Node, depth: usize, out: &mut Vec<Node>) -> bool {
        if node.chosen.len() == depth {
            out.push(node);
            return true;
        }
        if !self.tick() {
            return false;
        }
        self.record(&node);
        if self.degree_cut(&node) {
            return true;
        }
        for (pos, c) in self.children(&node) {
            if let Some(kid) = self.child(&node, pos, c) {
                if !self.frontier(kid, depth, out) {
                    return false;
                }
            }
        }
        true
    }
}

/// Largest edge count from a few seeded greedy maximal instances.
fn greedy_lower_bound(cands: &[VertexSet], root: &State) -> usize {
    (0..8u64)
        .map(|seed| {
            let mut order = cands.to_vec();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let mut st = root.clone();
            let mut count = 0;
            for e in order {
                if st.can_add(e) {
                    st.add(e);
                    count += 1;
                }
            }
            count
        })
        .max()
        .unwrap_or(0)
}

fn run_search(
    n: usize,
    r: usize,
    predicate: &Predicate,
    config: &SearchConfig,
    sub_value: Option<usize>,
    collect: bool,
    nodes: &AtomicU64,
) -> Result<Outcome> {
    let cands = k_subsets(n, r);
    let root_state = predicate.state(n, r);
    let lower = greedy_lower_bound(&cands, &root_state);
    let shared = Shared {
        n,
        config,
        best: AtomicUsize::new(lower),
        nodes,
        budget_hit: AtomicBool::new(false),
        sub_value,
        collect,
        witnesses: Mutex::new((lower, BTreeSet::new(), false)),
        cands,
    };
    if shared.cands.is_empty() {
        let mut classes = BTreeSet::new();
        if collect {
            classes.insert(canonical_form_with_ceiling(
                &Hypergraph::empty(n, r)?,
                n.max(DEFAULT_CANON_CEILING),
            )?);
        }
        return Ok(Outcome {
            value: 0,
            classes,
            cap_hit: false,
        });
    }
    let root = Node {
        chosen: Vec::new(),
        compat: (0..shared.cands.len())
            .filter(|&j| root_state.can_add(shared.cands[j]))
            .collect(),
        state: root_state,
        degree: vec![0; n],
    };
    let split_depth = config.symmetry_depth.clamp(1, 3);
    let mut frontier = Vec::new();
    let mut complete = shared.frontier(root, split_depth, &mut frontier);
    if complete {
        complete = frontier.par_iter().map(|node| shared.dfs(node)).all(|ok| ok);
    }
    if !complete || shared.budget_hit.load(Ordering::Relaxed) {
        return Err(Error::BudgetExhausted {
            nodes: nodes.load(Ordering::Relaxed),
            best_lower_bound: shared.best.load(Ordering::Relaxed),
        });
    }
    let value = shared.best.load(Ordering::Relaxed);
    let (acc_value, classes, cap_hit) = shared.witnesses.into_inner().unwrap();
    debug_assert!(!collect || acc_value == value);
    Ok(Outcome {
        value,
        classes,
        cap_hit,
    })
}

/// The record has exactly one extremal class and it is isomorphic to
/// `target`.
pub fn uniqueness_check(record: &ExtremalRecord, target: &Hypergraph) -> Result<bool> {
    if record.witness_cap_hit {
        return Err(Error::Precondition(
            "record lists only part of the extremal classes".into(),
        ));
    }
    if record.extremal_classes != 1 || target.n() != record.n || target.r() != record.r {
        return Ok(false);
    }
    is_isomorphic(&record.witnesses[0], target)
}
