//! Inequality certificates with every intermediate quantity exposed.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{
    find_cancellative_violation, find_dependent_neighborhood, find_k_clique_in_shadow_graph,
    find_link_triangle,
};
use crate::cliques::{clique_counts_in, has_clique_in};
use crate::constructions::turan_count;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, TripleIndex};
use crate::vertex_set::{binomial, VertexSet};

/// Relative slack for the floating-point clique-density chain.
pub const CHAIN_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Int(i128),
    Float(f64),
    Exact { exact: String, approx: f64 },
    Flag(bool),
    List(Vec<Quantity>),
}

impl Quantity {
    pub fn exact(q: &BigRational) -> Self {
        Quantity::Exact {
            exact: q.to_string(),
            approx: q.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<usize> for Quantity {
    fn from(v: usize) -> Self {
        Quantity::Int(v as i128)
    }
}

impl From<u128> for Quantity {
    fn from(v: u128) -> Self {
        Quantity::Int(v as i128)
    }
}

impl From<i128> for Quantity {
    fn from(v: i128) -> Self {
        Quantity::Int(v)
    }
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Float(v)
    }
}

impl From<bool> for Quantity {
    fn from(v: bool) -> Self {
        Quantity::Flag(v)
    }
}

impl From<&BigRational> for Quantity {
    fn from(q: &BigRational) -> Self {
        Quantity::exact(q)
    }
}

impl<T: Into<Quantity>> From<Vec<T>> for Quantity {
    fn from(v: Vec<T>) -> Self {
        Quantity::List(v.into_iter().map(Into::into).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub name: String,
    pub holds: bool,
    /// Set when the input made every checked statement empty.
    pub vacuous: bool,
    pub quantities: BTreeMap<String, Quantity>,
    pub witness: Option<serde_json::Value>,
}

impl CertificateReport {
    fn new(name: &str) -> Self {
        CertificateReport {
            name: name.to_string(),
            holds: true,
            vacuous: false,
            quantities: BTreeMap::new(),
            witness: None,
        }
    }

    fn set(&mut self, key: &str, value: impl Into<Quantity>) {
        self.quantities.insert(key.to_string(), value.into());
    }

    /// Records the first failure only.
    fn fail(&mut self, witness: serde_json::Value) {
        if self.holds {
            self.holds = false;
            self.witness = Some(witness);
        }
    }

    pub fn get(&self, key: &str) -> Option<&Quantity> {
        self.quantities.get(key)
    }
}

fn rat(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn require_cancellative(h: &Hypergraph) -> Result<()> {
    if let Some(w) = find_cancellative_violation(h)? {
        return Err(Error::Precondition(format!(
            "input is not cancellative: {:?} and {:?} with symmetric difference inside {:?}",
            w.a, w.b, w.c
        )));
    }
    Ok(())
}

/// Shadow pairs with their neighborhoods, in shadow order.
fn shadow_neighborhoods(h: &Hypergraph, idx: &TripleIndex) -> Vec<(VertexSet, VertexSet)> {
    h.shadow()
        .into_iter()
        .map(|t| {
            let ab = t.to_vec();
            (t, idx.neighborhood(ab[0], ab[1]))
        })
        .collect()
}

/// `c_i = (k_i / C(ℓ, i))^{1/i}` must be non-increasing in `i`.
pub fn fisher_ryan_certificate(g: &Hypergraph, ell: usize) -> Result<CertificateReport> {
    if g.r() != 2 {
        return Err(Error::InvalidParameter("fisher-ryan needs a graph (r = 2)".into()));
    }
    if ell < 1 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    let adj = g.adjacency()?;
    if has_clique_in(&adj, g.vertices(), ell + 1) {
        return Err(Error::Precondition(format!("graph contains K_{}", ell + 1)));
    }
    let counts = clique_counts_in(&adj, g.vertices());
    let k: Vec<u128> = (1..=ell)
        .map(|i| counts.get(i).copied().unwrap_or(0))
        .collect();
    let c: Vec<f64> = k
        .iter()
        .enumerate()
        .map(|(j, &ki)| {
            let i = j + 1;
            if ki == 0 {
                0.0
            } else {
                (ki as f64 / binomial(ell as u64, i as u64) as f64).powf(1.0 / i as f64)
            }
        })
        .collect();

    let mut report = CertificateReport::new("fisher-ryan");
    report.set("n", g.n());
    report.set("ell", ell);
    report.set("k", k.clone());
    report.set("c", c.clone());
    for i in 1..ell {
        let (lo, hi) = (c[i], c[i - 1]);
        if lo > hi * (1.0 + CHAIN_TOLERANCE) {
            report.fail(json!({ "i": i + 1, "c_i": lo, "c_i_minus_1": hi }));
        }
    }
    Ok(report)
}

/// `#{T ∈ ∂H : u, v ∈ N(T)} = |L(u, v)|` for every ordered pair.
pub fn link_count_identity(h: &Hypergraph) -> Result<CertificateReport> {
    let idx = TripleIndex::new(h)?;
    let n = h.n();
    let per_t = shadow_neighborhoods(h, &idx);
    let mut lhs = vec![0usize; n * n];
    for (_, nb) in &per_t {
        for u in nb.iter() {
            for v in nb.iter() {
                lhs[u * n + v] += 1;
            }
        }
    }
    let rhs: Vec<usize> = (0..n * n)
        .into_par_iter()
        .map(|i| idx.pair_link_size(i / n, i % n))
        .collect();

    let mut report = CertificateReport::new("link-count-identity");
    report.set("n", n);
    report.set("edges", h.len());
    report.set("shadow", per_t.len());
    report.set("pairs_checked", n * n);
    report.set("incidences", lhs.iter().sum::<usize>());
    let mut mismatches = 0usize;
    for i in 0..n * n {
        if lhs[i] != rhs[i] {
            mismatches += 1;
            report.fail(json!({
                "u": i / n + 1,
                "v": i % n + 1,
                "containing_neighborhoods": lhs[i],
                "link_size": rhs[i],
            }));
        }
    }
    report.set("mismatches", mismatches);
    Ok(report)
}

/// `Σ_{T ∈ ∂H} Σ_{(u,v) ∈ N²(T)} 1/|L(u,v)| ≤ n² − 2|∂H|`, summed exactly.
pub fn inequality2_certificate(h: &Hypergraph) -> Result<CertificateReport> {
    require_cancellative(h)?;
    let idx = TripleIndex::new(h)?;
    let n = h.n();
    let per_t = shadow_neighborhoods(h, &idx);
    let mut report = CertificateReport::new("inequality2");
    report.set("n", n);
    report.set("edges", h.len());
    report.set("shadow", per_t.len());
    if per_t.is_empty() {
        report.vacuous = true;
        return Ok(report);
    }

    // multiplicity of each denominator |L(u,v)|
    let histograms: Vec<BTreeMap<usize, u64>> = per_t
        .par_iter()
        .map(|&(_, nb)| {
            let mut hist = BTreeMap::new();
            for u in nb.iter() {
                for v in nb.iter() {
                    *hist.entry(idx.pair_link_size(u, v)).or_insert(0) += 1;
                }
            }
            hist
        })
        .collect();
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    for part in histograms {
        for (d, c) in part {
            *hist.entry(d).or_insert(0) += c;
        }
    }
    let lhs = hist
        .iter()
        .fold(BigRational::zero(), |acc, (&d, &c)| {
            acc + BigRational::new(BigInt::from(c), BigInt::from(d))
        });
    let rhs = (n * n) as i128 - 2 * per_t.len() as i128;
    report.set("lhs", &lhs);
    report.set("rhs", rhs);
    report.set("ordered_pairs", hist.values().sum::<u64>() as usize);
    report.set("min_link_size", *hist.keys().next().unwrap());
    if lhs > rat(rhs) {
        report.fail(json!({ "lhs": lhs.to_string(), "rhs": rhs }));
    }
    Ok(report)
}

/// The chain from the link bound to `|H| ≤ t_3(n, 3)`, every step exact.
pub fn theorem13_certificate(h: &Hypergraph) -> Result<CertificateReport> {
    require_cancellative(h)?;
    let idx = TripleIndex::new(h)?;
    let n = h.n();
    let per_t = shadow_neighborhoods(h, &idx);
    let mut report = CertificateReport::new("theorem13");
    report.set("n", n);
    report.set("edges", h.len());
    report.set("shadow", per_t.len());
    if per_t.is_empty() {
        report.vacuous = true;
        return Ok(report);
    }

    let e = rat(h.len());
    let s = rat(per_t.len());
    let nn = rat(n);
    let two = rat(2);
    let n2_minus = &nn * &nn - &two * &s;

    // Σ_T 4 (d / (n − d))², grouped by d
    let mut by_degree: BTreeMap<usize, u64> = BTreeMap::new();
    for (_, nb) in &per_t {
        *by_degree.entry(nb.len()).or_insert(0) += 1;
    }
    let mantel_sum = by_degree.iter().fold(BigRational::zero(), |acc, (&d, &c)| {
        let ratio = BigRational::new(BigInt::from(d), BigInt::from(n - d));
        acc + rat(4 * c) * &ratio * &ratio
    });

    let avg = rat(3) * &e / &s;
    let z = &avg / (&nn - &avg);
    let z2 = &z * &z;
    let jensen = rat(4) * &z2 * &s;
    let shadow_bound = &nn * &nn / (&two * (&two * &z2 + rat(1)));
    let n3 = &nn * &nn * &nn;
    let edge_bound =
        &z * &n3 / (rat(6) * (&z + rat(1)) * (&two * &z2 + rat(1)));
    let cube_bound = &n3 / rat(27);
    let t3 = turan_count(n, 3, 3)?;

    report.set("z", &z);
    report.set("mantel_sum", &mantel_sum);
    report.set("jensen_lhs", &jensen);
    report.set("n2_minus_2shadow", &n2_minus);
    report.set("shadow_bound", &shadow_bound);
    report.set("edge_bound", &edge_bound);
    report.set("cube_bound", &cube_bound);
    report.set("t3", t3);

    let steps: [(&str, &BigRational, &BigRational); 5] = [
        ("mantel_sum <= n^2 - 2|shadow|", &mantel_sum, &n2_minus),
        ("jensen: 4 z^2 |shadow| <= n^2 - 2|shadow|", &jensen, &n2_minus),
        ("|shadow| <= n^2 / (2(2z^2+1))", &s, &shadow_bound),
        ("|H| <= z n^3 / (6(z+1)(2z^2+1))", &e, &edge_bound),
        ("|H| <= n^3 / 27", &e, &cube_bound),
    ];
    for (label, lhs, rhs) in steps {
        if lhs > rhs {
            report.fail(json!({ "step": label, "lhs": lhs.to_string(), "rhs": rhs.to_string() }));
        }
    }
    if h.len() as u128 > t3 {
        report.fail(json!({ "step": "|H| <= t_3(n,3)", "lhs": h.len(), "rhs": t3 }));
    }
    Ok(report)
}

/// For every `T` and `(u, v) ∈ N²(T)`: `L(u,v)` avoids `N(T)`, is
/// triangle-free, and `|L(u,v)| ≤ ((n − d(T))/2)²`.
pub fn mantel_link_bound(h: &Hypergraph) -> Result<CertificateReport> {
    require_cancellative(h)?;
    let idx = TripleIndex::new(h)?;
    let n = h.n();
    let per_t = shadow_neighborhoods(h, &idx);
    let mut report = CertificateReport::new("mantel-link-bound");
    report.set("n", n);
    report.set("edges", h.len());
    report.set("shadow", per_t.len());
    if per_t.is_empty() {
        report.vacuous = true;
        return Ok(report);
    }

    struct Outcome {
        pairs: usize,
        max_link: usize,
        max_ratio: f64,
        failure: Option<serde_json::Value>,
    }
    let outcomes: Vec<Outcome> = per_t
        .par_iter()
        .map(|&(t, nb)| {
            let d = nb.len();
            let mut out = Outcome {
                pairs: 0,
                max_link: 0,
                max_ratio: 0.0,
                failure: None,
            };
            for u in nb.iter() {
                for v in nb.iter() {
                    out.pairs += 1;
                    let adj = idx.pair_link_adjacency(u, v);
                    let support: VertexSet = (0..n).filter(|&a| !adj[a].is_empty()).collect();
                    let size = adj.iter().map(|m| m.len()).sum::<usize>() / 2;
                    out.max_link = out.max_link.max(size);
                    out.max_ratio = out.max_ratio.max(4.0 * size as f64 / ((n - d) * (n - d)) as f64);
                    if out.failure.is_some() {
                        continue;
                    }
                    let reason = if !support.is_disjoint(nb) {
                        Some("link meets N(T)")
                    } else if has_clique_in(&adj, support, 3) {
                        Some("link has a triangle")
                    } else if 4 * size > (n - d) * (n - d) {
                        Some("link larger than ((n - d)/2)^2")
                    } else {
                        None
                    };
                    if let Some(reason) = reason {
                        out.failure = Some(json!({
                            "t": t, "u": u + 1, "v": v + 1, "reason": reason,
                            "link_size": size, "degree": d,
                        }));
                    }
                }
            }
            out
        })
        .collect();

    let mut pairs = 0;
    let mut max_link = 0;
    let mut max_ratio: f64 = 0.0;
    for out in outcomes {
        pairs += out.pairs;
        max_link = max_link.max(out.max_link);
        max_ratio = max_ratio.max(out.max_ratio);
        if let Some(w) = out.failure {
            report.fail(w);
        }
    }
    report.set("pairs_checked", pairs);
    report.set("max_link_size", max_link);
    report.set("max_link_over_bound", max_ratio);
    Ok(report)
}

pub const VERIFY_NAMES: [&str; 9] = [
    "cancellative",
    "k-free",
    "links-triangle-free",
    "neighborhoods-independent",
    "fisher-ryan",
    "link-count-identity",
    "inequality2",
    "theorem13",
    "mantel-link-bound",
];

/// Runs a named predicate or certificate. `ell` is needed by `k-free` and
/// `fisher-ryan`.
pub fn verify(name: &str, h: &Hypergraph, ell: Option<usize>) -> Result<CertificateReport> {
    let need_ell = || {
        ell.ok_or_else(|| Error::InvalidParameter(format!("{name} needs --ell")))
    };
    let mut report = CertificateReport::new(name);
    report.set("n", h.n());
    report.set("edges", h.len());
    match name {
        "cancellative" => {
            let found = if h.r() == 3 {
                find_cancellative_violation(h)?
            } else {
                super::find_cancellative_violation_general(h)
            };
            if let Some(w) = found {
                report.fail(json!(w));
            }
        }
        "k-free" => {
            let ell = need_ell()?;
            report.set("ell", ell);
            if let Some(s) = find_k_clique_in_shadow_graph(h, ell)? {
                report.fail(json!({ "covered_set": s }));
            }
        }
        "links-triangle-free" => {
            if let Some((v, tri)) = find_link_triangle(h)? {
                report.fail(json!({ "vertex": v + 1, "triangle": tri }));
            }
        }
        "neighborhoods-independent" => {
            if let Some(w) = find_dependent_neighborhood(h)? {
                report.fail(json!(w));
            }
        }
        "fisher-ryan" => return fisher_ryan_certificate(h, need_ell()?),
        "link-count-identity" => return link_count_identity(h),
        "inequality2" => return inequality2_certificate(h),
        "theorem13" => return theorem13_certificate(h),
        "mantel-link-bound" => return mantel_link_bound(h),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown check '{other}'; expected one of {}",
                VERIFY_NAMES.join(", ")
            )))
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{random_maximal_cancellative, turan_hypergraph};
    use crate::checkers::is_cancellative;
    use crate::vertex_set::k_subsets;

    fn graph(n: usize, edges: &[[usize; 2]]) -> Hypergraph {
        Hypergraph::new(n, 2, edges.iter().map(|e| VertexSet::pair(e[0] - 1, e[1] - 1))).unwrap()
    }

    fn complete(n: usize) -> Hypergraph {
        Hypergraph::new(n, 2, k_subsets(n, 2)).unwrap()
    }

    fn floats(q: &Quantity) -> Vec<f64> {
        match q {
            Quantity::List(v) => v
                .iter()
                .map(|x| match x {
                    Quantity::Float(f) => *f,
                    _ => panic!("expected floats"),
                })
                .collect(),
            _ => panic!("expected list"),
        }
    }

    fn exact(q: &Quantity) -> &str {
        match q {
            Quantity::Exact { exact, .. } => exact,
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn fisher_ryan_examples() {
        let r = fisher_ryan_certificate(&complete(4), 4).unwrap();
        assert!(r.holds);
        for c in floats(r.get("c").unwrap()) {
            assert!((c - 1.0).abs() < 1e-12);
        }

        let c5 = graph(5, &[[1, 2], [2, 3], [3, 4], [4, 5], [1, 5]]);
        let r = fisher_ryan_certificate(&c5, 2).unwrap();
        assert!(r.holds);
        let c = floats(r.get("c").unwrap());
        assert!((c[0] - 2.5).abs() < 1e-12);
        assert!((c[1] - 5f64.sqrt()).abs() < 1e-12);

        let k222 = crate::constructions::turan_hypergraph(6, 2, 3).unwrap();
        let r = fisher_ryan_certificate(&k222, 3).unwrap();
        assert!(r.holds);
        for c in floats(r.get("c").unwrap()) {
            assert!((c - 2.0).abs() < 1e-9);
        }
        assert_eq!(r.get("k"), Some(&Quantity::from(vec![6u128, 12, 8])));

        assert!(matches!(
            fisher_ryan_certificate(&complete(4), 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn link_count_identity_examples() {
        let h = Hypergraph::from_lists(4, 3, &[&[0, 1, 2], &[0, 1, 3]]).unwrap();
        let r = link_count_identity(&h).unwrap();
        assert!(r.holds, "{r:?}");
        let idx = TripleIndex::new(&h).unwrap();
        assert_eq!(idx.pair_link_size(2, 3), 1);
        assert_eq!(idx.pair_link_size(0, 0), 2);
        let empty = Hypergraph::empty(4, 3).unwrap();
        assert!(link_count_identity(&empty).unwrap().holds);
    }

    #[test]
    fn inequality2_single_triple_is_tight() {
        let h = Hypergraph::from_lists(3, 3, &[&[0, 1, 2]]).unwrap();
        let r = inequality2_certificate(&h).unwrap();
        assert!(r.holds);
        assert_eq!(exact(r.get("lhs").unwrap()), "3");
        assert_eq!(r.get("rhs"), Some(&Quantity::Int(3)));
        assert!(inequality2_certificate(&turan_hypergraph(6, 3, 3).unwrap()).unwrap().holds);
    }

    #[test]
    fn empty_shadow_is_vacuous() {
        let h = Hypergraph::empty(5, 3).unwrap();
        for r in [
            inequality2_certificate(&h).unwrap(),
            theorem13_certificate(&h).unwrap(),
            mantel_link_bound(&h).unwrap(),
        ] {
            assert!(r.holds && r.vacuous);
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn non_cancellative_rejected() {
        let bad = Hypergraph::from_lists(5, 3, &[&[0, 1, 2], &[0, 1, 3], &[2, 3, 4]]).unwrap();
        assert!(matches!(inequality2_certificate(&bad), Err(Error::Precondition(_))));
        assert!(matches!(theorem13_certificate(&bad), Err(Error::Precondition(_))));
        assert!(matches!(mantel_link_bound(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn theorem13_values() {
        let single = Hypergraph::from_lists(3, 3, &[&[0, 1, 2]]).unwrap();
        let r = theorem13_certificate(&single).unwrap();
        assert!(r.holds);
        assert_eq!(exact(r.get("z").unwrap()), "1/2");
        assert_eq!(exact(r.get("edge_bound").unwrap()), "1");

        // T_3(9,3): every shadow pair has degree 3, so z = 3/(9-3) = 1/2,
        // where z/(6(z+1)(2z^2+1)) peaks at 1/27
        let t = turan_hypergraph(9, 3, 3).unwrap();
        let r = theorem13_certificate(&t).unwrap();
        assert!(r.holds);
        assert_eq!(exact(r.get("z").unwrap()), "1/2");
        assert_eq!(exact(r.get("edge_bound").unwrap()), "27");
        assert_eq!(exact(r.get("cube_bound").unwrap()), "27");
    }

    #[test]
    fn mantel_link_examples() {
        let t = turan_hypergraph(9, 3, 3).unwrap();
        let r = mantel_link_bound(&t).unwrap();
        assert!(r.holds);
        assert_eq!(r.get("max_link_size"), Some(&Quantity::Int(9)));
        let single = Hypergraph::from_lists(3, 3, &[&[0, 1, 2]]).unwrap();
        let r = mantel_link_bound(&single).unwrap();
        assert!(r.holds);
        assert_eq!(r.get("max_link_size"), Some(&Quantity::Int(1)));
    }

    #[test]
    fn all_certificates_hold_on_cancellative_5_vertex_graphs() {
        let triples = k_subsets(5, 3);
        let mut seen = 0;
        for mask in 0u32..1 << triples.len() {
            let h = Hypergraph::new(
                5,
                3,
                triples.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e),
            )
            .unwrap();
            if !is_cancellative(&h).unwrap() {
                continue;
            }
            seen += 1;
            assert!(inequality2_certificate(&h).unwrap().holds);
            assert!(theorem13_certificate(&h).unwrap().holds);
            assert!(mantel_link_bound(&h).unwrap().holds);
            assert!(link_count_identity(&h).unwrap().holds);
        }
        assert!(seen > 10);
    }

    #[test]
    fn random_maximal_cancellative_certified() {
        for seed in 0..20 {
            let h = random_maximal_cancellative(8, seed).unwrap();
            assert!(theorem13_certificate(&h).unwrap().holds);
            assert!(inequality2_certificate(&h).unwrap().holds);
        }
    }

    #[test]
    fn verify_dispatch() {
        let t = turan_hypergraph(6, 3, 3).unwrap();
        for name in VERIFY_NAMES {
            if name == "fisher-ryan" {
                continue;
            }
            let r = verify(name, &t, Some(3)).unwrap();
            assert!(r.holds, "{name}");
            assert_eq!(r.name, name);
        }
        assert!(verify("k-free", &t, None).is_err());
        assert!(verify("nonsense", &t, None).is_err());
        let bad = Hypergraph::from_lists(5, 3, &[&[0, 1, 2], &[0, 1, 3], &[2, 3, 4]]).unwrap();
        let r = verify("cancellative", &bad, None).unwrap();
        assert!(!r.holds && r.witness.is_some());
    }
}
