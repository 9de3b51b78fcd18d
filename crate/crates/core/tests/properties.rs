use proptest::prelude::*;

use turanlab::checkers::{is_cancellative, is_k_free};
use turanlab::constructions::{
    perturb, random_maximal_cancellative, random_triangle_free_near_bipartite, turan_count,
    turan_hypergraph, AddPolicy,
};
use turanlab::search::{extremal_number, CandidateOrder, Predicate, SearchConfig};
use turanlab::stability::{
    bipartite_distance_analysis, extract_partition_cancellative, extract_partition_kfree,
};
use turanlab::{is_isomorphic, VertexSet};

fn config(threads: usize, ordering: CandidateOrder, symmetry_depth: usize) -> SearchConfig {
    SearchConfig {
        thread_count: threads,
        ordering,
        symmetry_depth,
        ..SearchConfig::default()
    }
}

#[test]
fn extremal_values_are_monotone_in_n() {
    for (r, predicate, top) in [
        (2, Predicate::TriangleFree, 9),
        (3, Predicate::Cancellative, 7),
        (3, Predicate::KFree(4), 7),
    ] {
        let values: Vec<usize> = (r..=top)
            .map(|n| extremal_number(n, r, &predicate, &SearchConfig::default()).unwrap().value)
            .collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "{predicate:?}: {values:?}");
    }
}

#[test]
fn search_value_ignores_threads_and_ordering() {
    for (n, r, predicate) in [
        (7, 3, Predicate::Cancellative),
        (6, 3, Predicate::KFree(4)),
        (8, 2, Predicate::TriangleFree),
    ] {
        let reference = extremal_number(n, r, &predicate, &config(1, CandidateOrder::Colex, 3)).unwrap();
        for threads in [2, 4] {
            for ordering in [CandidateOrder::Colex, CandidateOrder::DegreeGreedy] {
                for depth in [0, 3] {
                    let rec = extremal_number(n, r, &predicate, &config(threads, ordering, depth)).unwrap();
                    assert_eq!(rec.value, reference.value);
                    assert_eq!(rec.extremal_classes, reference.extremal_classes);
                    assert_eq!(
                        serde_json::to_string(&rec).unwrap(),
                        serde_json::to_string(&reference).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn witnesses_satisfy_their_predicate() {
    for (n, r, predicate) in [
        (6, 3, Predicate::Cancellative),
        (6, 3, Predicate::KFree(3)),
        (7, 2, Predicate::TriangleFree),
        (5, 3, Predicate::CancellativeGeneral),
    ] {
        let rec = extremal_number(n, r, &predicate, &SearchConfig::default()).unwrap();
        for (i, w) in rec.witnesses.iter().enumerate() {
            assert_eq!(w.len(), rec.value);
            assert!(predicate.holds(w).unwrap());
            for other in &rec.witnesses[..i] {
                assert!(!is_isomorphic(w, other).unwrap());
            }
        }
    }
}

#[test]
fn extractor_example_with_one_deletion() {
    let t = turan_hypergraph(12, 3, 3).unwrap();
    let h = t.edit(&t.edges()[..1], &[]).unwrap();
    let rep = extract_partition_cancellative(&h).unwrap();
    assert_eq!(rep.bad_edges, rep.partition.bad_edges(&h).len());
    assert_eq!(rep.bad_edges, 0);
    assert_eq!(rep.edges as u128, turan_count(12, 3, 3).unwrap() - 1);
}

fn is_partition(blocks: &[VertexSet], n: usize) -> bool {
    let mut seen = VertexSet::EMPTY;
    for b in blocks {
        if !b.is_disjoint(seen) {
            return false;
        }
        seen = seen.union(*b);
    }
    seen == VertexSet::full(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cancellative_extractor_invariants(n in 5usize..16, seed in any::<u64>(), frac in 0.0f64..0.5) {
        let h = perturb(&random_maximal_cancellative(n, seed).unwrap(), frac, 0, seed, AddPolicy::Any).unwrap();
        prop_assume!(!h.is_empty());
        let rep = extract_partition_cancellative(&h).unwrap();
        prop_assert!(is_partition(&rep.partition.blocks, n));
        prop_assert_eq!(rep.bad_edges, rep.partition.bad_edges(&h).len());
        prop_assert_eq!(rep.delta, rep.bad_edges as f64 / (n as f64).powi(3));
        let chain = rep.witness_chain.unwrap();
        prop_assert!(chain.link_avoids_t_neighborhood && chain.v2_v3_disjoint);
        prop_assert!(chain.v2_independent && chain.v3_independent);
    }

    #[test]
    fn kfree_extractor_partitions(n in 4usize..14, ell in 3usize..5, seed in any::<u64>(), frac in 0.0f64..0.6, add in 0usize..4) {
        let base = turan_hypergraph(n, 3, ell).unwrap();
        let h = perturb(&base, frac, add, seed, AddPolicy::KeepKFree(ell)).unwrap();
        prop_assert!(is_k_free(&h, ell).unwrap());
        let rep = extract_partition_kfree(&h, ell).unwrap();
        prop_assert!(is_partition(&rep.partition.blocks, n));
        prop_assert!(rep.partition.blocks.len() == ell);
        prop_assert_eq!(rep.bad_edges, rep.partition.bad_edges(&h).len());
    }

    #[test]
    fn bipartite_inequalities_always_hold(n in 6usize..40, eps in 0.0f64..0.08, noise in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_triangle_free_near_bipartite(n, eps, noise, seed).unwrap();
        let rep = bipartite_distance_analysis(&g).unwrap();
        prop_assert!(rep.all_hold, "{:?}", rep.inequalities);
        let (a, b) = (rep.partition.blocks[0].len(), rep.partition.blocks[1].len());
        prop_assert_eq!(rep.missing_count + rep.edges, a * b + rep.bad_count);
    }

    #[test]
    fn keep_cancellative_perturbation_stays_cancellative(n in 6usize..12, seed in any::<u64>(), add in 0usize..6) {
        let base = turan_hypergraph(n, 3, 3).unwrap();
        let h = perturb(&base, 0.2, add, seed, AddPolicy::KeepCancellative).unwrap();
        prop_assert!(is_cancellative(&h).unwrap());
        prop_assert_eq!(h.clone(), perturb(&base, 0.2, add, seed, AddPolicy::KeepCancellative).unwrap());
    }
}
