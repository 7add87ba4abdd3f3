//! Agreement metrics against direct definitions.

use fetclust::metrics::{accuracy, ari, modularity, nmi, nmi_with, MatchStrategy, NmiNormalization};
use fetclust::{OneModeGraph, Partition};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::ari_by_pairs;

fn part(labels: &[usize]) -> Partition {
    Partition::from_keys(labels)
}

#[test]
fn ari_matches_pair_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(2..=12);
        let ka = rng.random_range(1..=n);
        let kb = rng.random_range(1..=n);
        let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..ka)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..kb)).collect();
        let got = ari(&part(&a), &part(&b)).unwrap();
        let want = ari_by_pairs(&a, &b);
        assert!((got - want).abs() < 1e-12, "{a:?} {b:?}: {got} vs {want}");
    }
}

#[test]
fn nmi_of_identical_partitions_is_one() {
    for labels in [
        vec![0, 0, 1, 1],
        vec![0, 1, 2, 0, 1, 2, 2],
        vec![3, 3, 3, 1, 2, 2],
    ] {
        let p = part(&labels);
        assert!((nmi(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        assert!((nmi_with(&p, &p, NmiNormalization::Max).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn two_clique_split_has_modularity_one_half() {
    let mut edges = Vec::new();
    let names: Vec<String> = (0..8).map(|i| format!("v{i}")).collect();
    for block in [0..4, 4..8] {
        for i in block.clone() {
            for j in i + 1..block.end {
                edges.push((names[i].as_str(), names[j].as_str()));
            }
        }
    }
    let (g, _) = OneModeGraph::from_edges(edges).unwrap();
    let p = part(&[0, 0, 0, 0, 1, 1, 1, 1]);
    assert_eq!(modularity(&g, &p).unwrap(), 0.5);
}

fn labels(max_n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(0..4usize, n),
            prop::collection::vec(0..5usize, n),
        )
    })
}

proptest! {
    #[test]
    fn nmi_and_ari_are_symmetric((a, b) in labels(30)) {
        let (pa, pb) = (part(&a), part(&b));
        prop_assert!((nmi(&pa, &pb).unwrap() - nmi(&pb, &pa).unwrap()).abs() < 1e-12);
        prop_assert!((ari(&pa, &pb).unwrap() - ari(&pb, &pa).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn nmi_is_bounded((a, b) in labels(30)) {
        let v = nmi(&part(&a), &part(&b)).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
    }

    #[test]
    fn overall_accuracy_never_exceeds_classified_only(
        (a, b) in labels(24),
        dropped in prop::collection::vec(any::<bool>(), 24),
    ) {
        let assignment = a.iter().zip(&dropped).map(|(&c, &d)| (!d).then_some(c)).collect();
        let p = Partition::from_assignment(assignment);
        let acc = accuracy(&p, &part(&b), MatchStrategy::Auto).unwrap();
        prop_assert!(acc.overall <= acc.classified_only + 1e-12);
    }

    #[test]
    fn accuracy_ignores_cluster_ids((a, b) in labels(20), shift in 1..4usize) {
        let relabeled: Vec<usize> = a.iter().map(|&c| (c + shift) % 4 + 10).collect();
        let x = accuracy(&part(&a), &part(&b), MatchStrategy::Exhaustive).unwrap();
        let y = accuracy(&part(&relabeled), &part(&b), MatchStrategy::Exhaustive).unwrap();
        prop_assert_eq!(x.overall, y.overall);
    }

    #[test]
    fn modularity_ignores_cluster_ids(
        edges in prop::collection::btree_set((0..12usize, 0..12usize), 1..40),
        a in prop::collection::vec(0..4usize, 13),
    ) {
        let names: Vec<String> = (0..13).map(|i| i.to_string()).collect();
        let pairs: Vec<(&str, &str)> = edges
            .iter()
            .filter(|(i, j)| i != j)
            .map(|&(i, j)| (names[i].as_str(), names[j].as_str()))
            .collect();
        prop_assume!(!pairs.is_empty());
        let (g, _) = OneModeGraph::from_edges(pairs).unwrap();
        let index: Vec<usize> = g.labels().iter().map(|l| l.parse().unwrap()).collect();
        let p = part(&index.iter().map(|&i| a[i]).collect::<Vec<_>>());
        let q = part(&index.iter().map(|&i| 7 - a[i]).collect::<Vec<_>>());
        prop_assert!((modularity(&g, &p).unwrap() - modularity(&g, &q).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn isolated_unassigned_node_only_rescales_through_edge_count() {
    // Q = Σ_c [L_c/m - (d_c/2m)²]; an isolated node adds no edge and no degree.
    let (g, _) = OneModeGraph::from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")]).unwrap();
    let with_isolated = OneModeGraph::new(
        [g.labels(), &["z".to_string()]].concat(),
        (0..g.num_nodes())
            .map(|i| g.neighbors(i).to_vec())
            .chain([vec![]])
            .collect(),
    )
    .unwrap();
    let p = Partition::from_assignment(vec![Some(0), Some(0), Some(0), Some(1)]);
    let p_iso = Partition::from_assignment(vec![Some(0), Some(0), Some(0), Some(1), None]);
    assert_eq!(
        modularity(&g, &p).unwrap(),
        modularity(&with_isolated, &p_iso).unwrap()
    );
}
