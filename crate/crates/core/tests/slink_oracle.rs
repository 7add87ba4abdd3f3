//! Single linkage against a naive agglomeration that rescans every cluster
//! pair at each step.

use fetclust::{slink, CondensedDissimilarityMatrix, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{canonical, naive_single_linkage};

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, levels: Option<u32>) -> CondensedDissimilarityMatrix {
    let values = (0..n * (n - 1) / 2)
        .map(|_| match levels {
            // few distinct values so that many merges tie
            Some(l) => -(rng.random_range(0..l) as f64),
            None => -rng.random::<f64>() * 50.0,
        })
        .collect();
    CondensedDissimilarityMatrix::new(n, values).unwrap()
}

#[test]
fn flat_clusterings_match_naive_at_every_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100 {
        let n = rng.random_range(2..=60);
        let levels = if trial % 2 == 0 {
            None
        } else {
            Some(rng.random_range(2..8))
        };
        let m = random_matrix(&mut rng, n, levels);
        let labels = (0..n).map(|i| i.to_string()).collect();
        let t = slink(&m, labels).unwrap();
        let naive = naive_single_linkage(n, &|i, j| m.get(i, j));

        let mut ours: Vec<f64> = t.merges().iter().map(|m| m.height).collect();
        let theirs: Vec<f64> = naive.iter().map(|s| s.0).collect();
        ours.sort_by(f64::total_cmp);
        assert_eq!(ours, theirs, "trial {trial}: merge heights differ");

        // Compare at every distinct height and below the first merge. With
        // ties the naive order of merges at one height is arbitrary, so only
        // the state after the last merge at each height is comparable.
        let mut thresholds: Vec<f64> = theirs.clone();
        thresholds.dedup();
        let below = theirs[0] - 1.0;
        assert_eq!(
            clusters_of(&t.cut(below)),
            canonical(&(0..n).map(|i| vec![i]).collect::<Vec<_>>())
        );
        for h in thresholds {
            let last = naive.iter().rposition(|s| s.0 == h).unwrap();
            assert_eq!(clusters_of(&t.cut(h)), naive[last].1, "trial {trial}: cut at {h}");
        }
    }
}

fn clusters_of(p: &Partition) -> Vec<Vec<usize>> {
    canonical(&p.clusters())
}

#[test]
fn merge_heights_equal_min_cross_dissimilarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let n = rng.random_range(2..=40);
        let m = random_matrix(&mut rng, n, None);
        let t = slink(&m, (0..n).map(|i| i.to_string()).collect()).unwrap();
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for mg in t.merges() {
            let (a, b) = (&members[mg.left], &members[mg.right]);
            let link = a
                .iter()
                .flat_map(|&i| b.iter().map(move |&j| (i, j)))
                .map(|(i, j)| m.get(i, j))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(mg.height, link);
            assert!(mg.left < mg.right);
            let joined = [a.as_slice(), b.as_slice()].concat();
            assert_eq!(joined.len(), mg.size);
            members.push(joined);
        }
    }
}
