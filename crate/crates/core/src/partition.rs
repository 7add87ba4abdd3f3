//! Flat partitions, the susceptibility score and optimal-cut selection.
//!
//! The susceptibility of a partition of `N` nodes is
//!
//! ```text
//! chi = 4 / N² · Σ s²      (sum over every cluster except one largest)
//! ```
//!
//! It is 1 for two equal halves, 0 for a single cluster, and `4(k-1)/k²` for
//! `k` equal clusters. The optimal cut of a dendrogram is the one that
//! maximizes it.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dendrogram::Dendrogram;
use crate::error::{Error, Result};

/// Node → cluster assignment. `None` marks an unassigned node.
///
/// Cluster ids are dense and numbered by first appearance in node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<Option<usize>>,
    sizes: Vec<usize>,
}

impl Partition {
    /// Renumbers the given ids densely in first-appearance order.
    pub fn from_assignment(assignment: Vec<Option<usize>>) -> Self {
        let mut remap = HashMap::new();
        let mut sizes = Vec::new();
        let assignment = assignment
            .into_iter()
            .map(|c| {
                c.map(|c| {
                    let id = *remap.entry(c).or_insert_with(|| {
                        sizes.push(0);
                        sizes.len() - 1
                    });
                    sizes[id] += 1;
                    id
                })
            })
            .collect();
        Partition { assignment, sizes }
    }

    /// Partition where nodes sharing a key share a cluster.
    pub fn from_keys<K: std::hash::Hash + Eq + Copy>(keys: &[K]) -> Self {
        let mut remap: HashMap<K, usize> = HashMap::new();
        let ids = keys
            .iter()
            .map(|k| {
                let next = remap.len();
                Some(*remap.entry(*k).or_insert(next))
            })
            .collect();
        Partition::from_assignment(ids)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    pub fn num_clusters(&self) -> usize {
        self.sizes.len()
    }

    /// Member count of each cluster id.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn unassigned_count(&self) -> usize {
        self.assignment.iter().filter(|c| c.is_none()).count()
    }

    /// Member lists per cluster id.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.sizes.len()];
        for (i, c) in self.assignment.iter().enumerate() {
            if let Some(c) = c {
                out[*c].push(i);
            }
        }
        out
    }

    /// Labels with each unassigned node given a fresh singleton id.
    pub fn labels_with_singletons(&self) -> Vec<usize> {
        let mut next = self.sizes.len();
        self.assignment
            .iter()
            .map(|c| {
                c.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    }

    /// Marks every cluster smaller than `min_size` as unassigned.
    pub fn with_min_size(&self, min_size: usize) -> Partition {
        Partition::from_assignment(
            self.assignment
                .iter()
                .map(|c| c.filter(|&c| self.sizes[c] >= min_size))
                .collect(),
        )
    }

    /// `node_label<TAB>cluster_id` lines; unassigned nodes get `-1`.
    pub fn to_tsv(&self, labels: &[String]) -> String {
        let mut out = String::from("node\tcluster\n");
        for (label, c) in labels.iter().zip(&self.assignment) {
            match c {
                Some(c) => writeln!(out, "{label}\t{c}"),
                None => writeln!(out, "{label}\t-1"),
            }
            .expect("write to string");
        }
        out
    }

    /// Parses the output of [`Partition::to_tsv`], returning node labels in
    /// file order alongside the partition.
    pub fn from_tsv(text: &str) -> Result<(Vec<String>, Partition)> {
        let mut labels = Vec::new();
        let mut ids = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = if line.contains('\t') {
                line.split('\t').collect()
            } else if line.contains(',') {
                line.split(',').collect()
            } else {
                line.split_whitespace().collect()
            };
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("expected 2 fields, found {}", fields.len()),
                });
            }
            let id = match fields[1].trim().parse::<i64>() {
                Ok(id) => id,
                Err(_) if labels.is_empty() => continue,
                Err(_) => {
                    return Err(Error::Parse {
                        line: n + 1,
                        message: format!("cluster id {:?} is not an integer", fields[1]),
                    })
                }
            };
            labels.push(fields[0].trim().to_owned());
            ids.push(if id < 0 { None } else { Some(id as usize) });
        }
        Ok((labels, Partition::from_assignment(ids)))
    }
}

/// `4 / N² · Σ s²` over every cluster except one of maximal size.
///
/// Unassigned nodes count as singletons.
pub fn susceptibility(p: &Partition) -> Result<f64> {
    let n = p.len();
    if n == 0 {
        return Err(Error::EmptyPartition);
    }
    let singletons = p.unassigned_count() as u128;
    let sum_sq: u128 = p.sizes().iter().map(|&s| (s as u128).pow(2)).sum::<u128>() + singletons;
    let largest = p
        .sizes()
        .iter()
        .copied()
        .max()
        .unwrap_or(0)
        .max(usize::from(singletons > 0));
    Ok(chi_from_moments(n, sum_sq, largest))
}

#[inline]
fn chi_from_moments(n: usize, sum_sq: u128, largest: usize) -> f64 {
    let excluded = sum_sq - (largest as u128).pow(2);
    (4 * excluded) as f64 / ((n as u128).pow(2)) as f64
}

/// Susceptibility of one dendrogram cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRecord {
    /// Cut height; `-inf` for the all-singletons cut below the first merge.
    pub threshold: f64,
    pub num_clusters: usize,
    pub chi: f64,
}

/// Susceptibility at every distinct cut of a dendrogram, ordered by threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityProfile {
    pub records: Vec<ProfileRecord>,
    /// Index into `records` of the maximum; ties go to the lowest threshold.
    pub argmax: usize,
}

impl SusceptibilityProfile {
    pub fn best(&self) -> ProfileRecord {
        self.records[self.argmax]
    }

    pub fn argmax_threshold(&self) -> f64 {
        self.best().threshold
    }

    pub fn chi_max(&self) -> f64 {
        self.best().chi
    }

    /// `threshold_log10p<TAB>num_clusters<TAB>chi` rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("threshold_log10p\tnum_clusters\tchi\n");
        for r in &self.records {
            let _ = writeln!(out, "{}\t{}\t{}", r.threshold, r.num_clusters, r.chi);
        }
        out
    }
}

/// Evaluates the susceptibility after each distinct merge height, plus the
/// all-singletons cut.
///
/// Runs in `O(n)` by updating `Σ s²` and the largest size as merges are
/// applied in order.
pub fn scan(t: &Dendrogram) -> SusceptibilityProfile {
    let n = t.num_leaves();
    let mut sizes = vec![1usize; n];
    sizes.reserve(n.saturating_sub(1));
    let mut sum_sq = n as u128;
    let mut largest = 1usize;
    let mut clusters = n;
    let mut records = vec![ProfileRecord {
        threshold: f64::NEG_INFINITY,
        num_clusters: n,
        chi: chi_from_moments(n, sum_sq, largest),
    }];
    let merges = t.merges();
    let mut k = 0;
    while k < merges.len() {
        let h = merges[k].height;
        while k < merges.len() && merges[k].height == h {
            let m = merges[k];
            let (a, b) = (sizes[m.left] as u128, sizes[m.right] as u128);
            sum_sq = sum_sq + (m.size as u128).pow(2) - a * a - b * b;
            largest = largest.max(m.size);
            clusters -= 1;
            sizes.push(m.size);
            k += 1;
        }
        records.push(ProfileRecord {
            threshold: h,
            num_clusters: clusters,
            chi: chi_from_moments(n, sum_sq, largest),
        });
    }
    let mut argmax = 0;
    for (i, r) in records.iter().enumerate() {
        if r.chi > records[argmax].chi {
            argmax = i;
        }
    }
    SusceptibilityProfile { records, argmax }
}

/// The partition picked by maximal susceptibility.
#[derive(Debug, Clone)]
pub struct OptimalCut {
    /// Clusters below the minimum size are already marked unassigned.
    pub partition: Partition,
    pub threshold: f64,
    pub chi: f64,
    pub profile: SusceptibilityProfile,
}

/// Cuts at the susceptibility maximum and marks clusters smaller than
/// `min_cluster_size` as unassigned.
pub fn optimal_cut(t: &Dendrogram, min_cluster_size: usize) -> OptimalCut {
    let profile = scan(t);
    let best = profile.best();
    let partition = t.cut(best.threshold).with_min_size(min_cluster_size);
    OptimalCut {
        partition,
        threshold: best.threshold,
        chi: best.chi,
        profile,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::significance::CondensedDissimilarityMatrix;

    fn blocks(sizes: &[usize]) -> Partition {
        let ids = sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| std::iter::repeat_n(Some(c), s))
            .collect();
        Partition::from_assignment(ids)
    }

    #[test]
    fn susceptibility_examples() {
        assert_eq!(susceptibility(&blocks(&[50, 50])).unwrap(), 1.0);
        assert_eq!(susceptibility(&blocks(&[100])).unwrap(), 0.0);
        let singletons = blocks(&[1; 100]);
        assert_eq!(susceptibility(&singletons).unwrap(), 4.0 * 99.0 / 10_000.0);
        assert_eq!(
            susceptibility(&Partition::from_assignment(vec![])).unwrap_err(),
            Error::EmptyPartition
        );
    }

    #[test]
    fn susceptibility_counts_unassigned_as_singletons() {
        let p = Partition::from_assignment(vec![Some(0), Some(0), None, None]);
        let q = Partition::from_assignment(vec![Some(0), Some(0), Some(1), Some(2)]);
        assert_eq!(susceptibility(&p).unwrap(), susceptibility(&q).unwrap());
        let all = Partition::from_assignment(vec![None, None]);
        assert_eq!(susceptibility(&all).unwrap(), 1.0);
    }

    #[test]
    fn renumbering_and_min_size() {
        let p = Partition::from_assignment(vec![Some(7), Some(3), Some(7), None]);
        assert_eq!(p.assignment(), &[Some(0), Some(1), Some(0), None]);
        assert_eq!(p.sizes(), &[2, 1]);
        let q = p.with_min_size(2);
        assert_eq!(q.assignment(), &[Some(0), None, Some(0), None]);
        assert_eq!(q.num_clusters(), 1);
        assert_eq!(q.unassigned_count(), 2);
    }

    #[test]
    fn tsv_round_trip() {
        let p = Partition::from_assignment(vec![Some(0), None, Some(1)]);
        let labels: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let text = p.to_tsv(&labels);
        assert!(text.contains("y\t-1"));
        let (l, q) = Partition::from_tsv(&text).unwrap();
        assert_eq!(l, labels);
        assert_eq!(q, p);
    }

    fn tree(n: usize, values: Vec<f64>) -> Dendrogram {
        let d = CondensedDissimilarityMatrix::new(n, values).unwrap();
        let labels = (0..n).map(|i| i.to_string()).collect();
        crate::dendrogram::slink(&d, labels).unwrap()
    }

    #[test]
    fn scan_two_leaves() {
        let p = scan(&tree(2, vec![-3.0]));
        assert_eq!(p.records.len(), 2);
        assert_eq!(p.records[0].chi, 1.0);
        assert_eq!(p.records[1].chi, 0.0);
        assert_eq!(p.argmax_threshold(), f64::NEG_INFINITY);
    }

    #[test]
    fn scan_chain_has_one_record_per_merge() {
        // distances grow along the chain 0-1-2-3-4
        let n = 5;
        let mut v = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                v.push(-(10.0 - (j as f64)) + (j - i - 1) as f64 * 0.01);
            }
        }
        let p = scan(&tree(n, v));
        assert_eq!(p.records.len(), n);
    }

    #[test]
    fn scan_separated_blocks() {
        // two blocks of 3: tight inside, p = 1 across
        let n = 6;
        let mut v = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                v.push(if i / 3 == j / 3 {
                    -10.0 - (i + j) as f64
                } else {
                    0.0
                });
            }
        }
        let t = tree(n, v);
        let best = optimal_cut(&t, 2);
        assert_eq!(best.partition.num_clusters(), 2);
        assert_eq!(best.chi, 1.0);
        assert!(best.threshold < 0.0);
        assert_eq!(best.partition.unassigned_count(), 0);
    }

    #[test]
    fn optimal_cut_marks_stragglers() {
        // a,b,c,d pair up early; e only joins at the root
        let n = 5;
        let mut v = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                v.push(match (i, j) {
                    (0, 1) | (2, 3) => -9.0,
                    (_, 4) => -1.0,
                    _ => -2.0,
                });
            }
        }
        let best = optimal_cut(&tree(n, v), 2);
        assert_eq!(best.threshold, -9.0);
        assert_eq!(
            best.partition.assignment(),
            &[Some(0), Some(0), Some(1), Some(1), None]
        );
    }
}
