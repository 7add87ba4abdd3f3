//! Agreement between partitions (NMI, ARI, matched accuracy) and one-mode
//! modularity.
//!
//! Unassigned nodes are scored as singleton clusters everywhere.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::OneModeGraph;
use crate::partition::Partition;

/// Cluster × class counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionTable {
    pub counts: Vec<Vec<usize>>,
    pub row_totals: Vec<usize>,
    pub col_totals: Vec<usize>,
    pub total: usize,
}

impl ConfusionTable {
    /// Builds the table from two equally long label vectors.
    pub fn new(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::UniverseMismatch(a.len(), b.len()));
        }
        let dense = |labels: &[usize]| {
            let mut map = HashMap::new();
            let ids: Vec<usize> = labels
                .iter()
                .map(|l| {
                    let next = map.len();
                    *map.entry(*l).or_insert(next)
                })
                .collect();
            (ids, map.len())
        };
        let (ra, ka) = dense(a);
        let (rb, kb) = dense(b);
        let mut counts = vec![vec![0usize; kb]; ka];
        for (&x, &y) in ra.iter().zip(&rb) {
            counts[x][y] += 1;
        }
        let row_totals = counts.iter().map(|r| r.iter().sum()).collect();
        let col_totals = (0..kb).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
        Ok(ConfusionTable {
            counts,
            row_totals,
            col_totals,
            total: a.len(),
        })
    }

    fn from_partitions(a: &Partition, b: &Partition) -> Result<Self> {
        ConfusionTable::new(&a.labels_with_singletons(), &b.labels_with_singletons())
    }
}

fn entropy(totals: &[usize], n: f64) -> f64 {
    totals
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

fn mutual_information(t: &ConfusionTable) -> f64 {
    let n = t.total as f64;
    let mut mi = 0.0;
    for (i, row) in t.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (t.row_totals[i] as f64 * t.col_totals[j] as f64)).ln();
            }
        }
    }
    mi.max(0.0)
}

/// Denominator used to normalize mutual information.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NmiNormalization {
    /// `(H_a + H_b) / 2`
    #[default]
    Arithmetic,
    /// `max(H_a, H_b)`
    Max,
}

/// Normalized mutual information with the arithmetic-mean denominator.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    nmi_with(a, b, NmiNormalization::Arithmetic)
}

/// Normalized mutual information.
///
/// When both partitions have zero entropy (one cluster each) the score is 1;
/// when only one does it is 0.
pub fn nmi_with(a: &Partition, b: &Partition, norm: NmiNormalization) -> Result<f64> {
    let t = ConfusionTable::from_partitions(a, b)?;
    if t.total == 0 {
        return Err(Error::EmptyPartition);
    }
    let n = t.total as f64;
    let (ha, hb) = (entropy(&t.row_totals, n), entropy(&t.col_totals, n));
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let denom = match norm {
        NmiNormalization::Arithmetic => (ha + hb) / 2.0,
        NmiNormalization::Max => ha.max(hb),
    };
    Ok((mutual_information(&t) / denom).clamp(0.0, 1.0))
}

fn choose2(x: usize) -> u128 {
    let x = x as u128;
    x * x.saturating_sub(1) / 2
}

/// Adjusted Rand index under the permutation model.
pub fn ari(a: &Partition, b: &Partition) -> Result<f64> {
    let t = ConfusionTable::from_partitions(a, b)?;
    let index: u128 = t.counts.iter().flatten().map(|&c| choose2(c)).sum();
    let sum_a: u128 = t.row_totals.iter().map(|&c| choose2(c)).sum();
    let sum_b: u128 = t.col_totals.iter().map(|&c| choose2(c)).sum();
    let pairs = choose2(t.total);
    if pairs == 0 {
        return Ok(1.0);
    }
    let expected = sum_a as f64 * sum_b as f64 / pairs as f64;
    let max_index = (sum_a + sum_b) as f64 / 2.0;
    if max_index == expected {
        return Ok(1.0);
    }
    Ok((index as f64 - expected) / (max_index - expected))
}

/// Newman–Girvan modularity of `p` on `g`.
pub fn modularity(g: &OneModeGraph, p: &Partition) -> Result<f64> {
    if p.len() != g.num_nodes() {
        return Err(Error::UniverseMismatch(p.len(), g.num_nodes()));
    }
    let m = g.num_edges();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let labels = p.labels_with_singletons();
    let k = labels.iter().max().map_or(0, |&x| x + 1);
    let mut internal = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for i in 0..g.num_nodes() {
        degree[labels[i]] += g.degree(i);
    }
    for (i, j) in g.edges() {
        if labels[i] == labels[j] {
            internal[labels[i]] += 1;
        }
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// How clusters are matched to classes in [`accuracy`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MatchStrategy {
    /// Exhaustive up to 8 clusters, greedy beyond.
    #[default]
    Auto,
    /// Optimal matching; refuses more than 20 clusters.
    Exhaustive,
    /// Repeatedly take the largest remaining overlap.
    Greedy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Accuracy {
    /// Matched nodes over all nodes; unassigned nodes count as errors.
    pub overall: f64,
    /// Matched nodes over assigned nodes.
    pub classified_only: f64,
    /// `(cluster id, class id)` pairs.
    pub matching: Vec<(usize, usize)>,
}

const EXHAUSTIVE_LIMIT: usize = 20;
const AUTO_EXHAUSTIVE_LIMIT: usize = 8;

/// Best one-to-one matching of clusters in `p` to classes in `truth`.
pub fn accuracy(p: &Partition, truth: &Partition, strategy: MatchStrategy) -> Result<Accuracy> {
    if p.len() != truth.len() {
        return Err(Error::UniverseMismatch(p.len(), truth.len()));
    }
    let k = p.num_clusters();
    let classes = truth.labels_with_singletons();
    let num_classes = classes.iter().max().map_or(0, |&x| x + 1);
    let mut overlap = vec![vec![0usize; num_classes]; k];
    for (c, &t) in p.assignment().iter().zip(&classes) {
        if let Some(c) = c {
            overlap[*c][t] += 1;
        }
    }
    let matching = match strategy {
        MatchStrategy::Greedy => greedy_matching(&overlap),
        MatchStrategy::Auto if k > AUTO_EXHAUSTIVE_LIMIT => greedy_matching(&overlap),
        MatchStrategy::Exhaustive if k > EXHAUSTIVE_LIMIT => return Err(Error::TooManyClusters(k)),
        _ => exact_matching(&overlap),
    };
    let matched: usize = matching.iter().map(|&(c, t)| overlap[c][t]).sum();
    let assigned = p.len() - p.unassigned_count();
    Ok(Accuracy {
        overall: if p.is_empty() {
            0.0
        } else {
            matched as f64 / p.len() as f64
        },
        classified_only: if assigned == 0 {
            0.0
        } else {
            matched as f64 / assigned as f64
        },
        matching,
    })
}

fn greedy_matching(overlap: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize, usize)> = overlap
        .iter()
        .enumerate()
        .flat_map(|(c, row)| row.iter().enumerate().map(move |(t, &w)| (w, c, t)))
        .filter(|&(w, _, _)| w > 0)
        .collect();
    cells.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used_c = vec![false; overlap.len()];
    let mut used_t = vec![false; overlap.first().map_or(0, Vec::len)];
    let mut out = Vec::new();
    for (_, c, t) in cells {
        if !used_c[c] && !used_t[t] {
            used_c[c] = true;
            used_t[t] = true;
            out.push((c, t));
        }
    }
    out.sort_unstable();
    out
}

/// Maximum-weight matching by dynamic programming over subsets of the
/// smaller side; the larger side is swept one item at a time.
fn exact_matching(overlap: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let k = overlap.len();
    let l = overlap.first().map_or(0, Vec::len);
    if k == 0 || l == 0 {
        return Vec::new();
    }
    let transpose = l > k;
    let (big, small) = if transpose { (l, k) } else { (k, l) };
    let weight = |b: usize, s: usize| {
        if transpose {
            overlap[s][b]
        } else {
            overlap[b][s]
        }
    };
    let states = 1usize << small;
    let mut dp = vec![0usize; states];
    // choice[b * states + mask] = 1 + small item taken by `b` to reach `mask`
    let mut choice = vec![0u8; big * states];
    for b in 0..big {
        let mut next = dp.clone();
        for (mask, &here) in dp.iter().enumerate() {
            for s in 0..small {
                if mask & (1 << s) == 0 {
                    let w = weight(b, s);
                    if w == 0 {
                        continue;
                    }
                    let to = mask | (1 << s);
                    if here + w > next[to] {
                        next[to] = here + w;
                        choice[b * states + to] = s as u8 + 1;
                    }
                }
            }
        }
        dp = next;
    }
    let mut mask = (0..states)
        .max_by_key(|&m| (dp[m], std::cmp::Reverse(m)))
        .unwrap_or(0);
    let mut out = Vec::new();
    for b in (0..big).rev() {
        let c = choice[b * states + mask];
        if c > 0 {
            let s = (c - 1) as usize;
            out.push(if transpose { (s, b) } else { (b, s) });
            mask &= !(1 << s);
        }
    }
    out.sort_unstable();
    out
}
