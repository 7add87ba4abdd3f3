//! Single-linkage agglomeration and the resulting merge tree.
//!
//! [`slink`] runs Sibson's pointer algorithm: `O(n²)` time and `O(n)` memory
//! beyond the condensed matrix. The pointer representation is then unrolled
//! into a stepwise merge list ordered by height.
//!
//! Cluster ids follow the usual convention: `0..n` are leaves and merge `k`
//! creates cluster `n + k`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::significance::CondensedDissimilarityMatrix;

/// One agglomeration step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// Stepwise dendrogram: `n - 1` merges with nondecreasing heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    #[serde(rename = "leaves")]
    leaf_labels: Vec<String>,
    merges: Vec<Merge>,
}

/// Union-find with path halving, tracking which dendrogram id each root
/// currently stands for.
struct LinkageUnionFind {
    parent: Vec<usize>,
    cluster_id: Vec<usize>,
    size: Vec<usize>,
    next_id: usize,
}

impl LinkageUnionFind {
    fn new(n: usize) -> Self {
        LinkageUnionFind {
            parent: (0..n).collect(),
            cluster_id: (0..n).collect(),
            size: vec![1; n],
            next_id: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets of `a` and `b`, returning the merge record.
    fn union(&mut self, a: usize, b: usize, height: f64) -> Merge {
        let (ra, rb) = (self.find(a), self.find(b));
        let (ia, ib) = (self.cluster_id[ra], self.cluster_id[rb]);
        let size = self.size[ra] + self.size[rb];
        let (root, child) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child] = root;
        self.size[root] = size;
        self.cluster_id[root] = self.next_id;
        self.next_id += 1;
        Merge {
            left: ia.min(ib),
            right: ia.max(ib),
            height,
            size,
        }
    }
}

/// Single-linkage clustering of a condensed dissimilarity matrix.
///
/// Ties are resolved by SLINK's pointer order, then by leaf index when the
/// pointer representation is sorted, so the output is deterministic.
pub fn slink(d: &CondensedDissimilarityMatrix, leaf_labels: Vec<String>) -> Result<Dendrogram> {
    let n = d.len();
    if n < 2 {
        return Err(Error::TooFewItems(n));
    }
    if leaf_labels.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} labels for {n} leaves",
            leaf_labels.len()
        )));
    }
    // pointer representation: leaf j joins pi[j] at height lambda[j]
    let mut pi = vec![0usize; n];
    let mut lambda = vec![f64::INFINITY; n];
    let mut m = vec![0.0f64; n];
    for i in 1..n {
        pi[i] = i;
        lambda[i] = f64::INFINITY;
        for (j, mj) in m.iter_mut().enumerate().take(i) {
            *mj = d.get(j, i);
        }
        for j in 0..i {
            let p = pi[j];
            if lambda[j] >= m[j] {
                m[p] = m[p].min(lambda[j]);
                lambda[j] = m[j];
                pi[j] = i;
            } else {
                m[p] = m[p].min(m[j]);
            }
        }
        for j in 0..i {
            if lambda[j] >= lambda[pi[j]] {
                pi[j] = i;
            }
        }
    }

    let mut order: Vec<usize> = (0..n - 1).collect();
    order.sort_by(|&a, &b| lambda[a].total_cmp(&lambda[b]).then(a.cmp(&b)));
    let mut uf = LinkageUnionFind::new(n);
    let merges = order.into_iter().map(|j| uf.union(j, pi[j], lambda[j])).collect();
    Ok(Dendrogram { leaf_labels, merges })
}

impl Dendrogram {
    /// Builds a dendrogram from an explicit merge list, checking every
    /// structural invariant.
    pub fn from_merges(leaf_labels: Vec<String>, merges: Vec<Merge>) -> Result<Self> {
        let d = Dendrogram { leaf_labels, merges };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let n = self.leaf_labels.len();
        let bad = |m: String| Err(Error::MalformedDendrogram(m));
        if n < 2 {
            return Err(Error::TooFewItems(n));
        }
        if self.merges.len() != n - 1 {
            return bad(format!("{} merges for {n} leaves", self.merges.len()));
        }
        let mut size = vec![1usize; n];
        let mut used = vec![false; 2 * n - 1];
        let mut last = f64::NEG_INFINITY;
        for (k, m) in self.merges.iter().enumerate() {
            let id = n + k;
            if m.left >= id || m.right >= id || m.left == m.right {
                return bad(format!("merge {k} refers to unavailable clusters"));
            }
            if used[m.left] || used[m.right] {
                return bad(format!("merge {k} reuses a cluster"));
            }
            if !m.height.is_finite() {
                return bad(format!("merge {k} has non-finite height"));
            }
            if m.height < last {
                return bad(format!("merge {k} height decreases"));
            }
            if m.size != size[m.left] + size[m.right] {
                return bad(format!("merge {k} has inconsistent size"));
            }
            used[m.left] = true;
            used[m.right] = true;
            size.push(m.size);
            last = m.height;
        }
        Ok(())
    }

    pub fn num_leaves(&self) -> usize {
        self.leaf_labels.len()
    }

    pub fn leaf_labels(&self) -> &[String] {
        &self.leaf_labels
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Flat clusters after applying every merge with `height <= threshold`.
    pub fn cut(&self, threshold: f64) -> Partition {
        let n = self.num_leaves();
        let mut uf = LinkageUnionFind::new(n);
        let mut members: Vec<usize> = (0..n).collect();
        // leaf representative of each cluster id
        members.reserve(self.merges.len());
        for m in self.merges.iter().take_while(|m| m.height <= threshold) {
            uf.union(members[m.left], members[m.right], m.height);
            members.push(members[m.left]);
        }
        let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
        Partition::from_keys(&roots)
    }

    /// Newick text with branch lengths.
    ///
    /// Heights are `log10` p-values, mostly negative. Leaves are placed at
    /// `2 * min(lowest height, 0)`, so every branch length is nonnegative and
    /// a single merge at height `-h` gives both leaves length `h`.
    pub fn to_newick(&self) -> String {
        let n = self.num_leaves();
        let lowest = self.merges.first().map_or(0.0, |m| m.height).min(0.0);
        let base = 2.0 * lowest;
        let height_of = |id: usize| {
            if id < n {
                base
            } else {
                self.merges[id - n].height
            }
        };
        let mut text: Vec<String> = self.leaf_labels.iter().map(|l| newick_label(l)).collect();
        for (k, m) in self.merges.iter().enumerate() {
            let left = format!("{}:{}", text[m.left], m.height - height_of(m.left));
            let right = format!("{}:{}", text[m.right], m.height - height_of(m.right));
            text.push(format!("({left},{right})"));
            text[m.left].clear();
            text[m.right].clear();
            debug_assert_eq!(text.len(), n + k + 1);
        }
        let mut root = text.pop().unwrap_or_default();
        root.push(';');
        root
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dendrogram serializes")
    }

    /// Parses the JSON produced by [`Dendrogram::to_json`] and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let d: Dendrogram =
            serde_json::from_str(text).map_err(|e| Error::MalformedDendrogram(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    /// Graphviz digraph from the root down. Leaves are filled by cluster when
    /// a partition is given, gray for unassigned ones.
    pub fn to_dot(&self, partition: Option<&Partition>) -> String {
        const PALETTE: [&str; 12] = [
            "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf",
            "#1b9e77", "#d95f02", "#7570b3", "#e7298a",
        ];
        let n = self.num_leaves();
        let mut out = String::from("digraph dendrogram {\n  node [style=filled];\n");
        for (i, label) in self.leaf_labels.iter().enumerate() {
            let color = match partition.map(|p| p.assignment()[i]) {
                Some(Some(c)) => PALETTE[c % PALETTE.len()],
                Some(None) => "gray",
                None => "white",
            };
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}\", shape=box, fillcolor=\"{color}\"];",
                label.replace('"', "\\\"")
            );
        }
        for (k, m) in self.merges.iter().enumerate() {
            let _ = writeln!(
                out,
                "  n{} [label=\"{:.4}\", shape=point, fillcolor=\"black\"];",
                n + k,
                m.height
            );
        }
        for (k, m) in self.merges.iter().enumerate() {
            let _ = writeln!(out, "  n{} -> n{};", n + k, m.left);
            let _ = writeln!(out, "  n{} -> n{};", n + k, m.right);
        }
        out.push_str("}\n");
        out
    }
}

fn newick_label(label: &str) -> String {
    if label
        .chars()
        .any(|c| matches!(c, '(' | ')' | ',' | ':' | ';' | '\'' | '[' | ']') || c.is_whitespace())
    {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_owned()
    }
}
