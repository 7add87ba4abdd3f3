//! Bipartite and one-mode graph types, plus the text formats they are read from.
//!
//! Labels are mapped to dense indices in first-appearance order and every
//! computation downstream works on indices. Graph values are immutable once
//! built.

use std::collections::HashMap;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Assigns dense indices to labels in the order they are first seen.
#[derive(Debug, Default, Clone)]
struct Interner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Interner {
    fn get_or_insert(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        i
    }

    fn from_labels(labels: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Interner { labels, index })
    }
}

/// How lines of delimited text are split into fields.
#[derive(Debug, Clone, Default)]
pub struct TextOptions {
    /// `None` splits on runs of whitespace.
    pub delimiter: Option<char>,
    /// Skip the first non-comment line.
    pub header: bool,
}

impl TextOptions {
    pub fn with_delimiter(delimiter: char) -> Self {
        TextOptions {
            delimiter: Some(delimiter),
            header: false,
        }
    }

    fn split<'a>(&self, line: &'a str) -> Vec<&'a str> {
        match self.delimiter {
            None => line.split_whitespace().collect(),
            Some(d) => line.split(d).map(str::trim).collect(),
        }
    }
}

/// Yields `(line_number, content)` for every non-empty, non-comment line.
fn content_lines<R: BufRead>(reader: R, skip_header: bool) -> impl Iterator<Item = Result<(usize, String)>> {
    let mut header_pending = skip_header;
    reader.lines().enumerate().filter_map(move |(i, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                return Some(Err(Error::Parse {
                    line: i + 1,
                    message: e.to_string(),
                }))
            }
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        if header_pending {
            header_pending = false;
            return None;
        }
        Some(Ok((i + 1, trimmed.to_owned())))
    })
}

/// A graph together with bookkeeping from the parse that produced it.
#[derive(Debug, Clone)]
pub struct Loaded<G> {
    pub graph: G,
    /// Number of repeated edges that were collapsed.
    pub duplicates: usize,
}

/// Entities, features and the 0/1 incidence between them.
///
/// Row `i` is the sorted list of feature indices held by entity `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    entity_labels: Vec<String>,
    feature_labels: Vec<String>,
    rows: Vec<Vec<usize>>,
}

/// Feature counts of a pair of entities: their row sizes and their overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coincidence {
    pub n_i: usize,
    pub n_j: usize,
    pub n_ij: usize,
}

/// Which entities may carry each feature, for complement encoding.
#[derive(Debug, Clone)]
pub enum FeatureDomain {
    /// Every entity is eligible for every feature.
    All,
    /// Per-feature list of eligible entity indices.
    Restricted(Vec<Vec<usize>>),
}

impl BipartiteGraph {
    /// Builds a graph from labels and rows; rows are sorted and deduplicated.
    pub fn new(
        entity_labels: Vec<String>,
        feature_labels: Vec<String>,
        mut rows: Vec<Vec<usize>>,
    ) -> Result<Self> {
        Interner::from_labels(entity_labels.clone())?;
        Interner::from_labels(feature_labels.clone())?;
        if rows.len() != entity_labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} rows for {} entities",
                rows.len(),
                entity_labels.len()
            )));
        }
        let nf = feature_labels.len();
        for row in rows.iter_mut() {
            row.sort_unstable();
            row.dedup();
            if let Some(&last) = row.last() {
                if last >= nf {
                    return Err(Error::IndexOutOfRange { index: last, len: nf });
                }
            }
        }
        Ok(BipartiteGraph {
            entity_labels,
            feature_labels,
            rows,
        })
    }

    /// Builds a graph from `(entity, feature)` label pairs.
    ///
    /// Returns the graph and the number of duplicate pairs dropped.
    pub fn from_edges<'a, I>(edges: I) -> (Self, usize)
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut entities = Interner::default();
        let mut features = Interner::default();
        let mut rows: Vec<Vec<usize>> = Vec::new();
        let mut seen = HashSet::new();
        let mut duplicates = 0;
        for (e, f) in edges {
            let ei = entities.get_or_insert(e);
            let fi = features.get_or_insert(f);
            if ei == rows.len() {
                rows.push(Vec::new());
            }
            if seen.insert((ei, fi)) {
                rows[ei].push(fi);
            } else {
                duplicates += 1;
            }
        }
        for row in rows.iter_mut() {
            row.sort_unstable();
        }
        let g = BipartiteGraph {
            entity_labels: entities.labels,
            feature_labels: features.labels,
            rows,
        };
        (g, duplicates)
    }

    /// Builds a graph from a dense 0/1 matrix with generated labels `e0..`, `f0..`.
    pub fn from_dense(matrix: &[Vec<bool>]) -> Result<Self> {
        let nf = matrix.first().map_or(0, Vec::len);
        let rows = matrix
            .iter()
            .map(|r| {
                if r.len() != nf {
                    return Err(Error::RaggedRow {
                        row: String::new(),
                        found: r.len(),
                        expected: nf,
                    });
                }
                Ok(r.iter()
                    .enumerate()
                    .filter_map(|(j, &b)| b.then_some(j))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        BipartiteGraph::new(
            (0..matrix.len()).map(|i| format!("e{i}")).collect(),
            (0..nf).map(|j| format!("f{j}")).collect(),
            rows,
        )
    }

    pub fn num_entities(&self) -> usize {
        self.entity_labels.len()
    }

    pub fn num_features(&self) -> usize {
        self.feature_labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entity_labels(&self) -> &[String] {
        &self.entity_labels
    }

    pub fn feature_labels(&self) -> &[String] {
        &self.feature_labels
    }

    /// Sorted feature indices of entity `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn has_edge(&self, entity: usize, feature: usize) -> bool {
        self.rows[entity].binary_search(&feature).is_ok()
    }

    /// Row sizes and number of shared features for entities `i` and `j`.
    pub fn coincidence_counts(&self, i: usize, j: usize) -> Result<Coincidence> {
        let len = self.num_entities();
        for index in [i, j] {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
        }
        Ok(Coincidence {
            n_i: self.rows[i].len(),
            n_j: self.rows[j].len(),
            n_ij: sorted_intersection_len(&self.rows[i], &self.rows[j]),
        })
    }

    /// Swaps the roles of entities and features.
    pub fn transpose(&self) -> BipartiteGraph {
        let mut rows = vec![Vec::new(); self.num_features()];
        for (e, row) in self.rows.iter().enumerate() {
            for &f in row {
                rows[f].push(e);
            }
        }
        BipartiteGraph {
            entity_labels: self.feature_labels.clone(),
            feature_labels: self.entity_labels.clone(),
            rows,
        }
    }

    /// Replaces every feature `f` by the pair `f:yes` / `f:no`.
    ///
    /// Each eligible entity links to exactly one of the two.
    pub fn binarize_with_complement(&self, domain: &FeatureDomain) -> Result<BipartiteGraph> {
        let nf = self.num_features();
        let ne = self.num_entities();
        let eligible: Option<Vec<Vec<bool>>> = match domain {
            FeatureDomain::All => None,
            FeatureDomain::Restricted(lists) => {
                if lists.len() != nf {
                    return Err(Error::InvalidParameter(format!(
                        "domain covers {} features, graph has {nf}",
                        lists.len()
                    )));
                }
                let mut mask = vec![vec![false; ne]; nf];
                for (f, list) in lists.iter().enumerate() {
                    for &e in list {
                        if e >= ne {
                            return Err(Error::IndexOutOfRange { index: e, len: ne });
                        }
                        mask[f][e] = true;
                    }
                }
                Some(mask)
            }
        };
        let feature_labels = self
            .feature_labels
            .iter()
            .flat_map(|f| [format!("{f}:yes"), format!("{f}:no")])
            .collect();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(e, row)| {
                let mut out = Vec::with_capacity(nf);
                let mut it = row.iter().peekable();
                for f in 0..nf {
                    let has = it.next_if_eq(&&f).is_some();
                    if has {
                        out.push(2 * f);
                    } else if eligible.as_ref().is_none_or(|m| m[f][e]) {
                        out.push(2 * f + 1);
                    }
                }
                out
            })
            .collect();
        Ok(BipartiteGraph {
            entity_labels: self.entity_labels.clone(),
            feature_labels,
            rows,
        })
    }

    /// Parses a two-column edge list of `entity feature` lines.
    pub fn read_edgelist<R: BufRead>(reader: R, opts: &TextOptions) -> Result<Loaded<Self>> {
        let pairs = read_pairs(reader, opts)?;
        if pairs.is_empty() {
            return Err(Error::NoEdges);
        }
        let (graph, duplicates) =
            BipartiteGraph::from_edges(pairs.iter().map(|(_, a, b)| (a.as_str(), b.as_str())));
        Ok(Loaded { graph, duplicates })
    }

    /// Parses a labelled 0/1 matrix: a header of feature labels, then one row
    /// per entity starting with its label.
    ///
    /// The header may carry a leading corner cell; it is detected by comparing
    /// its width with the first data row.
    pub fn read_matrix<R: BufRead>(reader: R, opts: &TextOptions) -> Result<Self> {
        let mut lines = content_lines(reader, false);
        let (_, header) = lines.next().transpose()?.ok_or(Error::NoEdges)?;
        let opts = resolve_delimiter(opts, &header);
        let header_cells: Vec<String> = opts.split(&header).into_iter().map(str::to_owned).collect();
        let mut entity_labels = Vec::new();
        let mut rows = Vec::new();
        let mut features: Option<Vec<String>> = None;
        for line in lines {
            let (_, line) = line?;
            let cells = opts.split(&line);
            let features = features.get_or_insert_with(|| {
                if header_cells.len() == cells.len() {
                    header_cells[1..].to_vec()
                } else {
                    header_cells.clone()
                }
            });
            let label = cells[0].to_owned();
            if cells.len() != features.len() + 1 {
                return Err(Error::RaggedRow {
                    row: label,
                    found: cells.len() - 1,
                    expected: features.len(),
                });
            }
            let mut row = Vec::new();
            for (j, cell) in cells[1..].iter().enumerate() {
                match *cell {
                    "1" => row.push(j),
                    "0" => {}
                    other => {
                        return Err(Error::NonBinaryCell {
                            row: label,
                            column: features[j].clone(),
                            value: other.to_owned(),
                        })
                    }
                }
            }
            entity_labels.push(label);
            rows.push(row);
        }
        let features = features.ok_or(Error::NoEdges)?;
        BipartiteGraph::new(entity_labels, features, rows)
    }

    /// Serializes as a tab-separated edge list in entity-major order.
    pub fn to_edgelist(&self) -> String {
        let mut out = String::new();
        for (e, row) in self.rows.iter().enumerate() {
            for &f in row {
                let _ = writeln!(out, "{}\t{}", self.entity_labels[e], self.feature_labels[f]);
            }
        }
        out
    }
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn resolve_delimiter(opts: &TextOptions, sample: &str) -> TextOptions {
    let mut opts = opts.clone();
    if opts.delimiter.is_none() {
        opts.delimiter = if sample.contains('\t') {
            Some('\t')
        } else if sample.contains(',') {
            Some(',')
        } else {
            None
        };
    }
    opts
}

fn read_pairs<R: BufRead>(reader: R, opts: &TextOptions) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for line in content_lines(reader, opts.header) {
        let (n, line) = line?;
        let fields = opts.split(&line);
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::Parse {
                line: n,
                message: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        out.push((n, fields[0].to_owned(), fields[1].to_owned()));
    }
    Ok(out)
}

/// Undirected simple graph: symmetric adjacency, no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneModeGraph {
    labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
}

impl OneModeGraph {
    /// Validates symmetry and the absence of self-loops.
    pub fn new(labels: Vec<String>, mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        Interner::from_labels(labels.clone())?;
        let n = labels.len();
        if adjacency.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} adjacency lists for {n} nodes",
                adjacency.len()
            )));
        }
        for (i, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            nbrs.dedup();
            if let Some(&last) = nbrs.last() {
                if last >= n {
                    return Err(Error::IndexOutOfRange { index: last, len: n });
                }
            }
            if nbrs.binary_search(&i).is_ok() {
                return Err(Error::SelfLoop(labels[i].clone()));
            }
        }
        for (i, nbrs) in adjacency.iter().enumerate() {
            for &j in nbrs {
                if adjacency[j].binary_search(&i).is_err() {
                    return Err(Error::Asymmetric(i, j));
                }
            }
        }
        Ok(OneModeGraph { labels, adjacency })
    }

    /// Builds a graph from undirected label pairs; repeats (in either
    /// direction) are collapsed and counted.
    pub fn from_edges<'a, I>(edges: I) -> Result<(Self, usize)>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut nodes = Interner::default();
        let mut adjacency: Vec<Vec<usize>> = Vec::new();
        let mut seen = HashSet::new();
        let mut duplicates = 0;
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a.to_owned()));
            }
            let i = nodes.get_or_insert(a);
            let j = nodes.get_or_insert(b);
            adjacency.resize_with(nodes.labels.len(), Vec::new);
            if seen.insert((i.min(j), i.max(j))) {
                adjacency[i].push(j);
                adjacency[j].push(i);
            } else {
                duplicates += 1;
            }
        }
        for nbrs in adjacency.iter_mut() {
            nbrs.sort_unstable();
        }
        Ok((
            OneModeGraph {
                labels: nodes.labels,
                adjacency,
            },
            duplicates,
        ))
    }

    /// Parses an undirected edge list; self-loop lines are rejected.
    pub fn read_edgelist<R: BufRead>(reader: R, opts: &TextOptions) -> Result<Loaded<Self>> {
        let pairs = read_pairs(reader, opts)?;
        if pairs.is_empty() {
            return Err(Error::NoEdges);
        }
        if let Some((line, a, _)) = pairs.iter().find(|(_, a, b)| a == b) {
            return Err(Error::Parse {
                line: *line,
                message: format!("self-loop on {a:?}"),
            });
        }
        let (graph, duplicates) =
            OneModeGraph::from_edges(pairs.iter().map(|(_, a, b)| (a.as_str(), b.as_str())))?;
        Ok(Loaded { graph, duplicates })
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sorted neighbor indices of node `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn to_edgelist(&self) -> String {
        let mut out = String::new();
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{}\t{}", self.labels[i], self.labels[j]);
        }
        out
    }
}

/// Ground-truth class for each labelled node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMap {
    entries: Vec<(String, String)>,
    index: HashMap<String, usize>,
}

impl LabelMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the class of `node`, replacing any previous value.
    pub fn insert(&mut self, node: impl Into<String>, class: impl Into<String>) {
        let node = node.into();
        let class = class.into();
        match self.index.get(&node) {
            Some(&i) => self.entries[i].1 = class,
            None => {
                self.index.insert(node.clone(), self.entries.len());
                self.entries.push((node, class));
            }
        }
    }

    pub fn get(&self, node: &str) -> Option<&str> {
        self.index.get(node).map(|&i| self.entries[i].1.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// Parses `node class` lines.
    pub fn read<R: BufRead>(reader: R, opts: &TextOptions) -> Result<Self> {
        let mut map = LabelMap::new();
        for line in content_lines(reader, opts.header) {
            let (n, line) = line?;
            let fields = opts.split(&line);
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: n,
                    message: format!("expected 2 fields, found {}", fields.len()),
                });
            }
            if map.get(fields[0]).is_some() {
                return Err(Error::DuplicateLabel(fields[0].to_owned()));
            }
            map.insert(fields[0], fields[1]);
        }
        Ok(map)
    }

    /// Checks that every labelled node is one of `nodes`.
    pub fn check_within(&self, nodes: &[String]) -> Result<()> {
        let known: HashSet<&str> = nodes.iter().map(String::as_str).collect();
        match self.entries.iter().find(|(n, _)| !known.contains(n.as_str())) {
            Some((n, _)) => Err(Error::UnknownLabel(n.clone())),
            None => Ok(()),
        }
    }

    /// Node labels in `nodes` that carry no class.
    pub fn missing<'a>(&self, nodes: &'a [String]) -> Vec<&'a str> {
        nodes
            .iter()
            .filter(|n| !self.index.contains_key(n.as_str()))
            .map(String::as_str)
            .collect()
    }

    /// Converts to a partition over `nodes`; class ids follow first
    /// appearance in `nodes`.
    pub fn to_partition(&self, nodes: &[String]) -> Result<(Partition, Vec<String>)> {
        let mut classes = Interner::default();
        let mut assignment = Vec::with_capacity(nodes.len());
        for node in nodes {
            let class = self.get(node).ok_or_else(|| Error::UnknownLabel(node.clone()))?;
            assignment.push(Some(classes.get_or_insert(class)));
        }
        Ok((Partition::from_assignment(assignment), classes.labels))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, c) in &self.entries {
            let _ = writeln!(out, "{n}\t{c}");
        }
        out
    }
}

/// One roll-call record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteRecord {
    pub member: String,
    pub bill: String,
    pub cast_code: i64,
}

/// The three vote classes that cast codes collapse into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoteClass {
    Yea,
    Nay,
    NotVoting,
}

impl VoteClass {
    /// Codes 1-3 are yea, 4-6 nay, and 0, 7, 8, 9 not voting.
    pub fn from_cast_code(code: i64) -> Option<Self> {
        match code {
            1..=3 => Some(VoteClass::Yea),
            4..=6 => Some(VoteClass::Nay),
            0 | 7..=9 => Some(VoteClass::NotVoting),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VoteClass::Yea => "yea",
            VoteClass::Nay => "nay",
            VoteClass::NotVoting => "notvoting",
        }
    }
}

/// Parses a `member bill cast_code` table. A first line whose cast code
/// is not an integer is taken as a header.
pub fn read_vote_table<R: BufRead>(reader: R, opts: &TextOptions) -> Result<Vec<VoteRecord>> {
    let mut out = Vec::new();
    let mut first = true;
    for line in content_lines(reader, opts.header) {
        let (n, line) = line?;
        let opts = resolve_delimiter(opts, &line);
        let fields = opts.split(&line);
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: n,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let code = match fields[2].parse::<i64>() {
            Ok(c) => c,
            Err(_) if first && !opts.header => {
                first = false;
                continue;
            }
            Err(_) => {
                return Err(Error::Parse {
                    line: n,
                    message: format!("cast code {:?} is not an integer", fields[2]),
                })
            }
        };
        first = false;
        out.push(VoteRecord {
            member: fields[0].to_owned(),
            bill: fields[1].to_owned(),
            cast_code: code,
        });
    }
    Ok(out)
}

/// Turns roll-call records into a member × (bill, vote class) graph.
pub fn votes_preprocess(records: &[VoteRecord]) -> Result<BipartiteGraph> {
    let mut seen = HashSet::new();
    let mut features = Vec::with_capacity(records.len());
    for r in records {
        let class = VoteClass::from_cast_code(r.cast_code).ok_or_else(|| Error::InvalidCastCode {
            member: r.member.clone(),
            bill: r.bill.clone(),
            code: r.cast_code,
        })?;
        if !seen.insert((r.member.as_str(), r.bill.as_str())) {
            return Err(Error::DuplicateVote {
                member: r.member.clone(),
                bill: r.bill.clone(),
            });
        }
        features.push(format!("{}:{}", r.bill, class.as_str()));
    }
    let (g, _) = BipartiteGraph::from_edges(
        records
            .iter()
            .zip(&features)
            .map(|(r, f)| (r.member.as_str(), f.as_str())),
    );
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edgelist(s: &str) -> Result<Loaded<BipartiteGraph>> {
        BipartiteGraph::read_edgelist(s.as_bytes(), &TextOptions::default())
    }

    #[test]
    fn edgelist_readback() {
        let g = edgelist("a f1\na f2\nb f2\n").unwrap().graph;
        assert_eq!(g.num_entities(), 2);
        assert_eq!(g.num_features(), 2);
        assert_eq!(g.row(0), &[0, 1]);
        assert_eq!(g.row(1), &[1]);
    }

    #[test]
    fn edgelist_empty_and_comments() {
        assert_eq!(edgelist("").unwrap_err(), Error::NoEdges);
        assert_eq!(edgelist("# only a comment\n\n").unwrap_err(), Error::NoEdges);
    }

    #[test]
    fn edgelist_duplicates_collapse() {
        let once = edgelist("a f1\n").unwrap();
        let twice = edgelist("a f1\na f1\n").unwrap();
        assert_eq!(once.graph, twice.graph);
        assert_eq!(twice.duplicates, 1);
    }

    #[test]
    fn edgelist_wrong_field_count() {
        match edgelist("a f1\nb\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e:?}"),
        }
        assert!(edgelist("a f1 x\n").is_err());
    }

    #[test]
    fn edgelist_custom_delimiter() {
        let opts = TextOptions {
            delimiter: Some(','),
            header: true,
        };
        let g = BipartiteGraph::read_edgelist("entity,feature\nan e,f 1\n".as_bytes(), &opts)
            .unwrap()
            .graph;
        assert_eq!(g.entity_labels(), &["an e".to_owned()]);
        assert_eq!(g.feature_labels(), &["f 1".to_owned()]);
    }

    #[test]
    fn matrix_identity() {
        let g =
            BipartiteGraph::read_matrix("x y\na 1 0\nb 0 1\n".as_bytes(), &TextOptions::default()).unwrap();
        assert_eq!(g.row(0), &[0]);
        assert_eq!(g.row(1), &[1]);
        assert_eq!(g.feature_labels(), &["x".to_owned(), "y".to_owned()]);
    }

    #[test]
    fn matrix_with_corner_cell() {
        let g = BipartiteGraph::read_matrix(",x,y\na,1,1\n".as_bytes(), &TextOptions::default()).unwrap();
        assert_eq!(g.num_features(), 2);
        assert_eq!(g.row(0), &[0, 1]);
    }

    #[test]
    fn matrix_all_ones() {
        let text = "f1 f2 f3 f4\na 1 1 1 1\nb 1 1 1 1\nc 1 1 1 1\n";
        let g = BipartiteGraph::read_matrix(text.as_bytes(), &TextOptions::default()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.coincidence_counts(i, j).unwrap().n_ij, 4);
            }
        }
    }

    #[test]
    fn matrix_errors() {
        let err =
            BipartiteGraph::read_matrix("x y\na 1 2\n".as_bytes(), &TextOptions::default()).unwrap_err();
        assert_eq!(
            err,
            Error::NonBinaryCell {
                row: "a".into(),
                column: "y".into(),
                value: "2".into()
            }
        );
        let err =
            BipartiteGraph::read_matrix("x y\na 1 0\nb 1\n".as_bytes(), &TextOptions::default()).unwrap_err();
        assert!(matches!(err, Error::RaggedRow { .. }));
    }

    #[test]
    fn coincidence_examples() {
        let (g, _) = BipartiteGraph::from_edges([
            ("a", "f1"),
            ("a", "f2"),
            ("b", "f2"),
            ("b", "f3"),
            ("c", "f1"),
            ("c", "f2"),
            ("c", "f3"),
            ("d", "f4"),
        ]);
        let c = g.coincidence_counts(0, 1).unwrap();
        assert_eq!((c.n_i, c.n_j, c.n_ij), (2, 2, 1));
        let c = g.coincidence_counts(2, 2).unwrap();
        assert_eq!((c.n_i, c.n_j, c.n_ij), (3, 3, 3));
        assert_eq!(g.coincidence_counts(0, 3).unwrap().n_ij, 0);
        assert_eq!(
            g.coincidence_counts(0, 4).unwrap_err(),
            Error::IndexOutOfRange { index: 4, len: 4 }
        );
    }

    #[test]
    fn transpose_examples() {
        let g = BipartiteGraph::from_dense(&[vec![true, true], vec![false, true]]).unwrap();
        let t = g.transpose();
        assert_eq!(t.rows(), &[vec![0], vec![0, 1]]);
        assert_eq!(t.transpose(), g);

        let (g, _) = BipartiteGraph::from_edges([("a", "f1"), ("a", "f2")]);
        assert_eq!(g.transpose().coincidence_counts(0, 1).unwrap().n_ij, 1);
    }

    #[test]
    fn votes_grouping() {
        let rec = |m: &str, b: &str, c| VoteRecord {
            member: m.into(),
            bill: b.into(),
            cast_code: c,
        };
        let g = votes_preprocess(&[rec("m1", "b1", 2), rec("m1", "b2", 9), rec("m2", "b1", 5)]).unwrap();
        assert_eq!(
            g.feature_labels(),
            &["b1:yea".to_owned(), "b2:notvoting".into(), "b1:nay".into()]
        );
        assert_eq!(g.row(0), &[0, 1]);

        assert!(matches!(
            votes_preprocess(&[rec("m1", "b1", 1), rec("m1", "b1", 4)]),
            Err(Error::DuplicateVote { .. })
        ));
        assert!(matches!(
            votes_preprocess(&[rec("m1", "b1", 10)]),
            Err(Error::InvalidCastCode { code: 10, .. })
        ));
    }

    #[test]
    fn vote_table_header_detection() {
        let text = "member,bill,cast_code\nm1,b1,1\nm2,b1,6\n";
        let recs = read_vote_table(text.as_bytes(), &TextOptions::default()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].cast_code, 6);
    }

    #[test]
    fn complement_encoding() {
        let g = BipartiteGraph::new(
            vec!["p".into()],
            vec!["reading".into(), "sport".into()],
            vec![vec![0]],
        )
        .unwrap();
        let b = g.binarize_with_complement(&FeatureDomain::All).unwrap();
        let labels: Vec<&str> = b.row(0).iter().map(|&f| b.feature_labels()[f].as_str()).collect();
        assert_eq!(labels, ["reading:yes", "sport:no"]);

        let full = BipartiteGraph::from_dense(&[vec![true, true, true]]).unwrap();
        let b = full.binarize_with_complement(&FeatureDomain::All).unwrap();
        assert!(b.row(0).iter().all(|f| f % 2 == 0));

        let none = BipartiteGraph::new(vec!["e".into()], vec!["x".into(), "y".into()], vec![vec![]]).unwrap();
        let b = none.binarize_with_complement(&FeatureDomain::All).unwrap();
        assert_eq!(b.row(0), &[1, 3]);
    }

    #[test]
    fn complement_restricted_domain() {
        let g = BipartiteGraph::from_dense(&[vec![false, false], vec![false, true]]).unwrap();
        let domain = FeatureDomain::Restricted(vec![vec![1], vec![0, 1]]);
        let b = g.binarize_with_complement(&domain).unwrap();
        // entity 0 is outside feature 0's domain
        assert_eq!(b.row(0), &[3]);
        assert_eq!(b.row(1), &[1, 2]);
    }

    #[test]
    fn onemode_rejects_self_loops() {
        let err = OneModeGraph::read_edgelist("a b\nc c\n".as_bytes(), &TextOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(
            OneModeGraph::new(vec!["a".into()], vec![vec![0]]),
            Err(Error::SelfLoop(_))
        ));
        assert!(matches!(
            OneModeGraph::new(vec!["a".into(), "b".into()], vec![vec![1], vec![]]),
            Err(Error::Asymmetric(0, 1))
        ));
    }

    #[test]
    fn onemode_reverse_duplicate() {
        let l = OneModeGraph::read_edgelist("a b\nb a\n".as_bytes(), &TextOptions::default()).unwrap();
        assert_eq!(l.duplicates, 1);
        assert_eq!(l.graph.num_edges(), 1);
    }

    #[test]
    fn label_map_partition() {
        let lm = LabelMap::read("a x\nb y\nc x\n".as_bytes(), &TextOptions::default()).unwrap();
        let nodes: Vec<String> = ["c", "b", "a"].iter().map(|s| s.to_string()).collect();
        let (p, classes) = lm.to_partition(&nodes).unwrap();
        assert_eq!(classes, ["x", "y"]);
        assert_eq!(p.assignment(), &[Some(0), Some(1), Some(0)]);
        assert!(lm.check_within(&nodes[..2]).is_err());
        assert_eq!(lm.missing(&["z".to_owned()]), ["z"]);
    }
}
