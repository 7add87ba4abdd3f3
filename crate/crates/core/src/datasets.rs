//! Small benchmark networks bundled with the crate.
//!
//! The college football network is not redistributed here. [`football`]
//! reads `football.edges` and `football.truth` from the directory named by
//! `FETCLUST_DATA_DIR` when that variable is set.

use std::fs;
use std::io::BufReader;
use std::path::PathBuf;

use crate::graph::{BipartiteGraph, LabelMap, OneModeGraph, TextOptions};

/// Environment variable naming a directory with optional extra datasets.
pub const DATA_DIR_ENV: &str = "FETCLUST_DATA_DIR";

const KARATE_EDGES: &str = include_str!("../data/karate.edges");
const KARATE_TRUTH: &str = include_str!("../data/karate.truth");
const SOUTHERN_WOMEN: &str = include_str!("../data/southern_women.tsv");

/// Raw text of a bundled dataset.
#[derive(Debug, Clone, Copy)]
pub struct BundledText {
    pub graph: &'static str,
    pub truth: Option<&'static str>,
}

/// Names accepted by [`bundled`].
pub const NAMES: &[&str] = &["karate", "southern-women"];

pub fn bundled(name: &str) -> Option<BundledText> {
    match name {
        "karate" => Some(BundledText {
            graph: KARATE_EDGES,
            truth: Some(KARATE_TRUTH),
        }),
        "southern-women" => Some(BundledText {
            graph: SOUTHERN_WOMEN,
            truth: None,
        }),
        _ => None,
    }
}

/// Zachary's karate club (nodes `1`..`34`) with the two factions as truth.
pub fn karate() -> (OneModeGraph, LabelMap) {
    let opts = TextOptions::default();
    let g = OneModeGraph::read_edgelist(KARATE_EDGES.as_bytes(), &opts)
        .expect("bundled karate edge list parses")
        .graph;
    let truth = LabelMap::read(KARATE_TRUTH.as_bytes(), &opts).expect("bundled karate truth parses");
    (g, truth)
}

/// College football games with conference membership as truth, if
/// `football.edges` and `football.truth` exist under [`DATA_DIR_ENV`].
pub fn football() -> Option<(OneModeGraph, LabelMap)> {
    let dir = PathBuf::from(std::env::var_os(DATA_DIR_ENV)?);
    let open = |name: &str| fs::File::open(dir.join(name)).ok().map(BufReader::new);
    let opts = TextOptions::default();
    let g = OneModeGraph::read_edgelist(open("football.edges")?, &opts)
        .ok()?
        .graph;
    let truth = LabelMap::read(open("football.truth")?, &opts).ok()?;
    Some((g, truth))
}

/// Southern Women attendance matrix: 18 women × 14 events.
pub fn southern_women() -> BipartiteGraph {
    BipartiteGraph::read_matrix(SOUTHERN_WOMEN.as_bytes(), &TextOptions::default())
        .expect("bundled southern women matrix parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn karate_shape() {
        let (g, truth) = karate();
        assert_eq!(g.num_nodes(), 34);
        assert_eq!(g.num_edges(), 78);
        assert_eq!(truth.len(), 34);
        truth.check_within(g.labels()).unwrap();
    }

    #[test]
    fn southern_women_shape() {
        let g = southern_women();
        assert_eq!((g.num_entities(), g.num_features()), (18, 14));
        assert_eq!(g.num_edges(), 89);
    }
}
