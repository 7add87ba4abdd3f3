//! Replica construction: running a one-mode network through the bipartite
//! pipeline.
//!
//! Every node becomes an entity, a copy of every node becomes a feature, and
//! entity `i` holds feature `j` when `j == i` or `j` is a neighbor of `i`. The
//! biadjacency is `I + C`, so the coincidence count of two nodes is the size of
//! the overlap of their closed neighborhoods:
//!
//! ```text
//! n_ij = ((I + C)²)_ij = δ_ij + 2 C_ij + (C²)_ij
//! ```

use crate::graph::{BipartiteGraph, OneModeGraph};

/// Biadjacency `I + C` of a one-mode graph.
///
/// [`OneModeGraph`] already rejects self-loops and asymmetric input at
/// construction, so this cannot fail.
pub fn to_bipartite(g: &OneModeGraph) -> BipartiteGraph {
    let rows = (0..g.num_nodes())
        .map(|i| {
            let mut row = Vec::with_capacity(g.degree(i) + 1);
            row.push(i);
            row.extend_from_slice(g.neighbors(i));
            row.sort_unstable();
            row
        })
        .collect();
    BipartiteGraph::new(g.labels().to_vec(), g.labels().to_vec(), rows)
        .expect("one-mode labels are unique and indices in range")
}
