//! The end-to-end pipeline: significance matrix, single linkage, optimal cut.

use crate::dendrogram::{slink, Dendrogram};
use crate::error::Result;
use crate::graph::{BipartiteGraph, OneModeGraph};
use crate::onemode::to_bipartite;
use crate::partition::{optimal_cut, OptimalCut};
use crate::significance::{dissimilarity_matrix_with, CondensedDissimilarityMatrix, DissimilarityOptions};

#[derive(Debug, Clone, Copy)]
pub struct ClusterOptions {
    /// Clusters smaller than this at the optimal cut are left unassigned.
    pub min_cluster_size: usize,
    pub memoize: bool,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions {
            min_cluster_size: 2,
            memoize: true,
        }
    }
}

/// Everything the pipeline produces for one graph.
#[derive(Debug, Clone)]
pub struct Clustering {
    pub matrix: CondensedDissimilarityMatrix,
    pub dendrogram: Dendrogram,
    pub optimal: OptimalCut,
}

/// Clusters the entities of a bipartite graph.
pub fn cluster(g: &BipartiteGraph, opts: &ClusterOptions) -> Result<Clustering> {
    let matrix = dissimilarity_matrix_with(
        g,
        DissimilarityOptions {
            memoize: opts.memoize,
        },
    )?;
    let dendrogram = slink(&matrix, g.entity_labels().to_vec())?;
    let optimal = optimal_cut(&dendrogram, opts.min_cluster_size);
    Ok(Clustering {
        matrix,
        dendrogram,
        optimal,
    })
}

/// Clusters the nodes of a one-mode graph through its replica bipartite graph.
pub fn cluster_onemode(g: &OneModeGraph, opts: &ClusterOptions) -> Result<Clustering> {
    cluster(&to_bipartite(g), opts)
}
