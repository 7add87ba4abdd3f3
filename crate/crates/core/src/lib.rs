//! Hierarchical clustering of bipartite data by the statistical significance
//! of shared features.
//!
//! Two entities are compared by the one-sided Fisher's exact test p-value of
//! the number of features they share. Those p-values feed single-linkage
//! clustering, and the dendrogram is cut where the percolation susceptibility
//! of the cluster sizes peaks. One-mode networks go through the same pipeline
//! after a replica construction.
//!
//! ```
//! use fetclust::{cluster, BipartiteGraph, ClusterOptions};
//!
//! let (g, _) = BipartiteGraph::from_edges([
//!     ("ann", "chess"), ("ann", "go"), ("ann", "poker"),
//!     ("bob", "chess"), ("bob", "go"), ("bob", "poker"),
//!     ("cy", "run"), ("cy", "swim"), ("cy", "bike"),
//!     ("dee", "run"), ("dee", "swim"), ("dee", "bike"),
//! ]);
//! let result = cluster(&g, &ClusterOptions::default())?;
//! assert_eq!(result.optimal.partition.num_clusters(), 2);
//! assert_eq!(result.optimal.chi, 1.0);
//! # Ok::<(), fetclust::Error>(())
//! ```

pub mod datasets;
pub mod dendrogram;
mod error;
pub mod graph;
pub mod metrics;
pub mod onemode;
pub mod partition;
pub mod pipeline;
pub mod significance;
pub mod synth;

pub use dendrogram::{slink, Dendrogram, Merge};
pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Coincidence, FeatureDomain, LabelMap, OneModeGraph, TextOptions};
pub use partition::{optimal_cut, scan, susceptibility, OptimalCut, Partition, SusceptibilityProfile};
pub use pipeline::{cluster, cluster_onemode, ClusterOptions, Clustering};
pub use significance::{
    dissimilarity_matrix, fet_upper_tail, hypergeom_log_pmf, CondensedDissimilarityMatrix, LogPValue,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/significance.md")]
    mod significance {}
    #[doc = include_str!("../../../book/src/single-linkage.md")]
    mod single_linkage {}
    #[doc = include_str!("../../../book/src/susceptibility.md")]
    mod susceptibility {}
    #[doc = include_str!("../../../book/src/one-mode.md")]
    mod one_mode {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
}
