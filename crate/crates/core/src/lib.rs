//! Algebraic distances on graphs.
//!
//! A few sweeps of Jacobi over-relaxation on `L x = 0`, started from random
//! vectors, pull strongly coupled vertices together. The per-edge spread of
//! the iterates is a cheap `O(k R m)` connection-strength measure. This crate
//! computes it, checks the relaxation against a dense spectral oracle, and
//! uses it to preprocess weighted matching and hypergraph bisection.

pub mod algdist;
pub mod bench;
pub mod error;
pub mod graph;
pub mod hpart;
pub mod hypergraph;
pub mod io;
pub mod matching;
pub mod relax;
pub mod spectral;
pub mod synth;

pub use algdist::{edge_distances, normalized_distance, pair_distance, DistanceField, DistanceMeta, PNorm};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use hpart::{
    evaluate_cut, external_partition, fallback_bisect, hpart_experiment, hyperedge_distances, invert_weights,
    ExternalPartitioner, HpartExperimentConfig, HpartReport, HyperedgeDistances, Partition, Partitioner,
};
pub use hypergraph::{BipartiteModel, Hyperedge, Hypergraph};
pub use matching::{
    brute_force_matching, greedy_matching, matching_experiment, matching_preprocess, path_growing_matching, Matching,
    MatchingAlgorithm, MatchingExperimentConfig, MatchingReport,
};
pub use relax::{relax, relax_from, IterateSet, RelaxationConfig, Splitting};
pub use spectral::{pencil_eigen, theta_curve, PencilEigen};
