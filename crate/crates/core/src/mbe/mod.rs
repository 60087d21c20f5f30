//! Multipartite graph whose classes are copies of a high-dimensional Borsuk
//! graph.
//!
//! Each class is the shadow of a sparse hypergraph on `ℓ`-tuples of points
//! of `S^k`, whose hyperedges follow the almost-antipodal patterns of the
//! binary strings of length `ℓ`. Two classes are joined along the coordinate
//! pairs picked out by a proper edge colouring of `K_q`.

mod family;
mod graph;
mod hypergraph;
mod params;

pub use family::{build_q_family, proper_edge_coloring, related_coordinates, BinaryStringFamily, EdgeColoring};
pub use graph::{build_mbe, lengthy_coordinates, CliqueAudit, MbeGraph, MbeStats};
pub use hypergraph::{
    blowup_sparsify, build_base_hypergraph, shadow_graph, verify_sparsity, BorsukGraph, CoordinatePoints,
    GeometricHypergraph, SparsifyReport, SparsityReport, CANDIDATE_LIMIT, GRAPH_VERTEX_LIMIT, HYPEREDGE_LIMIT,
};
pub use params::{MbeParams, CLASS_VERTEX_LIMIT};
