//! Graph statistics: clique numbers, `p`-independence, densities and the
//! closed-form density formulas.

mod clique;
mod formulas;
mod graph;
mod independence;

pub use clique::{clique_number, for_each_maximal_clique, max_clique, CliqueCertificate, EXHAUSTIVE_VERTEX_LIMIT};
pub use formulas::*;
pub use graph::{complete_join, density_report, DensityReport, LabeledGraph, PairDensity};
pub use independence::{p_independence, PIndependence};
