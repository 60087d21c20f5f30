//! `p`-weighted graphs and the upper-bound calculus on them.

mod dominance;
mod graph;
mod hero;
mod simplex;
mod smallp;

pub use dominance::{
    admissible_weight, dominance_target, in_g_p_q, is_dominating_extension, maximal_dominating_extension,
    multiset_dominates, DominatingExtension, ExtensionTable, Membership, EXACT_VERTEX_LIMIT,
};
pub use graph::PWeightedGraph;
pub use hero::{find_herculean, HerculeanCertificate, HERCULEAN_VERTEX_LIMIT};
pub use simplex::{
    dense_core, g_of_a, g_of_a_numeric, quadratic_form, row_sums, ExactOptimum, SimplexSolution, EXACT_SIMPLEX_LIMIT,
};
pub use smallp::{
    find_g_pq_subgraph, verify_theorem15_window, DegreeCondition, FoundSubgraph, Route, SubgraphSearch,
    WindowReport, WindowSlack,
};
