//! Ramsey–Turán lower-bound constructions and weighted-graph certificates.
//!
//! The crate is split along the lines of the underlying mathematics:
//!
//! * [`sphere`] – real and complex unit spheres, caps, equal-measure partitions
//!   and the rhombus configuration search.
//! * [`cbe`] – the two-class complex Bollobás–Erdős graph.
//! * [`mbe`] – the multipartite Bollobás–Erdős graph built from high-dimensional
//!   Borsuk graphs.
//! * [`analysis`] – clique search, `p`-independence, density statistics and the
//!   closed-form density formulas.
//! * [`weighted`] – `p`-weighted graphs, dominating extensions, the simplex
//!   quadratic program and herculean sets.
//! * [`io`] – text and JSON exchange formats.

pub mod analysis;
pub mod bitset;
pub mod cbe;
mod error;
pub mod io;
pub mod mbe;
pub mod rng;
pub mod sphere;
pub mod weighted;

pub use error::{Error, Result};

/// Absolute slack applied to every closed geometric predicate.
pub const GEOM_TOL: f64 = 1e-9;
