//! Geometry of high-dimensional real and complex unit spheres.

mod cap;
mod config;
mod partition;
mod vector;

pub use cap::{
    cap_measure_lower_bound, cap_measure_upper_bound, lower_bound_cap_threshold, monte_carlo_cap_fraction,
    MeasureEstimate, SphericalCap,
};
pub use config::{max_distance, rhombus_search, two_set_distance_check, RhombusWitness};
pub use partition::{partition_real_sphere, partition_sphere, PartitionExport, SpherePartition};
pub use vector::{complex_to_real, ComplexUnitVector, RealUnitVector};
