//! Aggregation two-grid preconditioner.
//!
//! Aggregates come from repeated heavy-edge matching on the matrix graph;
//! interpolation is piecewise constant over aggregates and the coarse
//! operator is the Galerkin product, solved exactly.

mod aggregate;
mod twogrid;

pub use aggregate::{
    aggregate_matching, build_interpolation, galerkin_coarse, parse_partition, AggregateMap,
};
pub use twogrid::{SmootherKind, TwoGrid, MAX_COARSE};
