//! Routing between adjacent capsule layers.

mod classical;
mod quantum;

pub use classical::{
    route_classical, softmax_over_j, squash, ClassicalCapsuleLayer, ClassicalRouting,
};
pub use quantum::{
    mix_capsule, overlap_weights, route_column, route_quantum, routing_from_overlaps,
    update_routing, ColumnRouting, PredictionBundle, RoutingState, DEFAULT_ITERATIONS,
    ZERO_OVERLAP,
};
