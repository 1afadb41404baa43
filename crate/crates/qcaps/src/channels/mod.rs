//! Sub-networks that turn an input capsule state into a prediction state.

mod kinds;
mod layers;

pub use kinds::{
    apply_channel, apply_dqfnn, apply_post_dqfnn, apply_pqc, dqfnn_with_unitary,
    post_dqfnn_with_unitary, ChannelKind, ChannelSpec, CompiledChannel,
};
pub use layers::{
    apply_circuit_rows, apply_circuit_vec, build_circuit_unitary, build_layer_unitary,
    circuit_columns, conjugate_by_circuit, euler_gate, params_per_layer, EulerLayerParams,
    ANGLES_PER_QUBIT,
};
