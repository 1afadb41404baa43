//! Quantum-state primitives: density matrices, pure states, observables and
//! the operations built on them.

pub mod gates;
mod ops;
mod state;

pub use ops::{
    amplitude_encode, expectation, hermitian_eigensystem, hermitian_power, matrix_power, overlap_k,
    partial_trace, purity_k, reduced_from_pure, spectral_function, tensor_product,
    REPEATED_POWER_MAX_K,
};
pub use state::{DensityMatrix, Observable, PureState};

/// Largest supported register, in qubits.
pub const MAX_QUBITS: usize = 14;
/// Maximum entrywise |A - A†| accepted for Hermitian inputs.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Drift above this is symmetrized away.
pub const SYMMETRIZE_THRESHOLD: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-10;
