//! Explicit-matrix versions of the routing subcircuits, checked against the
//! closed-form routing math at small sizes.

mod assignment;
mod qram;
mod report;

pub use assignment::{
    assignment_unitary, routing_assignment_channel, small_t_limit, verify_small_t_limit,
    AssignmentOutcome, SmallTReport,
};
pub use qram::{tensor_power, QRamState, MAX_CIRCUIT_QUBITS};
pub use report::{
    assignment_instance, run_verification, run_verification_with, swap_test_instance,
    swap_test_instance_with, CheckKind, ReportRow, VerificationReport, VerifyOptions,
    OVERLAP_TOLERANCE, SMALL_T_TOLERANCE,
};
pub use swap_test::{
    build_2k_swap, cyclic_shift_permutation, swap_test_overlap_circuit, swap_test_with_fault,
    SwapTestOutcome,
};
