//! Layered Euler-rotation circuits with a nearest-neighbour CNOT chain.
//!
//! One layer applies Rz(θ_z2)·Ry(θ_y)·Rz(θ_z1) to every qubit and then
//! CNOT(0→1), CNOT(1→2), …, CNOT(n-2→n-1). Parameters are stored layer-major,
//! and within a layer as (θ_z1, θ_y, θ_z2) per qubit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::gates::{self, Gate2};

pub const ANGLES_PER_QUBIT: usize = 3;

/// Euler angles for one layer on `n_qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerLayerParams {
    n_qubits: usize,
    angles: Vec<f64>,
}

impl EulerLayerParams {
    pub fn new(n_qubits: usize, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != ANGLES_PER_QUBIT * n_qubits {
            return Err(Error::Argument(format!(
                "layer on {n_qubits} qubits needs {} angles, got {}",
                ANGLES_PER_QUBIT * n_qubits,
                angles.len()
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::Argument("non-finite Euler angle".into()));
        }
        Ok(Self { n_qubits, angles })
    }

    pub fn zeros(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            angles: vec![0.0; ANGLES_PER_QUBIT * n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// (θ_z1, θ_y, θ_z2) for qubit `q`.
    pub fn qubit(&self, q: usize) -> (f64, f64, f64) {
        let a = &self.angles[ANGLES_PER_QUBIT * q..ANGLES_PER_QUBIT * (q + 1)];
        (a[0], a[1], a[2])
    }
}

/// The fused single-qubit rotation Rz(z2)·Ry(y)·Rz(z1).
pub fn euler_gate(z1: f64, y: f64, z2: f64) -> Gate2 {
    gates::mul2(&gates::rz(z2), &gates::mul2(&gates::ry(y), &gates::rz(z1)))
}

fn layer_gates(n_qubits: usize, layer: &[f64]) -> Vec<Gate2> {
    (0..n_qubits)
        .map(|q| {
            let a = &layer[ANGLES_PER_QUBIT * q..];
            euler_gate(a[0], a[1], a[2])
        })
        .collect()
}

pub fn params_per_layer(n_qubits: usize) -> usize {
    ANGLES_PER_QUBIT * n_qubits
}

fn check_params(n_qubits: usize, params: &[f64]) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::Argument("circuit needs at least one qubit".into()));
    }
    let per = params_per_layer(n_qubits);
    if !params.len().is_multiple_of(per) {
        return Err(Error::Argument(format!(
            "{} parameters is not a whole number of {n_qubits}-qubit layers",
            params.len()
        )));
    }
    Ok(())
}

/// M ← U M for the layered circuit `params`.
pub fn apply_circuit_rows(m: &mut ComplexMatrix, n_qubits: usize, params: &[f64]) {
    let per = params_per_layer(n_qubits);
    for layer in params.chunks_exact(per) {
        for (q, g) in layer_gates(n_qubits, layer).iter().enumerate() {
            gates::apply_1q_rows(m, n_qubits, q, g);
        }
        for q in 0..n_qubits.saturating_sub(1) {
            gates::apply_cnot_rows(m, n_qubits, q, q + 1);
        }
    }
}

/// ρ ← U ρ U† for the layered circuit `params`.
pub fn conjugate_by_circuit(rho: &mut ComplexMatrix, n_qubits: usize, params: &[f64]) {
    let per = params_per_layer(n_qubits);
    for layer in params.chunks_exact(per) {
        for (q, g) in layer_gates(n_qubits, layer).iter().enumerate() {
            gates::apply_1q_rows(rho, n_qubits, q, g);
            gates::apply_1q_cols_adjoint(rho, n_qubits, q, g);
        }
        for q in 0..n_qubits.saturating_sub(1) {
            gates::apply_cnot_rows(rho, n_qubits, q, q + 1);
            gates::apply_cnot_cols(rho, n_qubits, q, q + 1);
        }
    }
}

/// ψ ← U ψ for the layered circuit `params`.
pub fn apply_circuit_vec(v: &mut [Complex64], n_qubits: usize, params: &[f64]) {
    let per = params_per_layer(n_qubits);
    for layer in params.chunks_exact(per) {
        for (q, g) in layer_gates(n_qubits, layer).iter().enumerate() {
            gates::apply_1q_vec(v, n_qubits, q, g);
        }
        for q in 0..n_qubits.saturating_sub(1) {
            gates::apply_cnot_vec(v, n_qubits, q, q + 1);
        }
    }
}

/// Columns `cols` of the circuit unitary, as a 2^n x cols.len() matrix.
pub fn circuit_columns(n_qubits: usize, params: &[f64], cols: &[usize]) -> ComplexMatrix {
    let dim = 1 << n_qubits;
    let mut m = ComplexMatrix::zeros(dim, cols.len());
    for (j, &c) in cols.iter().enumerate() {
        m[(c, j)] = Complex64::new(1.0, 0.0);
    }
    apply_circuit_rows(&mut m, n_qubits, params);
    m
}

/// Unitary of a single layer.
pub fn build_layer_unitary(n_qubits: usize, layer: &EulerLayerParams) -> Result<ComplexMatrix> {
    if layer.n_qubits() != n_qubits {
        return Err(Error::Argument(format!(
            "layer parameters are for {} qubits, circuit has {n_qubits}",
            layer.n_qubits()
        )));
    }
    build_circuit_unitary(n_qubits, layer.angles())
}

/// Unitary of a multi-layer circuit; later layers multiply on the left.
pub fn build_circuit_unitary(n_qubits: usize, params: &[f64]) -> Result<ComplexMatrix> {
    check_params(n_qubits, params)?;
    if params.iter().any(|a| !a.is_finite()) {
        return Err(Error::Argument("non-finite circuit parameter".into()));
    }
    let mut u = ComplexMatrix::identity(1 << n_qubits);
    apply_circuit_rows(&mut u, n_qubits, params);
    Ok(u)
}
