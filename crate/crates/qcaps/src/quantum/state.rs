use num_complex::Complex64;

use super::{HERMITIAN_TOLERANCE, SYMMETRIZE_THRESHOLD, TRACE_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{c64, jacobi_eigensystem, ComplexMatrix};

pub(crate) fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        None
    } else {
        Some(dim.trailing_zeros() as usize)
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator on `n` qubits.
///
/// Construction checks Hermiticity, trace and finiteness. Positivity needs an
/// eigendecomposition and is checked by [`DensityMatrix::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mut matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Argument(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let n_qubits = qubits_for_dim(matrix.rows()).ok_or_else(|| {
            Error::Argument(format!(
                "density matrix dim {} is not a power of 2",
                matrix.rows()
            ))
        })?;
        if !matrix.is_finite() {
            return Err(Error::Numeric(
                "density matrix has non-finite entries".into(),
            ));
        }
        hermitize(&mut matrix)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(Error::Contract(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        Ok(Self { n_qubits, matrix })
    }

    /// |ψ><ψ|.
    pub fn from_pure(state: &PureState) -> Self {
        Self {
            n_qubits: state.n_qubits(),
            matrix: ComplexMatrix::outer(state.amplitudes(), state.amplitudes()),
        }
    }

    /// |index><index| on `n_qubits`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1 << n_qubits;
        assert!(index < dim, "basis index out of range");
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(index, index)] = c64(1.0, 0.0);
        Self {
            n_qubits,
            matrix: m,
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self {
            n_qubits,
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Skip validation. Callers guarantee the invariants up to rounding.
    pub(crate) fn from_matrix_unchecked(mut matrix: ComplexMatrix) -> Self {
        let n_qubits = qubits_for_dim(matrix.rows()).expect("power-of-two dimension");
        debug_assert!(matrix.hermitian_drift() <= HERMITIAN_TOLERANCE);
        matrix.symmetrize();
        Self { n_qubits, matrix }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let es = jacobi_eigensystem(&self.matrix)?;
        Ok(es.values[0])
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(jacobi_eigensystem(&self.matrix)?.values)
    }

    /// Full invariant check: Hermitian, unit trace and eigenvalues ≥ -1e-10.
    pub fn validate(&self) -> Result<()> {
        let drift = self.matrix.hermitian_drift();
        if drift > HERMITIAN_TOLERANCE {
            return Err(Error::Contract(format!("Hermitian drift {drift:e}")));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::Contract(format!("trace {tr}")));
        }
        let min = self.min_eigenvalue()?;
        if min < -1e-10 {
            return Err(Error::Contract(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Σ_i w_i ρ_i for weights summing to one; all inputs share a dimension.
    pub fn mixture(states: &[&DensityMatrix], weights: &[f64]) -> Result<DensityMatrix> {
        if states.is_empty() || states.len() != weights.len() {
            return Err(Error::Argument(
                "mixture needs matching non-empty inputs".into(),
            ));
        }
        let dim = states[0].dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (s, &w) in states.iter().zip(weights) {
            if s.dim() != dim {
                return Err(Error::Argument(
                    "mixture of states with different dims".into(),
                ));
            }
            acc.add_scaled(&s.matrix, w);
        }
        DensityMatrix::new(acc)
    }
}

/// Symmetrize drift in (1e-12, 1e-10]; anything larger is a contract violation.
pub(crate) fn hermitize(m: &mut ComplexMatrix) -> Result<()> {
    let drift = m.hermitian_drift();
    if drift > HERMITIAN_TOLERANCE {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (drift {drift:e})"
        )));
    }
    if drift > SYMMETRIZE_THRESHOLD {
        m.symmetrize();
    } else {
        for i in 0..m.rows() {
            m[(i, i)].im = 0.0;
        }
    }
    Ok(())
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(amplitudes.len()).ok_or_else(|| {
            Error::Argument(format!(
                "state length {} is not a power of 2",
                amplitudes.len()
            ))
        })?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!(
                "state squared norm is {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize arbitrary amplitudes.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Encoding(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![c64(0.0, 0.0); 1 << n_qubits];
        amps[index] = c64(1.0, 0.0);
        Self { amplitudes: amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// self ⊗ |0> with the new qubit as least significant.
    pub fn with_ancilla(&self) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * 2);
        for &a in &self.amplitudes {
            amps.push(a);
            amps.push(c64(0.0, 0.0));
        }
        PureState { amplitudes: amps }
    }
}

/// A Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(mut matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Contract("observable must be square".into()));
        }
        hermitize(&mut matrix)?;
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// A Pauli string such as "IZX".
    pub fn pauli(labels: &str) -> Result<Self> {
        let m = super::gates::pauli_string_matrix(labels)
            .ok_or_else(|| Error::Argument(format!("bad Pauli string {labels:?}")))?;
        Ok(Self { matrix: m })
    }

    /// Single-qubit Pauli `label` on qubit `q` of `n_qubits`.
    pub fn pauli_on(n_qubits: usize, q: usize, label: char) -> Result<Self> {
        if q >= n_qubits {
            return Err(Error::Argument(format!(
                "qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        let s: String = (0..n_qubits)
            .map(|i| if i == q { label } else { 'I' })
            .collect();
        Self::pauli(&s)
    }
}
