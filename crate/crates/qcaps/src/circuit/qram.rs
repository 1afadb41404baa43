use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::{tensor_product, DensityMatrix};

/// Global matrices built here are capped at this many qubits.
pub const MAX_CIRCUIT_QUBITS: usize = 12;

/// Address-correlated copies Σ_i p_i |i⟩⟨i| ⊗ ρ_i^{⊗k}, kept in block form.
#[derive(Clone, Debug)]
pub struct QRamState {
    k: usize,
    address_probs: Vec<f64>,
    bus_states: Vec<DensityMatrix>,
    subsystem_qubits: usize,
}

/// ρ^{⊗k}.
pub fn tensor_power(rho: &DensityMatrix, k: usize) -> Result<DensityMatrix> {
    if k == 0 {
        return Err(Error::Argument("tensor power needs k >= 1".into()));
    }
    let mut acc = rho.matrix().clone();
    for _ in 1..k {
        acc = tensor_product(&acc, rho.matrix())?;
    }
    DensityMatrix::new(acc)
}

impl QRamState {
    /// Build from single-copy prediction states; the bus holds k copies of each.
    pub fn new(address_probs: Vec<f64>, predictions: &[DensityMatrix], k: usize) -> Result<Self> {
        let m = predictions.len();
        if m == 0 || address_probs.len() != m {
            return Err(Error::Argument(
                "qRAM needs one probability per prediction".into(),
            ));
        }
        if address_probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::Argument(
                "address probabilities must lie in [0, 1]".into(),
            ));
        }
        let total: f64 = address_probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Argument(format!(
                "address probabilities sum to {total}"
            )));
        }
        let n = predictions[0].n_qubits();
        if predictions.iter().any(|p| p.n_qubits() != n) {
            return Err(Error::Argument("predictions differ in size".into()));
        }
        let bus_states = predictions
            .iter()
            .map(|p| tensor_power(p, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            k,
            address_probs,
            bus_states,
            subsystem_qubits: n,
        })
    }

    /// Uniform 1/M addressing, the input state of the overlap circuit.
    pub fn uniform(predictions: &[DensityMatrix], k: usize) -> Result<Self> {
        let m = predictions.len().max(1);
        Self::new(vec![1.0 / m as f64; predictions.len()], predictions, k)
    }

    pub fn m(&self) -> usize {
        self.address_probs.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn address_probs(&self) -> &[f64] {
        &self.address_probs
    }

    pub fn bus_states(&self) -> &[DensityMatrix] {
        &self.bus_states
    }

    /// Qubits of one copy.
    pub fn subsystem_qubits(&self) -> usize {
        self.subsystem_qubits
    }

    pub fn bus_qubits(&self) -> usize {
        self.subsystem_qubits * self.k
    }

    /// Address register width; unused addresses carry zero weight.
    pub fn index_qubits(&self) -> usize {
        index_qubits(self.m())
    }

    /// The full block-diagonal state on index ⊗ bus.
    pub fn materialize(&self) -> Result<DensityMatrix> {
        let nq = self.index_qubits() + self.bus_qubits();
        if nq > MAX_CIRCUIT_QUBITS {
            return Err(Error::Size {
                qubits: nq,
                max: MAX_CIRCUIT_QUBITS,
            });
        }
        let bd = 1usize << self.bus_qubits();
        let mut m = ComplexMatrix::zeros(1 << nq, 1 << nq);
        for (i, (p, s)) in self.address_probs.iter().zip(&self.bus_states).enumerate() {
            for r in 0..bd {
                for c in 0..bd {
                    m[(i * bd + r, i * bd + c)] = s.matrix()[(r, c)] * *p;
                }
            }
        }
        DensityMatrix::new(m)
    }
}

pub(crate) fn index_qubits(m: usize) -> usize {
    (m.next_power_of_two().trailing_zeros() as usize).max(1)
}
