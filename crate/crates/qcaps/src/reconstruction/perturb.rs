use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::quantum::DensityMatrix;

/// Unitary tweaks e^{−iθP} applied to a 4-qubit capsule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PerturbationKind {
    /// P = X on qubit 0.
    X1,
    /// P = Z on qubit 3.
    Z4,
    /// P = Z⊗Z⊗Z⊗Z on qubits 0..4.
    GlobalZ,
}

impl PerturbationKind {
    pub const ALL: [PerturbationKind; 3] = [Self::X1, Self::Z4, Self::GlobalZ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::X1 => "x1",
            Self::Z4 => "z4",
            Self::GlobalZ => "global_z",
        }
    }

    /// Qubits the capsule must have.
    pub fn min_qubits(self) -> usize {
        match self {
            Self::X1 => 1,
            Self::Z4 | Self::GlobalZ => 4,
        }
    }

    /// Pauli string of the generator on `n` qubits.
    pub fn generator(self, n: usize) -> String {
        (0..n)
            .map(|q| match (self, q) {
                (Self::X1, 0) => 'X',
                (Self::Z4, 3) => 'Z',
                (Self::GlobalZ, 0..=3) => 'Z',
                _ => 'I',
            })
            .collect()
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PerturbationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x1" => Ok(Self::X1),
            "z4" => Ok(Self::Z4),
            "global_z" | "globalz" => Ok(Self::GlobalZ),
            other => Err(Error::Argument(format!("unknown perturbation '{other}'"))),
        }
    }
}

/// −0.2, −0.14, …, 0.16: seven steps of 0.06 that stay within ±0.2.
pub fn default_thetas() -> Vec<f64> {
    (0..7).map(|i| -0.2 + 0.06 * i as f64).collect()
}

/// U χ U† with U = cos θ I − i sin θ P.
pub fn perturb_capsule(
    chi: &DensityMatrix,
    kind: PerturbationKind,
    theta: f64,
) -> Result<DensityMatrix> {
    let n = chi.n_qubits();
    if n < kind.min_qubits() {
        return Err(Error::Argument(format!(
            "{kind} perturbation needs {} qubits, capsule has {n}",
            kind.min_qubits()
        )));
    }
    let p = crate::quantum::Observable::pauli(&kind.generator(n))?;
    let mut u = ComplexMatrix::identity(chi.dim()).scale_real(theta.cos());
    u = &u + &p.matrix().scale(c64(0.0, -theta.sin()));
    let out = u.matmul(chi.matrix()).matmul(&u.adjoint());
    DensityMatrix::new(out)
}
