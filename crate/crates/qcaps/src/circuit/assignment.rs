use num_complex::Complex64;

use super::qram::{QRamState, MAX_CIRCUIT_QUBITS};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::DensityMatrix;

/// exp(−it Σ_i q̃_i |i⟩⟨i| ⊗ 1_bus ⊗ X) on index ⊗ bus ⊗ ancilla.
///
/// Block-diagonal with one ancilla rotation per (address, bus) pair; unused
/// addresses get the identity.
pub fn assignment_unitary(
    index_qubits: usize,
    bus_qubits: usize,
    qtilde: &[f64],
    t: f64,
) -> Result<ComplexMatrix> {
    let n = index_qubits + bus_qubits + 1;
    if n > MAX_CIRCUIT_QUBITS {
        return Err(Error::Size {
            qubits: n,
            max: MAX_CIRCUIT_QUBITS,
        });
    }
    if qtilde.len() > 1 << index_qubits {
        return Err(Error::Argument("more weights than addresses".into()));
    }
    let bd = 1usize << bus_qubits;
    let dim = 1usize << n;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for i in 0..1usize << index_qubits {
        let theta = qtilde.get(i).copied().unwrap_or(0.0) * t;
        let (s, c) = theta.sin_cos();
        for b in 0..bd {
            let base = 2 * (i * bd + b);
            u[(base, base)] = Complex64::new(c, 0.0);
            u[(base + 1, base + 1)] = Complex64::new(c, 0.0);
            u[(base, base + 1)] = Complex64::new(0.0, -s);
            u[(base + 1, base)] = Complex64::new(0.0, -s);
        }
    }
    Ok(u)
}

/// Post-selected output of the assignment circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentOutcome {
    /// Address distribution after projecting the ancilla on |1⟩.
    pub q: Vec<f64>,
    pub p0: f64,
    pub p1: f64,
}

/// Evolve σ_in ⊗ |0⟩⟨0| under the assignment unitary and post-select the ancilla on |1⟩.
pub fn routing_assignment_channel(
    sigma_in: &QRamState,
    qtilde: &[f64],
    t: f64,
) -> Result<AssignmentOutcome> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Argument(format!(
            "evolution time must be positive, got {t}"
        )));
    }
    if qtilde.len() != sigma_in.m() {
        return Err(Error::Argument("one weight per address is required".into()));
    }
    if qtilde.iter().any(|q| !(0.0..=1.0).contains(q)) {
        return Err(Error::Argument("weights must lie in [0, 1]".into()));
    }
    if qtilde.iter().all(|&q| q == 0.0) {
        return Err(Error::PostSelection(
            "all weights are zero, ancilla never flips".into(),
        ));
    }
    let idx_q = sigma_in.index_qubits();
    let bus_q = sigma_in.bus_qubits();
    let u = assignment_unitary(idx_q, bus_q, qtilde, t)?;
    let sigma = sigma_in.materialize()?;
    let ancilla = DensityMatrix::basis(1, 0);
    let joint = sigma.matrix().kron(ancilla.matrix());
    let out = u.matmul(&joint).matmul(&u.adjoint());

    let bd = 1usize << bus_q;
    let m = sigma_in.m();
    let mut blocks = vec![0.0; m];
    let mut p0 = 0.0;
    for x in 0..out.rows() {
        let v = out[(x, x)].re;
        if x % 2 == 1 {
            let i = x / (2 * bd);
            if i < m {
                blocks[i] += v;
            }
        } else {
            p0 += v;
        }
    }
    let p1: f64 = blocks.iter().sum();
    if p1 <= f64::MIN_POSITIVE {
        return Err(Error::PostSelection(format!(
            "post-selection probability {p1:e}"
        )));
    }
    Ok(AssignmentOutcome {
        q: blocks.into_iter().map(|b| b / p1).collect(),
        p0,
        p1,
    })
}

/// q̃_i²/Σq̃², the small-t limit of the assignment circuit.
pub fn small_t_limit(qtilde: &[f64]) -> Vec<f64> {
    let z: f64 = qtilde.iter().map(|q| q * q).sum();
    qtilde.iter().map(|q| q * q / z).collect()
}

/// Deviation of the circuit from its small-t limit over a sequence of times.
#[derive(Clone, Debug, PartialEq)]
pub struct SmallTReport {
    pub times: Vec<f64>,
    /// max_i |q_i − q_i^lim| / q_i^lim at each time.
    pub deviations: Vec<f64>,
}

impl SmallTReport {
    /// deviation(t_n) / deviation(t_{n+1}); `None` where the later deviation is zero.
    pub fn ratios(&self) -> Vec<Option<f64>> {
        self.deviations
            .windows(2)
            .map(|w| if w[1] > 0.0 { Some(w[0] / w[1]) } else { None })
            .collect()
    }

    /// Every consecutive ratio lies in `[lo, hi]`, or both deviations are negligible.
    pub fn ratios_within(&self, lo: f64, hi: f64) -> bool {
        self.deviations.windows(2).all(|w| {
            if w[0] < 1e-13 && w[1] < 1e-13 {
                true
            } else {
                w[1] > 0.0 && (lo..=hi).contains(&(w[0] / w[1]))
            }
        })
    }

    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().cloned().fold(0.0, f64::max)
    }
}

/// Run the assignment circuit at each `t` with a single-qubit |0⟩ bus and uniform addressing.
pub fn verify_small_t_limit(qtilde: &[f64], times: &[f64]) -> Result<SmallTReport> {
    let bus = vec![DensityMatrix::basis(1, 0); qtilde.len()];
    let sigma = QRamState::uniform(&bus, 1)?;
    let limit = small_t_limit(qtilde);
    let mut deviations = Vec::with_capacity(times.len());
    for &t in times {
        let out = routing_assignment_channel(&sigma, qtilde, t)?;
        let dev = out
            .q
            .iter()
            .zip(&limit)
            .filter(|(_, l)| **l > 0.0)
            .map(|(q, l)| (q - l).abs() / l)
            .fold(0.0, f64::max);
        deviations.push(dev);
    }
    Ok(SmallTReport {
        times: times.to_vec(),
        deviations,
    })
}
