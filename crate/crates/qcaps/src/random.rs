//! Seeded random states and stream derivation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{c64, ComplexMatrix};
use crate::quantum::{DensityMatrix, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for item `index` of the stream identified by `seed`.
pub fn derived_rng(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

/// Standard normal via Box-Muller.
pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Complex Ginibre matrix with i.i.d. standard normal parts.
pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c64(normal(rng), normal(rng)))
}

/// Density matrix G G† / Tr(G G†) with G of shape dim x rank.
/// `rank = dim` gives the Hilbert-Schmidt ensemble.
pub fn random_density<R: Rng>(n_qubits: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let dim = 1 << n_qubits;
    let g = ginibre(dim, rank.max(1), rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).expect("Ginibre construction is a valid state")
}

/// Hilbert-Schmidt random state.
pub fn random_mixed<R: Rng>(n_qubits: usize, rng: &mut R) -> DensityMatrix {
    random_density(n_qubits, 1 << n_qubits, rng)
}

/// Haar-random pure state.
pub fn random_pure<R: Rng>(n_qubits: usize, rng: &mut R) -> PureState {
    let amps = (0..1usize << n_qubits)
        .map(|_| c64(normal(rng), normal(rng)))
        .collect();
    PureState::normalized(amps).expect("Gaussian vector is non-zero")
}

/// Uniform angles on [0, 2π).
pub fn random_angles<R: Rng>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count)
        .map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI))
        .collect()
}
