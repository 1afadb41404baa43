//! Cluster-Ising chains and their exact ground states.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{c64, jacobi_eigensystem, ComplexMatrix};
use crate::quantum::{Observable, PureState};
use crate::random::rng_from_seed;

pub const DEFAULT_MAX_SPINS: usize = 12;

/// Ground-space gaps below this are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// H(α) = −Σ_j X_{j−1} Z_j X_{j+1} + α Σ_j Y_j Y_{j+1}, periodic, with `n ≤ DEFAULT_MAX_SPINS`.
pub fn build_cluster_ising(n: usize, alpha: f64) -> Result<Observable> {
    build_cluster_ising_capped(n, alpha, DEFAULT_MAX_SPINS)
}

pub fn build_cluster_ising_capped(n: usize, alpha: f64, max_spins: usize) -> Result<Observable> {
    if n < 3 {
        return Err(Error::Argument(format!(
            "cluster-Ising chain needs n >= 3, got {n}"
        )));
    }
    if n > max_spins {
        return Err(Error::Size {
            qubits: n,
            max: max_spins,
        });
    }
    if !alpha.is_finite() {
        return Err(Error::Argument("non-finite coupling".into()));
    }
    let dim = 1usize << n;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let mut h = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        for j in 0..n {
            let (l, r) = ((j + n - 1) % n, (j + 1) % n);
            // X_l Z_j X_r
            let sign = if x & bit(j) != 0 { -1.0 } else { 1.0 };
            h[(x ^ bit(l) ^ bit(r), x)] += c64(-sign, 0.0);
            // Y_j Y_r: Y|b⟩ = i(−1)^b |1−b⟩
            let parity = ((x & bit(j) != 0) as u8 + (x & bit(r) != 0) as u8) % 2;
            let yy = if parity == 0 { -1.0 } else { 1.0 };
            h[(x ^ bit(j) ^ bit(r), x)] += c64(alpha * yy, 0.0);
        }
    }
    Observable::new(h)
}

/// Lowest eigenpair of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub state: PureState,
    pub energy: f64,
    /// E_1 − E_0.
    pub gap: f64,
}

pub fn ground_state(h: &Observable) -> Result<PureState> {
    Ok(ground_state_with_energy(h)?.state)
}

/// Lowest eigenvector under the solver's fixed ordering; near-degeneracy is logged.
/// Real symmetric operators go through a tridiagonal QL solver, anything else
/// through the complex Jacobi solver.
pub fn ground_state_with_energy(h: &Observable) -> Result<GroundState> {
    let m = h.matrix();
    let (values, vector) = if m.is_real() {
        real_symmetric_lowest(m)?
    } else {
        let es = jacobi_eigensystem(m)?;
        let v = es.vector(0);
        (es.values, v)
    };
    let energy = values[0];
    let gap = values.get(1).map_or(f64::INFINITY, |e| e - energy);
    if gap < DEGENERACY_GAP {
        log::debug!("degenerate ground space, gap {gap:e}; taking the first eigenvector");
    }
    let state = PureState::normalized(vector)?;
    Ok(GroundState { state, energy, gap })
}

/// Sorted eigenvalues and the eigenvector of the smallest one.
fn real_symmetric_lowest(m: &ComplexMatrix) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let n = m.rows();
    let a = nalgebra::DMatrix::from_fn(n, n, |r, c| m[(r, c)].re);
    let eig = nalgebra::SymmetricEigen::try_new(a, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vector = eig
        .eigenvectors
        .column(order[0])
        .iter()
        .map(|&x| c64(x, 0.0))
        .collect();
    Ok((values, vector))
}

/// One labelled chain ground state.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinChainSample {
    pub n: usize,
    pub alpha: f64,
    pub state: PureState,
    /// 0 below the critical point (SPT), 1 at or above it (antiferromagnetic).
    pub label: usize,
}

pub fn phase_label(alpha: f64) -> usize {
    usize::from(alpha >= 1.0)
}

/// i.i.d. uniform draws on [lo, hi) in generator order.
pub fn sample_alphas(count: usize, lo: f64, hi: f64, seed: u64) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Argument(format!(
            "empty coupling range [{lo}, {hi})"
        )));
    }
    let mut rng = rng_from_seed(seed);
    Ok((0..count).map(|_| rng.gen_range(lo..hi)).collect())
}

pub fn spin_sample(n: usize, alpha: f64) -> Result<SpinChainSample> {
    let h = build_cluster_ising(n, alpha)?;
    let g = ground_state_with_energy(&h)?;
    Ok(SpinChainSample {
        n,
        alpha,
        state: g.state,
        label: phase_label(alpha),
    })
}

/// Ground states at seeded uniform couplings. Samples are diagonalized in parallel
/// and keep the draw order.
pub fn sample_spin_chains(
    n: usize,
    count: usize,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<Vec<SpinChainSample>> {
    let alphas = sample_alphas(count, lo, hi, seed)?;
    alphas.into_par_iter().map(|a| spin_sample(n, a)).collect()
}
