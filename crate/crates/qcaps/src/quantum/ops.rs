use num_complex::Complex64;

use super::state::qubits_for_dim;
use super::{DensityMatrix, Observable, PureState, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::linalg::{c64, jacobi_eigensystem, ComplexMatrix, Eigensystem};

/// Largest k computed by repeated multiplication; above it the spectral route is used.
pub const REPEATED_POWER_MAX_K: u32 = 4;

const MAX_DIM: usize = 1 << MAX_QUBITS;

/// Kronecker product A ⊗ B, rejecting results wider than 2^14.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= MAX_DIM && c <= MAX_DIM => Ok(a.kron(b)),
        _ => {
            let dim = rows.unwrap_or(usize::MAX).max(cols.unwrap_or(usize::MAX));
            Err(Error::Size {
                qubits: qubits_ceil(dim),
                max: MAX_QUBITS,
            })
        }
    }
}

fn qubits_ceil(dim: usize) -> usize {
    (usize::BITS - dim.saturating_sub(1).leading_zeros()) as usize
}

fn check_keep(n_qubits: usize, keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::Argument(
            "partial trace needs a non-empty keep set".into(),
        ));
    }
    let mut k = keep.to_vec();
    k.sort_unstable();
    k.dedup();
    if let Some(&bad) = k.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::Argument(format!(
            "qubit {bad} out of range for {n_qubits}-qubit state"
        )));
    }
    Ok(k)
}

/// Basis offsets contributed by each assignment of `qubits` (MSB first).
fn offsets(n_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    let m = qubits.len();
    (0..1usize << m)
        .map(|local| {
            let mut full = 0;
            for (pos, &q) in qubits.iter().enumerate() {
                if local >> (m - 1 - pos) & 1 == 1 {
                    full |= 1 << (n_qubits - 1 - q);
                }
            }
            full
        })
        .collect()
}

fn split(n_qubits: usize, keep: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let traced: Vec<usize> = (0..n_qubits).filter(|q| !keep.contains(q)).collect();
    (offsets(n_qubits, keep), offsets(n_qubits, &traced))
}

/// Reduced state on `keep` (ascending qubit order in the output).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    let keep = check_keep(n, keep)?;
    let (k_off, t_off) = split(n, &keep);
    let m = rho.matrix();
    let dk = k_off.len();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (a, &ka) in k_off.iter().enumerate() {
        for (b, &kb) in k_off.iter().enumerate() {
            let mut acc = c64(0.0, 0.0);
            for &t in &t_off {
                acc += m[(ka | t, kb | t)];
            }
            out[(a, b)] = acc;
        }
    }
    DensityMatrix::new(out)
}

/// Reduced state of |ψ><ψ| on `keep` without forming the full projector.
pub fn reduced_from_pure(state: &[Complex64], keep: &[usize]) -> Result<DensityMatrix> {
    let n = qubits_for_dim(state.len())
        .ok_or_else(|| Error::Argument("state length is not a power of 2".into()))?;
    let keep = check_keep(n, keep)?;
    let (k_off, t_off) = split(n, &keep);
    let dk = k_off.len();
    // A[k][t] = ψ[k|t]; ρ = A A†.
    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in a..dk {
            let mut acc = c64(0.0, 0.0);
            for &t in &t_off {
                acc += state[k_off[a] | t] * state[k_off[b] | t].conj();
            }
            out[(a, b)] = acc;
            out[(b, a)] = acc.conj();
        }
    }
    DensityMatrix::new(out)
}

/// A^k for a Hermitian matrix: repeated multiplication for k ≤ 4, spectral above.
pub fn hermitian_power(a: &ComplexMatrix, k: u32) -> Result<ComplexMatrix> {
    if k == 0 {
        return Err(Error::Argument("matrix power needs k >= 1".into()));
    }
    if k <= REPEATED_POWER_MAX_K {
        let mut acc = a.clone();
        for _ in 1..k {
            acc = acc.matmul(a);
        }
        Ok(acc)
    } else {
        let es = jacobi_eigensystem(a)?;
        Ok(spectral_function(&es, |x| x.powi(k as i32)))
    }
}

/// U f(Λ) U† from an eigensystem.
pub fn spectral_function(es: &Eigensystem, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = es.values.len();
    let fv: Vec<f64> = es.values.iter().map(|&x| f(x)).collect();
    let u = &es.vectors;
    ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n).map(|i| u[(r, i)] * u[(c, i)].conj() * fv[i]).sum()
    })
}

/// ρ^k.
pub fn matrix_power(rho: &DensityMatrix, k: u32) -> Result<ComplexMatrix> {
    hermitian_power(rho.matrix(), k)
}

pub fn hermitian_eigensystem(h: &Observable) -> Result<Eigensystem> {
    jacobi_eigensystem(h.matrix())
}

/// Clamp a trace that should be a real number in [0, 1].
pub(crate) fn unit_interval_trace(t: Complex64, what: &str) -> Result<f64> {
    if t.im.abs() > 1e-10 {
        return Err(Error::Numeric(format!(
            "{what} has imaginary part {:e}",
            t.im
        )));
    }
    if !(-1e-10..=1.0 + 1e-10).contains(&t.re) {
        return Err(Error::Numeric(format!("{what} = {} outside [0, 1]", t.re)));
    }
    Ok(t.re.clamp(0.0, 1.0))
}

/// k-th moment overlap Tr(ρ^k χ^k).
pub fn overlap_k(rho: &DensityMatrix, chi: &DensityMatrix, k: u32) -> Result<f64> {
    if rho.dim() != chi.dim() {
        return Err(Error::Argument(format!(
            "overlap of states with dims {} and {}",
            rho.dim(),
            chi.dim()
        )));
    }
    let rk = matrix_power(rho, k)?;
    let ck = matrix_power(chi, k)?;
    unit_interval_trace(rk.trace_product(&ck), "overlap")
}

/// k-th purity Tr(χ^{2k}).
pub fn purity_k(chi: &DensityMatrix, k: u32) -> Result<f64> {
    overlap_k(chi, chi, k)
}

/// Tr(ρ O).
pub fn expectation(rho: &DensityMatrix, obs: &Observable) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::Argument(format!(
            "expectation of {}-dim observable on {}-dim state",
            obs.dim(),
            rho.dim()
        )));
    }
    let t = rho.matrix().trace_product(obs.matrix());
    if t.im.abs() > 1e-10 {
        return Err(Error::Numeric(format!(
            "expectation has imaginary part {:e}",
            t.im
        )));
    }
    Ok(t.re)
}

/// Amplitude-encode a real vector: amplitudes = x / ‖x‖₂.
pub fn amplitude_encode(pixels: &[f64]) -> Result<PureState> {
    if pixels.is_empty() || !pixels.len().is_power_of_two() {
        return Err(Error::Argument(format!(
            "amplitude encoding needs a power-of-2 length, got {}",
            pixels.len()
        )));
    }
    if pixels.iter().any(|x| !x.is_finite()) {
        return Err(Error::Encoding("non-finite pixel value".into()));
    }
    let norm = pixels.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Encoding(
            "cannot amplitude-encode an all-zero vector".into(),
        ));
    }
    let amps: Vec<Complex64> = pixels.iter().map(|&x| c64(x / norm, 0.0)).collect();
    PureState::normalized(amps)
}
