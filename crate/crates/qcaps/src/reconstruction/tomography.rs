use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::quantum::DensityMatrix;

const LABELS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// All 4^n Pauli strings in lexicographic order over I < X < Y < Z.
pub fn pauli_strings(n_qubits: usize) -> Vec<String> {
    (0..1usize << (2 * n_qubits))
        .map(|idx| {
            (0..n_qubits)
                .map(|q| LABELS[(idx >> (2 * (n_qubits - 1 - q))) & 3])
                .collect()
        })
        .collect()
}

/// For Pauli index `idx`: the bit-flip mask and ⟨x ⊕ mask| P |x⟩ as a function of x.
fn pauli_action(n: usize, idx: usize) -> (usize, impl Fn(usize) -> Complex64) {
    let mut flip = 0;
    let mut zmask = 0;
    let mut ys = 0u32;
    for q in 0..n {
        let bit = 1 << (n - 1 - q);
        match (idx >> (2 * (n - 1 - q))) & 3 {
            1 => flip |= bit,
            2 => {
                flip |= bit;
                zmask |= bit;
                ys += 1;
            }
            3 => zmask |= bit,
            _ => {}
        }
    }
    // Y = i X Z, so P|x⟩ = i^{#Y} (−1)^{popcount(x & zmask)} |x ⊕ flip⟩.
    let base = [c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0), c64(0.0, -1.0)][(ys % 4) as usize];
    (flip, move |x: usize| {
        if (x & zmask).count_ones().is_multiple_of(2) {
            base
        } else {
            -base
        }
    })
}

/// Tr(χ P) for every Pauli string P, in [`pauli_strings`] order. The first
/// entry is the identity component.
pub fn tomography_vector(chi: &DensityMatrix) -> Vec<f64> {
    let n = chi.n_qubits();
    let m = chi.matrix();
    (0..1usize << (2 * n))
        .map(|idx| {
            let (flip, phase) = pauli_action(n, idx);
            // Tr(χP) = Σ_x ⟨x|χ|x⊕f⟩ ⟨x⊕f|P|x⟩.
            let t: Complex64 = (0..chi.dim()).map(|x| m[(x, x ^ flip)] * phase(x)).sum();
            t.re.clamp(-1.0, 1.0)
        })
        .collect()
}

/// χ = 2^{−n} Σ_P c_P P.
pub fn inverse_tomography(features: &[f64]) -> Result<DensityMatrix> {
    let len = features.len();
    if len == 0 || !len.is_power_of_two() || !len.trailing_zeros().is_multiple_of(2) {
        return Err(Error::Argument(format!("{len} is not a power of 4")));
    }
    let n = len.trailing_zeros() as usize / 2;
    let dim = 1 << n;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (idx, &c) in features.iter().enumerate() {
        let (flip, phase) = pauli_action(n, idx);
        for x in 0..dim {
            out[(x ^ flip, x)] += phase(x) * (c / dim as f64);
        }
    }
    DensityMatrix::new(out)
}
