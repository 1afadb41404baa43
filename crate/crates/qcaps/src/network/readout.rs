use super::config::Readout;
use crate::quantum::DensityMatrix;

/// (1 + mean_q ⟨Z_q⟩)/2, read off the diagonal.
pub fn readout_z(chi: &DensityMatrix) -> f64 {
    let n = chi.n_qubits();
    if n == 0 {
        return 1.0;
    }
    let m = chi.matrix();
    let mut total = 0.0;
    for x in 0..chi.dim() {
        let p = m[(x, x)].re;
        // Σ_q ⟨x|Z_q|x⟩ = n − 2·popcount(x)
        total += p * (n as f64 - 2.0 * x.count_ones() as f64);
    }
    ((1.0 + total / n as f64) / 2.0).clamp(0.0, 1.0)
}

/// Tr(χ²).
pub fn readout_purity(chi: &DensityMatrix) -> f64 {
    let m = chi.matrix();
    m.trace_product(m).re.clamp(0.0, 1.0)
}

pub fn readout(kind: Readout, chi: &DensityMatrix) -> f64 {
    match kind {
        Readout::ZMean => readout_z(chi),
        Readout::Purity => readout_purity(chi),
    }
}

/// Index of the largest activation; ties go to the lower index.
pub fn predicted_class(activations: &[f64]) -> usize {
    let mut best = 0;
    for (c, &p) in activations.iter().enumerate() {
        if p > activations[best] {
            best = c;
        }
    }
    best
}
