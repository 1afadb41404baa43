//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies a real plane rotation, so the complex case costs
//! the same number of sweeps as the real symmetric one. Matrices whose
//! entries are all real take a pure `f64` path.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm at which iteration stops, relative to ‖A‖_F.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }
}

/// Diagonalize a Hermitian matrix. Hermiticity is not checked here.
pub fn jacobi_eigensystem(a: &ComplexMatrix) -> Result<Eigensystem> {
    if !a.is_square() {
        return Err(Error::Argument(format!(
            "eigensystem of non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let (values, vectors) = if a.is_real() {
        jacobi_real(a)?
    } else {
        jacobi_complex(a)?
    };
    Ok(sorted(values, vectors))
}

fn rotation(app: f64, aqq: f64, apq_abs: f64) -> (f64, f64, f64) {
    let theta = (aqq - app) / (2.0 * apq_abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (t, c, t * c)
}

fn jacobi_complex(input: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = input.rows();
    let mut a = input.clone();
    a.symmetrize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let zero = Complex64::new(0.0, 0.0);

    for _sweep in 0..MAX_SWEEPS {
        if off_norm_complex(&a) <= JACOBI_TOLERANCE * scale {
            let values = (0..n).map(|i| a[(i, i)].re).collect();
            return Ok((values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let apq_abs = apq.norm();
                if apq_abs <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / apq_abs;
                let (t, c, s) = rotation(a[(p, p)].re, a[(q, q)].re, apq_abs);
                let ph_conj = phase.conj();
                let app = a[(p, p)].re - t * apq_abs;
                let aqq = a[(q, q)].re + t * apq_abs;
                // A <- A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * ph_conj * s;
                    a[(k, q)] = akp * s + akq * ph_conj * c;
                }
                // A <- J^dagger A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                a[(p, p)] = Complex64::new(app, 0.0);
                a[(q, q)] = Complex64::new(aqq, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * ph_conj * s;
                    v[(k, q)] = vkp * s + vkq * ph_conj * c;
                }
            }
        }
    }
    Err(Error::Numeric(format!(
        "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (dim {n})"
    )))
}

fn off_norm_complex(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += a[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi_real(input: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = input.rows();
    let mut a: Vec<f64> = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            a[r * n + c] = 0.5 * (input[(r, c)].re + input[(c, r)].re);
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[p * n + q] * a[p * n + q];
                }
            }
        }
        if off.sqrt() <= JACOBI_TOLERANCE * scale {
            let values = (0..n).map(|i| a[i * n + i]).collect();
            let vectors = ComplexMatrix::from_fn(n, n, |r, c| Complex64::new(v[r * n + c], 0.0));
            return Ok((values, vectors));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let sign = apq.signum();
                let (t, c, s) = rotation(a[p * n + p], a[q * n + q], apq.abs());
                let app = a[p * n + p] - t * apq.abs();
                let aqq = a[q * n + q] + t * apq.abs();
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * sign * s;
                    a[k * n + q] = akp * s + akq * sign * c;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * sign * s;
                    a[q * n + k] = apk * s + aqk * sign * c;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                a[p * n + p] = app;
                a[q * n + q] = aqq;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * sign * s;
                    v[k * n + q] = vkp * s + vkq * sign * c;
                }
            }
        }
    }
    Err(Error::Numeric(format!(
        "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (dim {n})"
    )))
}

/// Sort ascending (stable on ties) and fix each eigenvector's phase so that
/// its first largest-magnitude component is real and positive.
fn sorted(values: Vec<f64>, vectors: ComplexMatrix) -> Eigensystem {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut out = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for r in 0..n {
            let m = vectors[(r, old_col)].norm();
            if m > best_abs + 1e-12 {
                best = r;
                best_abs = m;
            }
        }
        let pivot = vectors[(best, old_col)];
        let fix = if best_abs > 0.0 {
            pivot.conj() / best_abs
        } else {
            Complex64::new(1.0, 0.0)
        };
        for r in 0..n {
            out[(r, new_col)] = vectors[(r, old_col)] * fix;
        }
    }
    Eigensystem {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: out,
    }
}
