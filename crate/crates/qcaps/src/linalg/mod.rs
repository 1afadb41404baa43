//! Dense complex linear algebra.

mod eigen;
mod matrix;

pub use eigen::{jacobi_eigensystem, Eigensystem, JACOBI_TOLERANCE};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;

/// Shorthand for a complex literal.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
