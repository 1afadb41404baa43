//! Single-qubit gates, Pauli strings and in-place gate application.
//!
//! Qubit 0 is the most significant bit of a basis-state index.

use num_complex::Complex64;

use crate::linalg::{c64, ComplexMatrix};

/// A 2x2 gate in row-major order.
pub type Gate2 = [[Complex64; 2]; 2];

pub const I2: Gate2 = [
    [c64_const(1.0, 0.0), c64_const(0.0, 0.0)],
    [c64_const(0.0, 0.0), c64_const(1.0, 0.0)],
];
pub const PAULI_X: Gate2 = [
    [c64_const(0.0, 0.0), c64_const(1.0, 0.0)],
    [c64_const(1.0, 0.0), c64_const(0.0, 0.0)],
];
pub const PAULI_Y: Gate2 = [
    [c64_const(0.0, 0.0), c64_const(0.0, -1.0)],
    [c64_const(0.0, 1.0), c64_const(0.0, 0.0)],
];
pub const PAULI_Z: Gate2 = [
    [c64_const(1.0, 0.0), c64_const(0.0, 0.0)],
    [c64_const(0.0, 0.0), c64_const(-1.0, 0.0)],
];

const fn c64_const(re: f64, im: f64) -> Complex64 {
    Complex64 { re, im }
}

/// Rz(θ) = exp(-iθZ/2).
pub fn rz(theta: f64) -> Gate2 {
    let h = 0.5 * theta;
    [
        [c64(h.cos(), -h.sin()), c64(0.0, 0.0)],
        [c64(0.0, 0.0), c64(h.cos(), h.sin())],
    ]
}

/// Ry(θ) = exp(-iθY/2).
pub fn ry(theta: f64) -> Gate2 {
    let (s, c) = (0.5 * theta).sin_cos();
    [[c64(c, 0.0), c64(-s, 0.0)], [c64(s, 0.0), c64(c, 0.0)]]
}

/// exp(-iθP) for an involutory single-qubit P (X, Y or Z).
pub fn pauli_rotation(p: &Gate2, theta: f64) -> Gate2 {
    let (s, c) = theta.sin_cos();
    let mut g = [[c64(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for k in 0..2 {
            let id = if r == k { c } else { 0.0 };
            g[r][k] = c64(id, 0.0) + p[r][k] * c64(0.0, -s);
        }
    }
    g
}

pub fn mul2(a: &Gate2, b: &Gate2) -> Gate2 {
    let mut out = [[c64(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn gate_matrix(g: &Gate2) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |r, c| g[r][c])
}

#[inline]
fn bit(n_qubits: usize, q: usize) -> usize {
    1 << (n_qubits - 1 - q)
}

/// Left-multiply the rows of `m` by the gate acting on qubit `q` of `n_qubits`.
pub fn apply_1q_rows(m: &mut ComplexMatrix, n_qubits: usize, q: usize, g: &Gate2) {
    let mask = bit(n_qubits, q);
    let cols = m.cols();
    let rows = m.rows();
    let data = m.data_mut();
    for r0 in 0..rows {
        if r0 & mask != 0 {
            continue;
        }
        let r1 = r0 | mask;
        for c in 0..cols {
            let a = data[r0 * cols + c];
            let b = data[r1 * cols + c];
            data[r0 * cols + c] = g[0][0] * a + g[0][1] * b;
            data[r1 * cols + c] = g[1][0] * a + g[1][1] * b;
        }
    }
}

/// Right-multiply `m` by the adjoint of the gate acting on qubit `q`: M ← M G†.
pub fn apply_1q_cols_adjoint(m: &mut ComplexMatrix, n_qubits: usize, q: usize, g: &Gate2) {
    let mask = bit(n_qubits, q);
    let cols = m.cols();
    let rows = m.rows();
    let gc = [
        [g[0][0].conj(), g[0][1].conj()],
        [g[1][0].conj(), g[1][1].conj()],
    ];
    let data = m.data_mut();
    for r in 0..rows {
        let row = &mut data[r * cols..(r + 1) * cols];
        for c0 in 0..cols {
            if c0 & mask != 0 {
                continue;
            }
            let c1 = c0 | mask;
            let a = row[c0];
            let b = row[c1];
            row[c0] = gc[0][0] * a + gc[0][1] * b;
            row[c1] = gc[1][0] * a + gc[1][1] * b;
        }
    }
}

/// Apply a gate to qubit `q` of a state vector.
pub fn apply_1q_vec(v: &mut [Complex64], n_qubits: usize, q: usize, g: &Gate2) {
    let mask = bit(n_qubits, q);
    for i0 in 0..v.len() {
        if i0 & mask != 0 {
            continue;
        }
        let i1 = i0 | mask;
        let a = v[i0];
        let b = v[i1];
        v[i0] = g[0][0] * a + g[0][1] * b;
        v[i1] = g[1][0] * a + g[1][1] * b;
    }
}

/// Permute rows by CNOT(control → target).
pub fn apply_cnot_rows(m: &mut ComplexMatrix, n_qubits: usize, control: usize, target: usize) {
    let cm = bit(n_qubits, control);
    let tm = bit(n_qubits, target);
    let cols = m.cols();
    let rows = m.rows();
    let data = m.data_mut();
    for r in 0..rows {
        if r & cm != 0 && r & tm == 0 {
            let s = r | tm;
            for c in 0..cols {
                data.swap(r * cols + c, s * cols + c);
            }
        }
    }
}

/// Permute columns by CNOT(control → target); CNOT is real and self-inverse.
pub fn apply_cnot_cols(m: &mut ComplexMatrix, n_qubits: usize, control: usize, target: usize) {
    let cm = bit(n_qubits, control);
    let tm = bit(n_qubits, target);
    let cols = m.cols();
    let rows = m.rows();
    let data = m.data_mut();
    for r in 0..rows {
        for c in 0..cols {
            if c & cm != 0 && c & tm == 0 {
                data.swap(r * cols + c, r * cols + (c | tm));
            }
        }
    }
}

pub fn apply_cnot_vec(v: &mut [Complex64], n_qubits: usize, control: usize, target: usize) {
    let cm = bit(n_qubits, control);
    let tm = bit(n_qubits, target);
    for i in 0..v.len() {
        if i & cm != 0 && i & tm == 0 {
            v.swap(i, i | tm);
        }
    }
}

/// Full 2^n x 2^n matrix of a single-qubit gate on qubit `q`.
pub fn embed_1q(n_qubits: usize, q: usize, g: &Gate2) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1 << n_qubits);
    apply_1q_rows(&mut m, n_qubits, q, g);
    m
}

/// Full matrix of CNOT(control → target) on `n_qubits`.
pub fn cnot_matrix(n_qubits: usize, control: usize, target: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1 << n_qubits);
    apply_cnot_rows(&mut m, n_qubits, control, target);
    m
}

/// Pauli labels in the fixed order used for tomography.
pub const PAULI_LABELS: [char; 4] = ['I', 'X', 'Y', 'Z'];

pub fn pauli_gate(label: char) -> Option<Gate2> {
    match label {
        'I' => Some(I2),
        'X' => Some(PAULI_X),
        'Y' => Some(PAULI_Y),
        'Z' => Some(PAULI_Z),
        _ => None,
    }
}

/// Dense matrix of a Pauli string such as "XZI" (character i acts on qubit i).
pub fn pauli_string_matrix(labels: &str) -> Option<ComplexMatrix> {
    let gates: Option<Vec<Gate2>> = labels.chars().map(pauli_gate).collect();
    let gates = gates?;
    let n = gates.len();
    let mut m = ComplexMatrix::identity(1 << n);
    for (q, g) in gates.iter().enumerate() {
        apply_1q_rows(&mut m, n, q, g);
    }
    Some(m)
}
