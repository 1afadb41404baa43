use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use qcaps::channels::*;
use qcaps::linalg::{c64, ComplexMatrix};
use qcaps::quantum::{purity_k, tensor_product, DensityMatrix, PureState};
use qcaps::random::{random_angles, random_mixed, rng_from_seed};

fn m2(g: [[f64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[g[0][0], g[0][1], g[1][0], g[1][1]]).unwrap()
}

// Written out from the exponential definitions, independent of the gate helpers.
fn rz_oracle(t: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = Complex64::from_polar(1.0, -t / 2.0);
    m[(1, 1)] = Complex64::from_polar(1.0, t / 2.0);
    m
}

fn ry_oracle(t: f64) -> ComplexMatrix {
    let (s, c) = (t / 2.0).sin_cos();
    m2([[c, -s], [s, c]])
}

fn kron_all(ms: &[ComplexMatrix]) -> ComplexMatrix {
    ms.iter()
        .skip(1)
        .fold(ms[0].clone(), |acc, m| tensor_product(&acc, m).unwrap())
}

fn cnot_oracle(n: usize, c: usize, t: usize) -> ComplexMatrix {
    let dim = 1 << n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        let bits: Vec<usize> = (0..n).map(|q| (x >> (n - 1 - q)) & 1).collect();
        let mut y = bits.clone();
        if bits[c] == 1 {
            y[t] ^= 1;
        }
        let yi = y.iter().fold(0, |acc, b| acc * 2 + b);
        m[(yi, x)] = c64(1.0, 0.0);
    }
    m
}

fn layer_oracle(n: usize, a: &[f64]) -> ComplexMatrix {
    let rots: Vec<ComplexMatrix> = (0..n)
        .map(|q| {
            let (z1, y, z2) = (a[3 * q], a[3 * q + 1], a[3 * q + 2]);
            rz_oracle(z2).matmul(&ry_oracle(y)).matmul(&rz_oracle(z1))
        })
        .collect();
    let mut u = kron_all(&rots);
    for q in 0..n - 1 {
        u = cnot_oracle(n, q, q + 1).matmul(&u);
    }
    u
}

fn circuit_oracle(n: usize, params: &[f64]) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(1 << n);
    for layer in params.chunks(3 * n) {
        u = layer_oracle(n, layer).matmul(&u);
    }
    u
}

fn zero_block(n: usize) -> ComplexMatrix {
    DensityMatrix::basis(n, 0).into_matrix()
}

// Sum over the traced input index written out directly.
fn trace_out_front(full: &ComplexMatrix, in_q: usize, out_q: usize) -> ComplexMatrix {
    let od = 1 << out_q;
    ComplexMatrix::from_fn(od, od, |o, p| {
        (0..1usize << in_q)
            .map(|a| full[(a * od + o, a * od + p)])
            .sum()
    })
}

fn check_density(d: &DensityMatrix) {
    assert!((d.matrix().trace().re - 1.0).abs() < 1e-10);
    assert!(d.matrix().trace().im.abs() < 1e-12);
    assert!(d.min_eigenvalue().unwrap() > -1e-9);
}

#[test]
fn zero_layer_examples() {
    let one = build_layer_unitary(1, &EulerLayerParams::zeros(1)).unwrap();
    assert!(one.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    let two = build_layer_unitary(2, &EulerLayerParams::zeros(2)).unwrap();
    assert!(two.max_abs_diff(&cnot_oracle(2, 0, 1)) < 1e-15);
}

#[test]
fn layer_param_mismatch() {
    assert!(EulerLayerParams::new(2, vec![0.0; 5]).is_err());
    assert!(EulerLayerParams::new(1, vec![0.0, f64::NAN, 0.0]).is_err());
    assert!(build_layer_unitary(3, &EulerLayerParams::zeros(2)).is_err());
    assert!(build_circuit_unitary(2, &[0.0; 7]).is_err());
}

#[test]
fn random_layer_matches_gate_product() {
    let mut rng = rng_from_seed(3);
    for _ in 0..5 {
        let a = random_angles(6, &mut rng);
        let u = build_layer_unitary(2, &EulerLayerParams::new(2, a.clone()).unwrap()).unwrap();
        assert!(u.unitarity_error() < 1e-10);
        assert!(u.max_abs_diff(&layer_oracle(2, &a)) < 1e-12);
    }
}

#[test]
fn circuit_examples() {
    assert!(
        build_circuit_unitary(3, &[])
            .unwrap()
            .max_abs_diff(&ComplexMatrix::identity(8))
            < 1e-15
    );

    let mut rng = rng_from_seed(4);
    let mut p = random_angles(9, &mut rng);
    let first = build_circuit_unitary(3, &p).unwrap();
    p.extend([0.0; 9]);
    let u = build_circuit_unitary(3, &p).unwrap();
    let chain = cnot_oracle(3, 1, 2).matmul(&cnot_oracle(3, 0, 1));
    assert!(u.max_abs_diff(&chain.matmul(&first)) < 1e-12);

    let p = random_angles(27, &mut rng);
    let u = build_circuit_unitary(3, &p).unwrap();
    assert!(u.unitarity_error() < 1e-9);
    assert!(u.max_abs_diff(&circuit_oracle(3, &p)) < 1e-12);
}

#[test]
fn circuit_columns_and_vec_agree_with_unitary() {
    let mut rng = rng_from_seed(5);
    let p = random_angles(24, &mut rng);
    let u = build_circuit_unitary(4, &p).unwrap();
    let cols = circuit_columns(4, &p, &[3, 0, 9]);
    for (j, &c) in [3usize, 0, 9].iter().enumerate() {
        for r in 0..16 {
            assert!((cols[(r, j)] - u[(r, c)]).norm() < 1e-13);
        }
    }
    let psi = qcaps::random::random_pure(4, &mut rng);
    let mut v = psi.amplitudes().to_vec();
    apply_circuit_vec(&mut v, 4, &p);
    let want = u.matvec(psi.amplitudes());
    for (a, b) in v.iter().zip(&want) {
        assert!((a - b).norm() < 1e-13);
    }
}

#[test]
fn spec_validation() {
    assert!(ChannelSpec::zeros(ChannelKind::Pqc, 2, 3, 1).is_err());
    assert!(ChannelSpec::zeros(ChannelKind::PostDqfnn, 3, 1, 1).is_err());
    assert!(ChannelSpec::zeros(ChannelKind::PostDqfnn, 4, 1, 1).is_err());
    assert!(ChannelSpec::new(ChannelKind::Dqfnn, 2, 1, 1, vec![0.0; 6]).is_err());
    let s = ChannelSpec::zeros(ChannelKind::Dqfnn, 2, 1, 2).unwrap();
    assert_eq!(s.params().len(), 18);
    assert_eq!(ChannelKind::Pqc.param_count(3, 3, 1), 9);
    assert_eq!(
        "post-dqfnn".parse::<ChannelKind>().unwrap(),
        ChannelKind::PostDqfnn
    );
    for k in [ChannelKind::Pqc, ChannelKind::Dqfnn, ChannelKind::PostDqfnn] {
        assert_eq!(ChannelKind::from_tag(k.tag()), Some(k));
    }
}

#[test]
fn pqc_examples() {
    let mut rng = rng_from_seed(6);
    let rho = random_mixed(2, &mut rng);
    let id = ChannelSpec::zeros(ChannelKind::Pqc, 2, 2, 0).unwrap();
    assert!(
        apply_pqc(&id, &rho)
            .unwrap()
            .matrix()
            .max_abs_diff(rho.matrix())
            < 1e-15
    );

    let flip = ChannelSpec::new(ChannelKind::Pqc, 1, 1, 1, vec![0.0, PI, 0.0]).unwrap();
    let out = apply_pqc(&flip, &DensityMatrix::basis(1, 0)).unwrap();
    assert!(
        out.matrix()
            .max_abs_diff(DensityMatrix::basis(1, 1).matrix())
            < 1e-15
    );

    let spec = ChannelSpec::new(ChannelKind::Pqc, 2, 2, 2, random_angles(12, &mut rng)).unwrap();
    let out = apply_pqc(&spec, &rho).unwrap();
    check_density(&out);
    let before = purity_k(&rho, 1).unwrap();
    assert!((purity_k(&out, 1).unwrap() - before).abs() < 1e-10);
    let (ev_in, ev_out) = (rho.eigenvalues().unwrap(), out.eigenvalues().unwrap());
    for (a, b) in ev_in.iter().zip(&ev_out) {
        assert!((a - b).abs() < 1e-9);
    }

    assert!(apply_pqc(&spec, &DensityMatrix::basis(3, 0)).is_err());
    let d = ChannelSpec::zeros(ChannelKind::Dqfnn, 2, 2, 1).unwrap();
    assert!(apply_pqc(&d, &rho).is_err());
}

#[test]
fn dqfnn_identity_and_swap() {
    let mut rng = rng_from_seed(7);
    let rho = random_mixed(2, &mut rng);
    let id = ChannelSpec::zeros(ChannelKind::Dqfnn, 2, 1, 0).unwrap();
    let out = apply_dqfnn(&id, &rho).unwrap();
    assert!(out.matrix().max_abs_diff(&zero_block(1)) < 1e-15);

    let swap = cnot_oracle(2, 0, 1)
        .matmul(&cnot_oracle(2, 1, 0))
        .matmul(&cnot_oracle(2, 0, 1));
    let one = random_mixed(1, &mut rng);
    let out = dqfnn_with_unitary(&swap, 1, 1, &one).unwrap();
    assert!(out.matrix().max_abs_diff(one.matrix()) < 1e-14);
    assert!(apply_dqfnn(&id, &DensityMatrix::basis(1, 0)).is_err());
}

fn dqfnn_oracle(spec: &ChannelSpec, rho: &DensityMatrix) -> ComplexMatrix {
    let u = circuit_oracle(spec.block_qubits(), spec.params());
    let embedded = tensor_product(rho.matrix(), &zero_block(spec.out_qubits())).unwrap();
    let full = u.matmul(&embedded).matmul(&u.adjoint());
    trace_out_front(&full, spec.in_qubits(), spec.out_qubits())
}

#[test]
fn dqfnn_matches_embed_evolve_trace() {
    let mut rng = rng_from_seed(8);
    for (i, o, d) in [(1, 1, 2), (2, 1, 1), (2, 2, 1), (3, 1, 2)] {
        let n = ChannelKind::Dqfnn.param_count(i, o, d);
        let spec =
            ChannelSpec::new(ChannelKind::Dqfnn, i, o, d, random_angles(n, &mut rng)).unwrap();
        let rho = random_mixed(i, &mut rng);
        let out = apply_dqfnn(&spec, &rho).unwrap();
        check_density(&out);
        assert!(out.matrix().max_abs_diff(&dqfnn_oracle(&spec, &rho)) < 1e-12);
    }
}

#[test]
fn post_dqfnn_examples() {
    let mut rng = rng_from_seed(9);
    let id = ChannelSpec::zeros(ChannelKind::PostDqfnn, 2, 1, 0).unwrap();
    let rho = random_mixed(1, &mut rng);
    let input = DensityMatrix::new(tensor_product(&zero_block(1), rho.matrix()).unwrap()).unwrap();
    let out = apply_post_dqfnn(&id, &input).unwrap();
    assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);

    let out = apply_post_dqfnn(&id, &DensityMatrix::basis(2, 0b10)).unwrap();
    assert!(
        out.matrix()
            .max_abs_diff(DensityMatrix::basis(1, 1).matrix())
            < 1e-15
    );

    let odd = DensityMatrix::basis(3, 0);
    assert!(post_dqfnn_with_unitary(&ComplexMatrix::identity(8), &odd).is_err());
}

// Σ_m (C_m ⟨m| U) ρ (U† |m⟩ C_m†) built from explicit projector and correction matrices.
fn post_oracle(u: &ComplexMatrix, rho: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let h = n / 2;
    let hd = 1 << h;
    let x = m2([[0.0, 1.0], [1.0, 0.0]]);
    let id = ComplexMatrix::identity(2);
    let mut out = ComplexMatrix::zeros(hd, hd);
    for m in 0..hd {
        let mut bra = ComplexMatrix::zeros(1, hd);
        bra[(0, m)] = c64(1.0, 0.0);
        let proj = tensor_product(&bra, &ComplexMatrix::identity(hd)).unwrap();
        let corr: Vec<ComplexMatrix> = (0..h)
            .map(|i| {
                if (m >> (h - 1 - i)) & 1 == 1 {
                    x.clone()
                } else {
                    id.clone()
                }
            })
            .collect();
        let k = kron_all(&corr).matmul(&proj).matmul(u);
        out = &out + &k.matmul(rho).matmul(&k.adjoint());
    }
    out
}

#[test]
fn post_dqfnn_matches_kraus_oracle() {
    let mut rng = rng_from_seed(10);
    for (n, d) in [(2, 1), (2, 3), (4, 1), (4, 2)] {
        let p = random_angles(3 * n * d, &mut rng);
        let spec = ChannelSpec::new(ChannelKind::PostDqfnn, n, n / 2, d, p.clone()).unwrap();
        let rho = random_mixed(n, &mut rng);
        let out = apply_post_dqfnn(&spec, &rho).unwrap();
        check_density(&out);
        let want = post_oracle(&circuit_oracle(n, &p), rho.matrix(), n);
        assert!(out.matrix().max_abs_diff(&want) < 1e-12);
    }
}

#[test]
fn compiled_channels_match_reference() {
    let mut rng = rng_from_seed(11);
    let shapes = [
        (ChannelKind::Pqc, 2, 2, 2),
        (ChannelKind::Dqfnn, 2, 1, 1),
        (ChannelKind::Dqfnn, 3, 2, 1),
        (ChannelKind::PostDqfnn, 4, 2, 2),
    ];
    for (k, i, o, d) in shapes {
        let n = k.param_count(i, o, d);
        let spec = ChannelSpec::new(k, i, o, d, random_angles(n, &mut rng)).unwrap();
        let compiled = spec.compile();
        assert!(compiled.completeness_error() < 1e-12);
        let rho = random_mixed(i, &mut rng);
        let a = compiled.apply(&rho).unwrap();
        let b = apply_channel(&spec, &rho).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }
}

#[test]
fn global_phase_is_invisible() {
    let mut rng = rng_from_seed(12);
    let spec = ChannelSpec::new(ChannelKind::Dqfnn, 2, 1, 1, random_angles(9, &mut rng)).unwrap();
    let u = spec.unitary();
    let phased = u.scale(Complex64::from_polar(1.0, 0.7));
    let rho = random_mixed(2, &mut rng);
    let a = dqfnn_with_unitary(&u, 2, 1, &rho).unwrap();
    let b = dqfnn_with_unitary(&phased, 2, 1, &rho).unwrap();
    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14);

    let v = build_circuit_unitary(2, &random_angles(12, &mut rng)).unwrap();
    let a = post_dqfnn_with_unitary(&v, &rho).unwrap();
    let b = post_dqfnn_with_unitary(&v.scale(Complex64::from_polar(1.0, -1.3)), &rho).unwrap();
    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14);
}

#[test]
fn pure_input_through_pqc_stays_pure() {
    let mut rng = rng_from_seed(13);
    let psi = PureState::basis(3, 5);
    let spec = ChannelSpec::new(ChannelKind::Pqc, 3, 3, 1, random_angles(9, &mut rng)).unwrap();
    let out = apply_pqc(&spec, &DensityMatrix::from_pure(&psi)).unwrap();
    assert!((purity_k(&out, 1).unwrap() - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn channels_are_trace_preserving(seed in any::<u64>(), kind in 0u8..3, depth in 0usize..3) {
        let kind = ChannelKind::from_tag(kind).unwrap();
        let (i, o) = match kind {
            ChannelKind::Pqc => (2, 2),
            ChannelKind::Dqfnn => (2, 1),
            ChannelKind::PostDqfnn => (2, 1),
        };
        let mut rng = rng_from_seed(seed);
        let n = kind.param_count(i, o, depth);
        let spec = ChannelSpec::new(kind, i, o, depth, random_angles(n, &mut rng)).unwrap();
        let out = apply_channel(&spec, &random_mixed(i, &mut rng)).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(out.min_eigenvalue().unwrap() > -1e-9);
    }
}
