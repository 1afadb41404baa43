use proptest::prelude::*;

use qcaps::datasets::ImageSample;
use qcaps::linalg::ComplexMatrix;
use qcaps::network::{mse_loss, QCapsNetConfig};
use qcaps::quantum::{expectation, purity_k, DensityMatrix, Observable};
use qcaps::random::{random_mixed, random_pure, rng_from_seed};
use qcaps::reconstruction::*;

#[test]
fn pauli_strings_are_lexicographic() {
    assert_eq!(pauli_strings(1), vec!["I", "X", "Y", "Z"]);
    let two = pauli_strings(2);
    assert_eq!(two.len(), 16);
    assert_eq!(&two[..5], &["II", "IX", "IY", "IZ", "XI"]);
    assert_eq!(two[15], "ZZ");
}

#[test]
fn tomography_matches_pauli_expectations() {
    let mut rng = rng_from_seed(1);
    for n in 1..=3 {
        let chi = random_mixed(n, &mut rng);
        let v = tomography_vector(&chi);
        for (p, label) in pauli_strings(n).iter().enumerate() {
            let want = expectation(&chi, &Observable::pauli(label).unwrap()).unwrap();
            assert!((v[p] - want).abs() < 1e-12, "{label}");
        }
    }
}

#[test]
fn tomography_examples() {
    let mixed = tomography_vector(&DensityMatrix::maximally_mixed(2));
    assert_eq!(mixed[0], 1.0);
    assert!(mixed[1..].iter().all(|c| c.abs() < 1e-15));
    assert_eq!(
        tomography_vector(&DensityMatrix::basis(1, 0)),
        vec![1.0, 0.0, 0.0, 1.0]
    );
}

#[test]
fn tomography_round_trip_four_qubits() {
    let mut rng = rng_from_seed(2);
    for _ in 0..10 {
        let chi = random_mixed(4, &mut rng);
        let v = tomography_vector(&chi);
        assert!((v[0] - 1.0).abs() < 1e-10);
        assert!(v.iter().all(|c| (-1.0..=1.0).contains(c)));
        let back = inverse_tomography(&v).unwrap();
        assert!(back.matrix().max_abs_diff(chi.matrix()) < 1e-10);
    }
    assert!(inverse_tomography(&[1.0, 0.0]).is_err());
}

#[test]
fn zero_decoder_outputs_one_half() {
    let d = DecoderMLP::zeros(&[4, 3, 5]).unwrap();
    assert_eq!(d.forward(&[0.3, -1.0, 2.0, 0.5]).unwrap(), vec![0.5; 5]);
    assert!(d.forward(&[1.0]).is_err());
}

#[test]
fn single_path_decoder_by_hand() {
    // 1 → 1 → 1: w1 = 2, b1 = −1, w2 = 3, b2 = 0.5.
    let d = DecoderMLP::from_params(&[1, 1, 1], vec![2.0, -1.0, 3.0, 0.5]).unwrap();
    let h: f64 = (2.0f64 * 0.8 - 1.0).max(0.0);
    let want = 1.0 / (1.0 + (-(3.0 * h + 0.5)).exp());
    assert!((d.forward(&[0.8]).unwrap()[0] - want).abs() < 1e-15);
    // Negative pre-activation is cut by the ReLU.
    let cut = 1.0 / (1.0 + (-0.5f64).exp());
    assert!((d.forward(&[0.1]).unwrap()[0] - cut).abs() < 1e-15);
}

fn dense_oracle(sizes: &[usize], params: &[f64], x: &[f64]) -> Vec<f64> {
    let mut act = x.to_vec();
    let mut off = 0;
    for (l, w) in sizes.windows(2).enumerate() {
        let (n_in, n_out) = (w[0], w[1]);
        let wm = ComplexMatrix::from_real(n_out, n_in, &params[off..off + n_in * n_out]).unwrap();
        let xs: Vec<_> = act.iter().map(|&v| qcaps::linalg::c64(v, 0.0)).collect();
        let z = wm.matvec(&xs);
        off += n_in * n_out;
        let last = l + 2 == sizes.len();
        act = (0..n_out)
            .map(|o| {
                let zo = z[o].re + params[off + o];
                if last {
                    1.0 / (1.0 + (-zo).exp())
                } else {
                    zo.max(0.0)
                }
            })
            .collect();
        off += n_out;
    }
    act
}

#[test]
fn decoder_matches_matrix_oracle() {
    let sizes = [6, 5, 4, 3];
    let d = DecoderMLP::random(&sizes, &mut rng_from_seed(3)).unwrap();
    let x = [0.1, -0.4, 0.9, 0.0, 0.3, -0.2];
    let got = d.forward(&x).unwrap();
    let want = dense_oracle(&sizes, d.params(), &x);
    assert!(got.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-14));
}

#[test]
fn backprop_matches_finite_differences() {
    let sizes = [4, 6, 5, 3];
    let mut rng = rng_from_seed(4);
    let d = DecoderMLP::random(&sizes, &mut rng).unwrap();
    let x = [0.3, -0.7, 0.2, 0.9];
    let target = [0.1, 0.8, 0.4];
    let loss = |p: &[f64]| {
        let m = DecoderMLP::from_params(&sizes, p.to_vec()).unwrap();
        mse_loss(&m.forward(&x).unwrap(), &target)
    };
    let trace = d.trace(&x).unwrap();
    let g: Vec<f64> = trace
        .output()
        .iter()
        .zip(&target)
        .map(|(y, t)| 2.0 * (y - t) / 3.0)
        .collect();
    let mut grad = vec![0.0; d.params().len()];
    d.backward(&trace, &g, &mut grad);
    let fd = qcaps::network::central_difference(d.params(), 1e-6, |p| Ok(loss(p))).unwrap();
    for (a, b) in grad.iter().zip(&fd) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn perturbation_examples() {
    let mut rng = rng_from_seed(5);
    let chi = random_mixed(4, &mut rng);
    for kind in PerturbationKind::ALL {
        let same = perturb_capsule(&chi, kind, 0.0).unwrap();
        assert!(same.matrix().max_abs_diff(chi.matrix()) < 1e-15);
    }
    let flipped = perturb_capsule(
        &DensityMatrix::basis(4, 0),
        PerturbationKind::X1,
        std::f64::consts::FRAC_PI_2,
    )
    .unwrap();
    assert!(
        flipped
            .matrix()
            .max_abs_diff(DensityMatrix::basis(4, 0b1000).matrix())
            < 1e-15
    );
    let basis = DensityMatrix::basis(4, 0b0110);
    let z = perturb_capsule(&basis, PerturbationKind::GlobalZ, 0.7).unwrap();
    assert!(z.matrix().max_abs_diff(basis.matrix()) < 1e-15);
    assert!(perturb_capsule(&DensityMatrix::basis(2, 0), PerturbationKind::Z4, 0.1).is_err());
    assert!(perturb_capsule(&DensityMatrix::basis(2, 0), PerturbationKind::X1, 0.1).is_ok());
}

#[test]
fn perturbation_matches_matrix_exponential() {
    // e^{−iθP} from the spectral form of P.
    let chi = random_mixed(4, &mut rng_from_seed(6));
    let theta = 0.37;
    for kind in PerturbationKind::ALL {
        let p = Observable::pauli(&kind.generator(4)).unwrap();
        let es = qcaps::quantum::hermitian_eigensystem(&p).unwrap();
        let n = 16;
        let u = ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|i| {
                    es.vectors[(r, i)]
                        * es.vectors[(c, i)].conj()
                        * num_complex::Complex64::from_polar(1.0, -theta * es.values[i])
                })
                .sum()
        });
        let want = u.matmul(chi.matrix()).matmul(&u.adjoint());
        let got = perturb_capsule(&chi, kind, theta).unwrap();
        assert!(got.matrix().max_abs_diff(&want) < 1e-12, "{kind}");
    }
}

proptest! {
    #[test]
    fn perturbation_preserves_moments(seed in 0u64..500, theta in -3.2f64..3.2, k in 1u32..4) {
        let chi = random_mixed(4, &mut rng_from_seed(seed));
        for kind in PerturbationKind::ALL {
            let out = perturb_capsule(&chi, kind, theta).unwrap();
            prop_assert!((purity_k(&out, k).unwrap() - purity_k(&chi, k).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn decoder_outputs_stay_in_the_unit_interval(seed in 0u64..200) {
        let mut rng = rng_from_seed(seed);
        let d = DecoderMLP::random(&[16, 8, 8, 16], &mut rng).unwrap();
        let x: Vec<f64> = (0..16).map(|i| ((seed + i) as f64).sin() * 5.0).collect();
        let y = d.forward(&x).unwrap();
        prop_assert!(y.iter().all(|v| *v > 0.0 && *v < 1.0));
        prop_assert!(mse_loss(&y, &[0.0; 16]) <= 1.0);
    }

    #[test]
    fn pgm_decoder_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..128)) {
        let _ = decode_pgm(&bytes);
    }
}

#[test]
fn default_thetas_cover_the_range() {
    let t = default_thetas();
    let want = [-0.2, -0.14, -0.08, -0.02, 0.04, 0.1, 0.16];
    assert_eq!(t.len(), 7);
    assert!(t.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
    let names: Vec<String> = t
        .iter()
        .map(|&x| pgm_filename("3", PerturbationKind::X1, x))
        .collect();
    assert_eq!(names[0], "recon_3_x1_-200.pgm");
    assert_eq!(names[6], "recon_3_x1_160.pgm");
}

#[test]
fn pgm_round_trip_and_errors() {
    let pixels: Vec<f64> = (0..256).map(|i| i as f64 / 255.0).collect();
    let bytes = encode_pgm(16, 16, &pixels).unwrap();
    assert!(bytes.starts_with(b"P5\n16 16\n255\n"));
    assert_eq!(bytes.len(), 13 + 256);
    let g = decode_pgm(&bytes).unwrap();
    assert_eq!((g.width, g.height, g.maxval), (16, 16, 255));
    assert!(g
        .pixels
        .iter()
        .zip(&pixels)
        .all(|(a, b)| (a - b).abs() < 1e-12));
    assert!(decode_pgm(&bytes[..100]).is_err());
    assert!(decode_pgm(b"P2\n1 1\n255\n\x00").is_err());
    assert!(decode_pgm(b"P5\n1 1\n0\n\x00").is_err());
    assert!(decode_pgm(b"P5 # c\n1 1\n255\n\x07").is_ok());
    assert!(decode_pgm(b"P5\n1 1\n9\n\x0a").is_err());
    assert!(encode_pgm(2, 2, &[0.0; 3]).is_err());
}

fn tiny_images(n: usize, seed: u64) -> Vec<ImageSample> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|i| {
            let pixels: Vec<f64> = (0..256)
                .map(|_| {
                    if rand::Rng::gen::<f64>(&mut rng) < 0.2 {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            ImageSample::new(pixels, if i % 2 == 0 { 3 } else { 6 }, i % 2).unwrap()
        })
        .collect()
}

fn small_model(seed: u64) -> ReconstructionModel {
    let cfg = QCapsNetConfig {
        preprocess_depth: 1,
        seed,
        ..QCapsNetConfig::reconstruction()
    };
    ReconstructionModel::init(cfg, &[256, 16, 16, 256]).unwrap()
}

#[test]
fn decoder_only_training_lowers_mse() {
    let data = tiny_images(10, 7);
    let mut t = ReconstructionTrainer::new(
        small_model(1),
        ReconstructionOptions {
            epochs: 10,
            batch_size: 5,
            train_quantum: false,
            learning_rate: 0.02,
            ..Default::default()
        },
    );
    let before = evaluate_reconstruction(&t.model, &data).unwrap().mse;
    let network = t.model.network.clone();
    let h = t.fit(&data).unwrap();
    assert_eq!(h.rows.len(), 10);
    assert!(h.rows.last().unwrap().mse < before);
    assert_eq!(t.model.network, network);
}

#[test]
fn zero_epoch_reconstruction_is_a_no_op() {
    let data = tiny_images(2, 8);
    let mut t = ReconstructionTrainer::new(
        small_model(2),
        ReconstructionOptions {
            epochs: 0,
            ..Default::default()
        },
    );
    let before = t.model.clone();
    assert!(t.fit(&data).unwrap().rows.is_empty());
    assert_eq!(t.model, before);
}

#[test]
fn joint_training_is_deterministic() {
    let data = tiny_images(4, 9);
    let opts = ReconstructionOptions {
        epochs: 1,
        batch_size: 4,
        seed: 3,
        ..Default::default()
    };
    let mut a = ReconstructionTrainer::new(small_model(3), opts.clone());
    let mut b = ReconstructionTrainer::new(small_model(3), opts);
    assert_eq!(a.fit(&data).unwrap(), b.fit(&data).unwrap());
    assert_eq!(a.model, b.model);
}

#[test]
fn sweep_examples() {
    let model = small_model(4);
    let x = random_pure(9, &mut rng_from_seed(10));
    let zero = perturbation_sweep(&model, &x, PerturbationKind::X1, &[0.0]).unwrap();
    let out = qcaps::network::forward(&model.network, &x).unwrap();
    let plain = model
        .reconstruct(&out.digit_states[most_active(&out)])
        .unwrap();
    assert_eq!(zero[0], plain);

    let images = perturbation_sweep(&model, &x, PerturbationKind::Z4, &default_thetas()).unwrap();
    assert_eq!(images.len(), 7);
    // Continuity: halving the step roughly halves the change.
    let step = |d: f64| {
        let pair = perturbation_sweep(&model, &x, PerturbationKind::Z4, &[0.0, d]).unwrap();
        pair[0]
            .iter()
            .zip(&pair[1])
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let (a, b, c) = (step(0.02), step(0.01), step(0.005));
    assert!(b < a && c < b && c < 1e-2, "{a} {b} {c}");
}

#[test]
fn commuting_sweep_leaves_diagonal_capsules_alone() {
    // A computational-basis capsule is fixed by the diagonal generator.
    let model = small_model(5);
    let chi = DensityMatrix::basis(4, 5);
    let imgs: Vec<Vec<f64>> = default_thetas()
        .iter()
        .map(|&t| {
            model
                .reconstruct(&perturb_capsule(&chi, PerturbationKind::GlobalZ, t).unwrap())
                .unwrap()
        })
        .collect();
    for w in imgs.windows(2) {
        assert!(w[0].iter().zip(&w[1]).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn decoder_shape_is_checked() {
    let net = qcaps::network::QCapsNetModel::init(QCapsNetConfig::reconstruction()).unwrap();
    assert!(ReconstructionModel::new(net, DecoderMLP::zeros(&[16, 4, 256]).unwrap()).is_err());
}
