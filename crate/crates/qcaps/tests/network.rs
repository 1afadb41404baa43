use proptest::prelude::*;

use qcaps::channels::{apply_channel, build_circuit_unitary, ChannelKind};
use qcaps::datasets::LabeledState;
use qcaps::linalg::ComplexMatrix;
use qcaps::network::*;
use qcaps::quantum::{expectation, partial_trace, DensityMatrix, Observable, PureState};
use qcaps::random::{random_pure, rng_from_seed};
use qcaps::routing::{route_quantum, PredictionBundle};

struct Sample {
    state: PureState,
    class: usize,
}

impl LabeledState for Sample {
    fn input_state(&self) -> &PureState {
        &self.state
    }

    fn class(&self) -> usize {
        self.class
    }
}

fn small_config(kind: ChannelKind) -> QCapsNetConfig {
    let (qp, qd) = match kind {
        ChannelKind::Pqc => (2, 2),
        ChannelKind::Dqfnn => (2, 1),
        ChannelKind::PostDqfnn => (2, 1),
    };
    QCapsNetConfig {
        total_qubits: 4,
        preprocess_depth: 1,
        primary_capsules: 2,
        qubits_per_primary: qp,
        qubits_per_digit: qd,
        channel_kind: kind,
        channel_depth: 1,
        k: 2,
        seed: 11,
        ..QCapsNetConfig::default()
    }
}

fn samples(n: usize, qubits: usize, seed: u64) -> Vec<Sample> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|i| Sample {
            state: random_pure(qubits, &mut rng),
            class: i % 2,
        })
        .collect()
}

fn density_of(v: &[num_complex::Complex64]) -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix::outer(v, v)).unwrap()
}

// Full unitary, full density matrix, explicit partial traces, uncompiled
// channels and the bundle router.
fn naive_forward(model: &QCapsNetModel, input: &PureState) -> (Vec<DensityMatrix>, Vec<f64>) {
    let c = model.config();
    let u = build_circuit_unitary(c.total_qubits, model.preprocess_params()).unwrap();
    let rho = density_of(&u.matvec(input.amplitudes()));
    match c.architecture {
        Architecture::Baseline => {
            let states: Vec<_> = (0..2)
                .map(|g| partial_trace(&rho, &c.readout_group(g)).unwrap())
                .collect();
            let acts = states.iter().map(|s| readout(c.readout, s)).collect();
            (states, acts)
        }
        Architecture::Capsule => {
            let caps: Vec<_> = (0..c.primary_capsules)
                .map(|i| partial_trace(&rho, &c.primary_qubits(i)).unwrap())
                .collect();
            let preds = (0..c.primary_capsules)
                .map(|i| {
                    (0..2)
                        .map(|j| apply_channel(&model.edge_spec(i, j), &caps[i]).unwrap())
                        .collect()
                })
                .collect();
            let bundle = PredictionBundle::new(preds).unwrap();
            let (states, _) = route_quantum(&bundle, c.k, c.routing_iters).unwrap();
            let acts = states.iter().map(|s| readout(c.readout, s)).collect();
            (states, acts)
        }
    }
}

#[test]
fn parameter_layout_is_preprocessing_then_edges() {
    let cfg = small_config(ChannelKind::Dqfnn);
    let model = QCapsNetModel::init(cfg.clone()).unwrap();
    let pre = cfg.preprocess_param_count();
    assert_eq!(pre, 12);
    assert_eq!(model.parameter_count(), pre + 4 * cfg.edge_param_count());
    assert_eq!(model.edge_range(0).start, pre);
    for e in 0..3 {
        assert_eq!(model.edge_range(e).end, model.edge_range(e + 1).start);
    }
    assert_eq!(model.edge_of(pre - 1), None);
    assert_eq!(model.edge_of(model.edge_range(3).start), Some(3));
    assert_eq!(
        model.edge_spec(1, 0).params(),
        &model.params()[model.edge_range(2)]
    );
}

#[test]
fn init_is_seeded_and_in_range() {
    let cfg = small_config(ChannelKind::Pqc);
    let a = QCapsNetModel::init(cfg.clone()).unwrap();
    let b = QCapsNetModel::init(cfg.clone()).unwrap();
    let c = QCapsNetModel::init(QCapsNetConfig { seed: 12, ..cfg }).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.params(), c.params());
    assert!(a
        .params()
        .iter()
        .all(|&p| (0.0..std::f64::consts::TAU).contains(&p)));
}

#[test]
fn wrong_parameter_count_is_rejected() {
    let cfg = small_config(ChannelKind::Pqc);
    assert!(QCapsNetModel::new(cfg, vec![0.0; 3]).is_err());
}

#[test]
fn presets_validate_and_count_parameters() {
    assert_eq!(
        QCapsNetConfig::mnist(ChannelKind::Pqc, 1).parameter_count(),
        135 + 6 * 9
    );
    assert_eq!(
        QCapsNetConfig::mnist(ChannelKind::Dqfnn, 1).parameter_count(),
        135 + 6 * 18
    );
    assert_eq!(
        QCapsNetConfig::mnist(ChannelKind::PostDqfnn, 1).parameter_count(),
        135 + 4 * 12
    );
    assert_eq!(QCapsNetConfig::spt().parameter_count(), 48 + 4 * 18);
    for kind in [ChannelKind::Pqc, ChannelKind::Dqfnn, ChannelKind::PostDqfnn] {
        QCapsNetConfig::mnist(kind, 2).validate().unwrap();
    }
    let b = QCapsNetConfig::baseline_matching(9, 3, 189);
    assert_eq!(b.preprocess_depth, 7);
    assert_eq!(b.parameter_count(), 189);
}

#[test]
fn invalid_shapes_are_rejected() {
    let mut c = small_config(ChannelKind::Pqc);
    c.qubits_per_digit = 1;
    assert!(c.validate().is_err());
    let mut c = small_config(ChannelKind::Dqfnn);
    c.primary_capsules = 3;
    assert!(c.validate().is_err());
    let mut c = small_config(ChannelKind::Dqfnn);
    c.digit_capsules = 3;
    assert!(c.validate().is_err());
}

#[test]
fn forward_matches_naive_pipeline() {
    for kind in [ChannelKind::Pqc, ChannelKind::Dqfnn, ChannelKind::PostDqfnn] {
        for readout_kind in [Readout::ZMean, Readout::Purity] {
            let cfg = QCapsNetConfig {
                readout: readout_kind,
                ..small_config(kind)
            };
            let model = QCapsNetModel::init(cfg).unwrap();
            for s in samples(3, 4, 5) {
                let out = forward(&model, &s.state).unwrap();
                let (states, acts) = naive_forward(&model, &s.state);
                for (a, b) in out.digit_states.iter().zip(&states) {
                    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12, "{kind:?}");
                }
                for (a, b) in out.activations.iter().zip(&acts) {
                    assert!((a - b).abs() < 1e-12);
                }
                let r = out.routing.unwrap();
                assert!(r.column_sum_error() < 1e-12);
            }
        }
    }
}

#[test]
fn baseline_matches_naive_pipeline() {
    let cfg = QCapsNetConfig::baseline_matching(4, 2, 36);
    assert_eq!(cfg.preprocess_depth, 3);
    let model = QCapsNetModel::init(cfg).unwrap();
    for s in samples(3, 4, 6) {
        let out = forward(&model, &s.state).unwrap();
        assert!(out.routing.is_none());
        let (states, acts) = naive_forward(&model, &s.state);
        for (a, b) in out.digit_states.iter().zip(&states) {
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
        assert!(out
            .activations
            .iter()
            .zip(&acts)
            .all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn forward_rejects_wrong_input_width() {
    let model = QCapsNetModel::init(small_config(ChannelKind::Pqc)).unwrap();
    assert!(forward(&model, &PureState::basis(3, 0)).is_err());
}

#[test]
fn z_readout_matches_pauli_expectations() {
    let mut rng = rng_from_seed(3);
    for n in 1..=3 {
        let rho = qcaps::random::random_mixed(n, &mut rng);
        let mean: f64 = (0..n)
            .map(|q| expectation(&rho, &Observable::pauli_on(n, q, 'Z').unwrap()).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!((readout_z(&rho) - (1.0 + mean) / 2.0).abs() < 1e-12);
    }
    assert!((readout_z(&DensityMatrix::basis(2, 0)) - 1.0).abs() < 1e-15);
    assert!(readout_z(&DensityMatrix::basis(2, 3)).abs() < 1e-15);
    assert!((readout_purity(&DensityMatrix::maximally_mixed(2)) - 0.25).abs() < 1e-15);
}

#[test]
fn loss_values_by_hand() {
    assert!((cross_entropy(&[0.8, 0.3], &[1.0, 0.0]) + 0.8f64.ln()).abs() < 1e-15);
    assert!((cross_entropy(&[0.0, 1.0], &[1.0, 0.0]) - 1e12f64.ln()).abs() < 1e-9);
    assert_eq!(margin_loss(&[0.95, 0.05], 0), 0.0);
    assert!((margin_loss(&[0.5, 0.6], 0) - (0.16 + 0.5 * 0.25)).abs() < 1e-15);
    assert!((mse_loss(&[1.0, 2.0], &[0.0, 0.0]) - 2.5).abs() < 1e-15);
    assert!((combined_loss(0.3, 2.0) - 0.5).abs() < 1e-15);
    assert_eq!(one_hot(1, 3), vec![0.0, 1.0, 0.0]);
}

#[test]
fn ties_go_to_the_first_class() {
    assert_eq!(predicted_class(&[0.5, 0.5]), 0);
    assert_eq!(predicted_class(&[0.4, 0.6]), 1);
}

fn naive_batch_loss(model: &QCapsNetModel, params: &[f64], data: &[Sample], kind: LossKind) -> f64 {
    let m = QCapsNetModel::new(model.config().clone(), params.to_vec()).unwrap();
    data.iter()
        .map(|s| classification_loss(kind, &naive_forward(&m, &s.state).1, s.class))
        .sum::<f64>()
        / data.len() as f64
}

#[test]
fn cached_gradient_matches_full_recompute() {
    for kind in [ChannelKind::Pqc, ChannelKind::Dqfnn, ChannelKind::PostDqfnn] {
        let model = QCapsNetModel::init(small_config(kind)).unwrap();
        let data = samples(3, 4, 9);
        let inputs: Vec<&PureState> = data.iter().map(|s| &s.state).collect();
        let loss = |s: usize, o: &ForwardOutput| margin_loss(&o.activations, data[s].class);
        let est = grad_finite_diff(&model, &inputs, FD_STEP, &loss).unwrap();
        let oracle = central_difference(model.params(), FD_STEP, |p| {
            Ok(naive_batch_loss(&model, p, &data, LossKind::Margin))
        })
        .unwrap();
        assert!(
            (est.loss - naive_batch_loss(&model, model.params(), &data, LossKind::Margin)).abs()
                < 1e-12
        );
        for (a, b) in est.grad.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8, "{kind:?}: {a} vs {b}");
        }
    }
}

#[test]
fn central_difference_of_a_polynomial() {
    // d/dx (x³ + 2y) = 3x², exact up to the h² term h² = 1e-6.
    let g = central_difference(&[2.0, 5.0], 1e-3, |p| Ok(p[0].powi(3) + 2.0 * p[1])).unwrap();
    assert!((g[0] - 12.0 - 1e-6).abs() < 1e-9);
    assert!((g[1] - 2.0).abs() < 1e-9);
}

#[test]
fn non_finite_gradient_names_the_parameter() {
    let err = central_difference(&[1.0, 2.0], 1e-3, |p| {
        Ok(if p[1] > 2.0 { f64::NAN } else { 0.0 })
    })
    .unwrap_err();
    assert!(err.to_string().contains("parameter 1"), "{err}");
}

#[test]
fn spsa_estimates_the_directional_derivative() {
    let cfg = QCapsNetConfig::baseline_matching(4, 2, 12);
    let model = QCapsNetModel::init(cfg).unwrap();
    let data = samples(2, 4, 2);
    let inputs: Vec<&PureState> = data.iter().map(|s| &s.state).collect();
    let loss = |s: usize, o: &ForwardOutput| margin_loss(&o.activations, data[s].class);
    let spsa = grad_spsa(&model, &inputs, 1e-3, &mut rng_from_seed(1), &loss).unwrap();
    let fd = grad_finite_diff(&model, &inputs, 1e-3, &loss).unwrap();
    // g_p = s / Δ_p with Δ_p = ±1, so every |g_p| is the same slope s along Δ.
    let s = spsa.grad[0].abs();
    assert!(spsa.grad.iter().all(|g| (g.abs() - s).abs() < 1e-15));
    let delta: Vec<f64> = spsa.grad.iter().map(|g| g.signum()).collect();
    let along: f64 = fd.grad.iter().zip(&delta).map(|(g, d)| g * d).sum();
    assert!((s - along).abs() < 1e-6, "{s} vs {along}");
    assert!((spsa.loss - fd.loss).abs() < 1e-15);
}

#[test]
fn adam_first_step_moves_by_the_learning_rate() {
    let mut adam = Adam::new(3, 0.01);
    let mut x = vec![1.0, 2.0, 3.0];
    adam.step(&mut x, &[0.5, -2.0, 1e-3]).unwrap();
    // m̂ = g and v̂ = g², so the step is lr · g / (|g| + ε).
    for (xi, (x0, g)) in x.iter().zip([(1.0, 0.5f64), (2.0, -2.0), (3.0, 1e-3)]) {
        let want = x0 - 0.01 * g / (g.abs() + 1e-8);
        assert!((xi - want).abs() < 1e-15);
    }
    assert_eq!(adam.t, 1);
    assert!(adam.step(&mut x, &[f64::NAN, 0.0, 0.0]).is_err());
    assert!(adam.step(&mut x, &[0.0]).is_err());
}

#[test]
fn checkpoint_round_trip() {
    let model = QCapsNetModel::init(QCapsNetConfig {
        readout: Readout::Purity,
        ..small_config(ChannelKind::Dqfnn)
    })
    .unwrap();
    let mut adam = Adam::new(model.parameter_count(), 0.02);
    adam.step(
        &mut model.params().to_vec(),
        &vec![0.1; model.parameter_count()],
    )
    .unwrap();
    let ck = Checkpoint {
        model,
        optimizer: Some(adam),
        epoch: 7,
    };
    let bytes = encode_checkpoint(&ck);
    assert_eq!(&bytes[..4], CHECKPOINT_MAGIC);
    assert_eq!(decode_checkpoint(&bytes).unwrap(), ck);
    let bare = Checkpoint {
        optimizer: None,
        ..ck.clone()
    };
    assert_eq!(decode_checkpoint(&encode_checkpoint(&bare)).unwrap(), bare);
    let base = QCapsNetModel::init(QCapsNetConfig::baseline_matching(4, 2, 24)).unwrap();
    let ck = Checkpoint {
        model: base,
        optimizer: None,
        epoch: 0,
    };
    assert_eq!(decode_checkpoint(&encode_checkpoint(&ck)).unwrap(), ck);
}

#[test]
fn checkpoint_corruption_is_reported() {
    let model = QCapsNetModel::init(small_config(ChannelKind::Pqc)).unwrap();
    let bytes = encode_checkpoint(&Checkpoint {
        model,
        optimizer: None,
        epoch: 1,
    });
    for cut in [0, 3, 6, 20, bytes.len() - 1] {
        assert!(
            matches!(
                decode_checkpoint(&bytes[..cut]),
                Err(qcaps::Error::Parse { .. })
            ),
            "cut {cut}"
        );
    }
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(decode_checkpoint(&bad).is_err());
    let mut extra = bytes.clone();
    extra.push(0);
    assert!(decode_checkpoint(&extra).is_err());
    let mut kind = bytes;
    kind[14] = 9;
    assert!(decode_checkpoint(&kind).is_err());
}

proptest! {
    #[test]
    fn checkpoint_decoder_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
        let _ = decode_checkpoint(&bytes);
    }

    #[test]
    fn activations_are_probabilities(seed in 0u64..1000) {
        let model = QCapsNetModel::init(QCapsNetConfig { seed, ..small_config(ChannelKind::Dqfnn) }).unwrap();
        let x = random_pure(4, &mut rng_from_seed(seed));
        let out = forward(&model, &x).unwrap();
        for (p, chi) in out.activations.iter().zip(&out.digit_states) {
            prop_assert!((0.0..=1.0).contains(p));
            prop_assert!((chi.matrix().trace().re - 1.0).abs() < 1e-10);
        }
    }
}

fn trainer(epochs: u32, seed: u64) -> Trainer {
    let model = QCapsNetModel::init(small_config(ChannelKind::Dqfnn)).unwrap();
    Trainer::new(
        model,
        TrainOptions {
            epochs,
            batch_size: 4,
            learning_rate: 0.05,
            seed,
            ..TrainOptions::default()
        },
    )
}

#[test]
fn training_lowers_the_loss() {
    let data = samples(8, 4, 21);
    let mut t = trainer(4, 3);
    let first = evaluate(&t.model, &data, LossKind::Margin).unwrap().loss;
    let h = t.fit(&data, &[]).unwrap();
    let last = h.last(qcaps::datasets::Split::Train).unwrap().loss;
    assert!(last < first, "{first} -> {last}");
    assert_eq!(h.rows.len(), 4);
}

#[test]
fn training_is_deterministic_and_resumable() {
    let data = samples(8, 4, 22);
    let mut a = trainer(3, 5);
    let ha = a.fit(&data, &data[..2]).unwrap();
    let mut b = trainer(3, 5);
    assert_eq!(b.fit(&data, &data[..2]).unwrap(), ha);

    let mut first = trainer(1, 5);
    first.fit(&data, &[]).unwrap();
    let ck = decode_checkpoint(&encode_checkpoint(&first.checkpoint())).unwrap();
    let mut resumed = Trainer::from_checkpoint(
        ck,
        TrainOptions {
            epochs: 3,
            ..first.options.clone()
        },
    );
    resumed.fit(&data, &[]).unwrap();
    assert_eq!(resumed.model, a.model);
}

#[test]
fn history_csv_layout() {
    let data = samples(4, 4, 23);
    let mut t = trainer(1, 1);
    let h = t.fit(&data, &data).unwrap();
    let csv = h.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "epoch,split,loss,accuracy,max_dq");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,train,"));
    assert!(lines[2].starts_with("1,test,"));
}

#[test]
fn empty_datasets_are_errors() {
    let model = QCapsNetModel::init(small_config(ChannelKind::Pqc)).unwrap();
    let none: Vec<Sample> = Vec::new();
    assert!(matches!(
        evaluate(&model, &none, LossKind::Margin),
        Err(qcaps::Error::Argument(_))
    ));
    assert!(trainer(1, 0).train_epoch(&none).is_err());
}

#[test]
fn zero_epochs_leave_the_model_alone() {
    let data = samples(4, 4, 24);
    let mut t = trainer(0, 1);
    let before = t.model.clone();
    let h = t.fit(&data, &data).unwrap();
    assert!(h.rows.is_empty());
    assert_eq!(t.model, before);
}

#[test]
fn single_sample_loss_decreases_or_warns() {
    let data = samples(1, 4, 25);
    let mut t = trainer(5, 2);
    let h = t.fit(&data, &[]).unwrap();
    let losses: Vec<f64> = h.rows.iter().map(|r| r.loss).collect();
    let monotone = losses.windows(2).all(|w| w[1] < w[0]);
    assert!(monotone || !h.warnings.is_empty(), "{losses:?}");
}

#[test]
fn closed_form_loss_examples() {
    assert!((margin_loss(&[0.8, 0.3], 0) - 0.03).abs() < 1e-15);
    assert!((cross_entropy(&[0.5, 0.2], &[1.0, 0.0]) - 2f64.ln()).abs() < 1e-15);
    assert_eq!(cross_entropy(&[1.0, 0.2], &[1.0, 0.0]), 0.0);
    assert!((combined_loss(0.03, 0.5) - 0.08).abs() < 1e-15);
    assert!((mse_loss(&[0.7; 4], &[0.2; 4]) - 0.25).abs() < 1e-15);
}

#[test]
fn gradient_of_a_constant_loss_is_zero() {
    let model = QCapsNetModel::init(small_config(ChannelKind::Pqc)).unwrap();
    let data = samples(2, 4, 26);
    let inputs: Vec<&PureState> = data.iter().map(|s| &s.state).collect();
    let est = grad_finite_diff(&model, &inputs, FD_STEP, &|_, _| 0.25).unwrap();
    assert!(est.grad.iter().all(|&g| g == 0.0));
}

#[test]
fn sine_derivative_within_taylor_bound() {
    let h = FD_STEP;
    let g = central_difference(&[0.0], h, |p| Ok(p[0].sin())).unwrap()[0];
    assert!((g - 1.0).abs() <= h * h / 6.0 + 1e-15);
}

fn micro_config() -> QCapsNetConfig {
    QCapsNetConfig {
        total_qubits: 2,
        preprocess_depth: 1,
        primary_capsules: 1,
        qubits_per_primary: 2,
        qubits_per_digit: 1,
        channel_kind: ChannelKind::Dqfnn,
        channel_depth: 1,
        seed: 4,
        ..QCapsNetConfig::default()
    }
}

#[test]
fn step_halving_ratio_is_near_four() {
    let model = QCapsNetModel::init(micro_config()).unwrap();
    let data = samples(4, 2, 27);
    let inputs: Vec<&PureState> = data.iter().map(|s| &s.state).collect();
    let loss = |s: usize, o: &ForwardOutput| margin_loss(&o.activations, data[s].class);
    let ratios = richardson_ratios(&model, &inputs, 0.05, &loss).unwrap();
    let tested: Vec<f64> = ratios.iter().flatten().copied().collect();
    assert!(tested.len() >= ratios.len() / 2, "{ratios:?}");
    let good = tested.iter().filter(|r| (3.5..=4.5).contains(*r)).count();
    assert!(good * 100 >= 95 * tested.len(), "{ratios:?}");
}

#[test]
fn adam_zero_gradient_is_a_no_op() {
    let mut adam = Adam::new(2, 0.01);
    let mut x = vec![0.3, -1.0];
    adam.step(&mut x, &[0.0, 0.0]).unwrap();
    assert_eq!(x, vec![0.3, -1.0]);
}

#[test]
fn adam_three_steps_on_a_quadratic() {
    // f(x) = x², g = 2x; recursion written out step by step.
    let (lr, b1, b2, eps) = (0.01f64, 0.9f64, 0.999f64, 1e-8);
    let mut want = 1.0f64;
    let (mut m, mut v) = (0.0f64, 0.0f64);
    let mut adam = Adam::new(1, lr);
    let mut x = vec![1.0];
    for t in 1..=3 {
        let g = 2.0 * want;
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        let mh = m / (1.0 - b1.powi(t));
        let vh = v / (1.0 - b2.powi(t));
        want -= lr * mh / (vh.sqrt() + eps);
        let grad = [2.0 * x[0]];
        adam.step(&mut x, &grad).unwrap();
        assert!((x[0] - want).abs() < 1e-15, "step {t}");
    }
}

#[test]
fn constant_predictor_scores_half_on_balanced_data() {
    // Every activation equal: ties go to class 0, which is right half the time.
    let cfg = QCapsNetConfig::baseline_matching(4, 2, 12);
    let model = QCapsNetModel::zeros(cfg).unwrap();
    let data: Vec<Sample> = (0..10)
        .map(|i| Sample {
            state: PureState::basis(4, 0),
            class: i % 2,
        })
        .collect();
    let r = evaluate(&model, &data, LossKind::Margin).unwrap();
    assert_eq!(r.accuracy, 0.5);
}

#[test]
fn decisions_survive_monotone_rescaling() {
    let model = QCapsNetModel::init(small_config(ChannelKind::Dqfnn)).unwrap();
    for s in samples(10, 4, 28) {
        let out = forward(&model, &s.state).unwrap();
        let squashed: Vec<f64> = out
            .activations
            .iter()
            .map(|p| (3.0 * p).tanh() + 0.1)
            .collect();
        assert_eq!(
            predicted_class(&out.activations),
            predicted_class(&squashed)
        );
    }
}
