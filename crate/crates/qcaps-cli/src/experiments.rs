//! Experiment runners shared by the subcommands and the acceptance suite.

use std::fmt::Write as _;
use std::path::Path;

use log::info;
use rayon::prelude::*;

use qcaps::channels::ChannelKind;
use qcaps::datasets::{
    build_mnist_split, read_idx_files, sample_spt_dataset, spin_sample, Dataset, IdxDataset,
    ImageSample, LabeledState, SpinChainSample, Split,
};
use qcaps::network::{
    evaluate, forward, LossKind, QCapsNetConfig, QCapsNetModel, TrainOptions, Trainer,
    TrainingHistory,
};
use qcaps::reconstruction::{
    default_thetas, encode_pgm, evaluate_reconstruction, perturbation_sweep, pgm_filename,
    PerturbationKind, ReconstructionHistory, ReconstructionModel, ReconstructionOptions,
    ReconstructionRow, ReconstructionTrainer, DEFAULT_DECODER_SIZES,
};

use crate::error::{CliError, CliResult};

pub fn load_mnist(images: &Path, labels: &Path) -> CliResult<IdxDataset> {
    read_idx_files(images, labels).map_err(|e| CliError::Data(e.to_string()))
}

/// A trained classifier with its history and final inaccuracies.
#[derive(Clone, Debug)]
pub struct ClassifierRun {
    pub trainer: Trainer,
    pub history: TrainingHistory,
    pub train_inaccuracy: f64,
    pub test_inaccuracy: Option<f64>,
}

pub fn train_classifier<S: LabeledState + Sync>(
    config: QCapsNetConfig,
    options: TrainOptions,
    train: &[S],
    test: &[S],
) -> CliResult<ClassifierRun> {
    let model = QCapsNetModel::init(config)?;
    let mut trainer = Trainer::new(model, options);
    let history = trainer.fit(train, test)?;
    let kind = trainer.options.loss;
    let train_inaccuracy = evaluate(&trainer.model, train, kind)?.inaccuracy();
    let test_inaccuracy = if test.is_empty() {
        None
    } else {
        Some(evaluate(&trainer.model, test, kind)?.inaccuracy())
    };
    Ok(ClassifierRun {
        trainer,
        history,
        train_inaccuracy,
        test_inaccuracy,
    })
}

/// Cluster-Ising phase data.
#[derive(Clone, Debug, PartialEq)]
pub struct SptSettings {
    pub spins: usize,
    pub train_count: usize,
    pub test_count: usize,
    pub train_range: (f64, f64),
    pub test_range: (f64, f64),
    /// Points of the activation grid over `test_range`, endpoints included.
    pub grid: usize,
    pub seed: u64,
}

impl Default for SptSettings {
    fn default() -> Self {
        Self {
            spins: 8,
            train_count: 200,
            test_count: 40,
            train_range: (0.0, 2.0),
            test_range: (0.8, 1.2),
            grid: 41,
            seed: 0,
        }
    }
}

pub fn spt_datasets(
    s: &SptSettings,
) -> CliResult<(Dataset<SpinChainSample>, Dataset<SpinChainSample>)> {
    let train = sample_spt_dataset(
        s.spins,
        s.train_count,
        s.train_range.0,
        s.train_range.1,
        s.seed,
        Split::Train,
    )?;
    let test = sample_spt_dataset(
        s.spins,
        s.test_count,
        s.test_range.0,
        s.test_range.1,
        s.seed.wrapping_add(1),
        Split::Test,
    )?;
    Ok((train, test))
}

/// (α, P_0, P_1) on `points` evenly spaced couplings in [lo, hi].
pub fn activation_grid(
    model: &QCapsNetModel,
    spins: usize,
    range: (f64, f64),
    points: usize,
) -> CliResult<Vec<(f64, f64, f64)>> {
    if points < 2 {
        return Err(CliError::Usage(
            "activation grid needs at least 2 points".into(),
        ));
    }
    (0..points)
        .into_par_iter()
        .map(|i| {
            let alpha = range.0 + (range.1 - range.0) * i as f64 / (points - 1) as f64;
            let out = forward(model, &spin_sample(spins, alpha)?.state)?;
            Ok((alpha, out.activations[0], out.activations[1]))
        })
        .collect()
}

/// First α where P_0 − P_1 changes sign, linearly interpolated.
pub fn crossing_point(grid: &[(f64, f64, f64)]) -> Option<f64> {
    grid.windows(2).find_map(|w| {
        let (a0, d0) = (w[0].0, w[0].1 - w[0].2);
        let (a1, d1) = (w[1].0, w[1].1 - w[1].2);
        if d0 == 0.0 {
            Some(a0)
        } else if d0 * d1 < 0.0 {
            Some(a0 + (a1 - a0) * d0 / (d0 - d1))
        } else {
            None
        }
    })
}

pub const ACTIVATIONS_HEADER: &str = "alpha,p0,p1";

pub fn activations_csv(grid: &[(f64, f64, f64)]) -> String {
    let mut s = format!("{ACTIVATIONS_HEADER}\n");
    for (a, p0, p1) in grid {
        writeln!(s, "{a:.6},{p0:.10},{p1:.10}").unwrap();
    }
    s
}

/// One row of the parameter sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub variant: String,
    pub depth: usize,
    pub param_count: usize,
    pub train_inaccuracy: f64,
    pub test_inaccuracy: f64,
}

pub const SWEEP_HEADER: &str = "variant,depth,param_count,train_inacc,test_inacc";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = format!("{SWEEP_HEADER}\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{:.6},{:.6}",
            r.variant, r.depth, r.param_count, r.train_inaccuracy, r.test_inaccuracy
        )
        .unwrap();
    }
    s
}

pub fn variant_name(kind: ChannelKind) -> String {
    format!("{}_caps", kind.name().replace('-', "_"))
}

pub const BASELINE_VARIANT: &str = "baseline";

/// Sweep configurations: every channel kind at every depth, then the
/// baseline at each circuit depth that matches one of them in parameter count.
pub fn sweep_configs(base: &QCapsNetConfig, depths: &[usize]) -> Vec<(String, QCapsNetConfig)> {
    let mut out = Vec::new();
    for kind in [ChannelKind::Pqc, ChannelKind::Dqfnn, ChannelKind::PostDqfnn] {
        for &d in depths {
            let cfg = QCapsNetConfig {
                seed: base.seed,
                preprocess_depth: base.preprocess_depth,
                k: base.k,
                routing_iters: base.routing_iters,
                readout: base.readout,
                ..QCapsNetConfig::mnist(kind, d)
            };
            out.push((variant_name(kind), cfg));
        }
    }
    let mut baselines: Vec<QCapsNetConfig> = out
        .iter()
        .map(|(_, c)| QCapsNetConfig {
            seed: base.seed,
            readout: base.readout,
            ..QCapsNetConfig::baseline_matching(
                base.total_qubits,
                base.qubits_per_digit,
                c.parameter_count(),
            )
        })
        .collect();
    baselines.sort_by_key(|c| c.preprocess_depth);
    baselines.dedup_by_key(|c| c.preprocess_depth);
    out.extend(
        baselines
            .into_iter()
            .map(|c| (BASELINE_VARIANT.to_string(), c)),
    );
    out
}

pub fn depth_of(cfg: &QCapsNetConfig) -> usize {
    match cfg.architecture {
        qcaps::network::Architecture::Capsule => cfg.channel_depth,
        qcaps::network::Architecture::Baseline => cfg.preprocess_depth,
    }
}

pub fn run_sweep(
    configs: &[(String, QCapsNetConfig)],
    options: &TrainOptions,
    train: &[ImageSample],
    test: &[ImageSample],
) -> CliResult<Vec<SweepRow>> {
    configs
        .par_iter()
        .map(|(name, cfg)| {
            info!(
                "sweep {name} depth {} ({} parameters)",
                depth_of(cfg),
                cfg.parameter_count()
            );
            let run = train_classifier(cfg.clone(), options.clone(), train, test)?;
            Ok(SweepRow {
                variant: name.clone(),
                depth: depth_of(cfg),
                param_count: cfg.parameter_count(),
                train_inaccuracy: run.train_inaccuracy,
                test_inaccuracy: run.test_inaccuracy.unwrap_or(f64::NAN),
            })
        })
        .collect()
}

pub fn mnist_datasets(
    src: &IdxDataset,
    digits: [u8; 2],
    train_per_class: usize,
    test_per_class: usize,
    seed: u64,
) -> CliResult<(Dataset<ImageSample>, Dataset<ImageSample>)> {
    build_mnist_split(src, digits, train_per_class, test_per_class, seed).map_err(|e| match e {
        qcaps::Error::Data(m) => CliError::Data(m),
        other => other.into(),
    })
}

/// Trained reconstruction stack and the sweep images.
#[derive(Clone, Debug)]
pub struct ReconstructionRun {
    pub initial: ReconstructionRow,
    pub history: ReconstructionHistory,
    pub model: ReconstructionModel,
    /// (file name, PGM bytes)
    pub images: Vec<(String, Vec<u8>)>,
}

pub fn run_reconstruction(
    config: QCapsNetConfig,
    options: ReconstructionOptions,
    samples: &[ImageSample],
    sweep_samples: usize,
) -> CliResult<ReconstructionRun> {
    let model = ReconstructionModel::init(config, &DEFAULT_DECODER_SIZES)?;
    let initial = evaluate_reconstruction(&model, samples)?;
    let mut trainer = ReconstructionTrainer::new(model, options);
    let history = trainer.fit(samples)?;
    let model = trainer.model;
    let thetas = default_thetas();
    let mut images = Vec::new();
    for (i, s) in samples.iter().take(sweep_samples).enumerate() {
        let label = format!("{}-{i}", s.digit);
        for kind in PerturbationKind::ALL {
            for (img, &t) in perturbation_sweep(&model, &s.input, kind, &thetas)?
                .iter()
                .zip(&thetas)
            {
                images.push((pgm_filename(&label, kind, t), encode_pgm(16, 16, img)?));
            }
        }
    }
    Ok(ReconstructionRun {
        initial,
        history,
        model,
        images,
    })
}

/// Default loss for classification runs.
pub const DEFAULT_LOSS: LossKind = LossKind::Margin;
