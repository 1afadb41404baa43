use std::path::{Path, PathBuf};

use log::info;

use qcaps::channels::ChannelKind;
use qcaps::circuit::{run_verification_with, VerifyOptions};
use qcaps::network::{
    save_checkpoint, Architecture, GradientMethod, LossKind, QCapsNetConfig, Readout, TrainOptions,
    FD_STEP,
};
use qcaps::reconstruction::ReconstructionOptions;

use crate::cli::{Command, CommonArgs};
use crate::config::{read_config, ConfigMap};
use crate::error::{CliError, CliResult};
use crate::experiments::*;

const COMMON_KEYS: &[&str] = &["seed", "out", "threads"];
const DATA_KEYS: &[&str] = &["mnist_images", "mnist_labels", "digits"];
const TRAIN_KEYS: &[&str] = &[
    "epochs",
    "batch_size",
    "learning_rate",
    "loss",
    "gradient",
    "fd_step",
    "spsa_step",
];
const NETWORK_KEYS: &[&str] = &[
    "architecture",
    "channel",
    "depth",
    "k",
    "routing_iters",
    "readout",
    "preprocess_depth",
    "primary_capsules",
    "qubits_per_primary",
    "qubits_per_digit",
];
const VERIFY_KEYS: &[&str] = &[
    "swap_instances",
    "assignment_instances",
    "m",
    "k",
    "t",
    "phase_fault",
];
const MNIST_KEYS: &[&str] = &["train_per_class", "test_per_class"];
const SPT_KEYS: &[&str] = &[
    "spins",
    "train_count",
    "test_count",
    "train_lo",
    "train_hi",
    "test_lo",
    "test_hi",
    "grid",
];
const RECON_KEYS: &[&str] = &["samples_per_class", "sweep_samples", "train_quantum"];
const SWEEP_KEYS: &[&str] = &["depths", "train_per_class", "test_per_class"];

fn allowed(command: &Command) -> Vec<&'static str> {
    let groups: &[&[&str]] = match command {
        Command::Verify(_) => &[COMMON_KEYS, VERIFY_KEYS],
        Command::TrainMnist(_) => &[COMMON_KEYS, DATA_KEYS, TRAIN_KEYS, NETWORK_KEYS, MNIST_KEYS],
        Command::TrainSpt(_) => &[COMMON_KEYS, TRAIN_KEYS, NETWORK_KEYS, SPT_KEYS],
        Command::Reconstruct(_) => &[COMMON_KEYS, DATA_KEYS, TRAIN_KEYS, NETWORK_KEYS, RECON_KEYS],
        Command::SweepParams(_) => &[COMMON_KEYS, DATA_KEYS, TRAIN_KEYS, NETWORK_KEYS, SWEEP_KEYS],
    };
    groups.iter().flat_map(|g| g.iter().copied()).collect()
}

/// Config file, then flags on top.
pub fn collect_config(args: &CommonArgs) -> CliResult<ConfigMap> {
    let mut map = match &args.config {
        Some(p) => read_config(p)?,
        None => ConfigMap::default(),
    };
    let path = |p: &PathBuf| p.to_string_lossy().into_owned();
    let flags: Vec<(&str, Option<String>)> = vec![
        ("seed", args.seed.map(|v| v.to_string())),
        ("out", args.out.as_ref().map(path)),
        ("threads", args.threads.map(|v| v.to_string())),
        ("mnist_images", args.mnist_images.as_ref().map(path)),
        ("mnist_labels", args.mnist_labels.as_ref().map(path)),
        ("epochs", args.epochs.map(|v| v.to_string())),
        ("k", args.k.map(|v| v.to_string())),
        ("m", args.m.map(|v| v.to_string())),
        ("grid", args.grid.map(|v| v.to_string())),
        ("depth", args.depth.map(|v| v.to_string())),
        ("channel", args.channel.clone()),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            map.set(key, v);
        }
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        map.set(k.trim(), v.trim());
    }
    Ok(map)
}

fn output_dir(map: &ConfigMap) -> CliResult<PathBuf> {
    let out = PathBuf::from(map.raw("out").unwrap_or("out"));
    std::fs::create_dir_all(&out).map_err(|e| {
        CliError::Usage(format!(
            "cannot create output directory {}: {e}",
            out.display()
        ))
    })?;
    Ok(out)
}

fn write(dir: &Path, name: &str, bytes: impl AsRef<[u8]>) -> CliResult<()> {
    std::fs::write(dir.join(name), bytes)?;
    Ok(())
}

fn configure_threads(map: &ConfigMap) -> CliResult<()> {
    if let Some(n) = map.get::<usize>("threads")? {
        if n == 0 {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        // A pool that already exists (tests running commands in-process) is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

pub fn network_config(
    map: &ConfigMap,
    base: QCapsNetConfig,
    seed: u64,
) -> CliResult<QCapsNetConfig> {
    let kind: ChannelKind = map.get_or("channel", base.channel_kind)?;
    let depth = map.get_or("depth", base.channel_depth)?;
    let preset = if map.contains("channel") && kind != base.channel_kind {
        QCapsNetConfig {
            total_qubits: base.total_qubits,
            ..QCapsNetConfig::mnist(kind, depth)
        }
    } else {
        base
    };
    let mut cfg = QCapsNetConfig {
        architecture: map.get_or::<Architecture>("architecture", preset.architecture)?,
        channel_kind: kind,
        channel_depth: depth,
        k: map.get_or("k", preset.k)?,
        routing_iters: map.get_or("routing_iters", preset.routing_iters)?,
        readout: map.get_or::<Readout>("readout", preset.readout)?,
        preprocess_depth: map.get_or("preprocess_depth", preset.preprocess_depth)?,
        primary_capsules: map.get_or("primary_capsules", preset.primary_capsules)?,
        qubits_per_primary: map.get_or("qubits_per_primary", preset.qubits_per_primary)?,
        qubits_per_digit: map.get_or("qubits_per_digit", preset.qubits_per_digit)?,
        seed,
        ..preset
    };
    if cfg.architecture == Architecture::Baseline && !map.contains("preprocess_depth") {
        // Match the capsule network the other keys describe.
        let capsule = QCapsNetConfig {
            architecture: Architecture::Capsule,
            ..cfg.clone()
        };
        cfg = QCapsNetConfig {
            seed,
            readout: cfg.readout,
            ..QCapsNetConfig::baseline_matching(
                cfg.total_qubits,
                cfg.qubits_per_digit,
                capsule.parameter_count(),
            )
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn train_options(map: &ConfigMap, seed: u64, default_epochs: u32) -> CliResult<TrainOptions> {
    let gradient = match map.raw("gradient").unwrap_or("finite_difference") {
        "finite_difference" | "fd" => GradientMethod::FiniteDifference {
            h: map.get_or("fd_step", FD_STEP)?,
        },
        "spsa" => GradientMethod::Spsa {
            c: map.get_or("spsa_step", 0.05)?,
        },
        other => {
            return Err(CliError::Usage(format!(
                "unknown gradient method '{other}'"
            )))
        }
    };
    Ok(TrainOptions {
        epochs: map.get_or("epochs", default_epochs)?,
        batch_size: map.get_or("batch_size", 16)?,
        learning_rate: map.get_or("learning_rate", 0.01)?,
        loss: map.get_or::<LossKind>("loss", DEFAULT_LOSS)?,
        gradient,
        seed,
        checkpoint: None,
    })
}

fn digits(map: &ConfigMap) -> CliResult<[u8; 2]> {
    let d: Vec<u8> = map.get_list("digits", vec![3, 6])?;
    match d.as_slice() {
        [a, b] if a != b && *a < 10 && *b < 10 => Ok([*a, *b]),
        _ => Err(CliError::Usage(format!(
            "digits must be two distinct digits, got {d:?}"
        ))),
    }
}

fn mnist_source(map: &ConfigMap) -> CliResult<qcaps::datasets::IdxDataset> {
    let images = map
        .raw("mnist_images")
        .ok_or_else(|| CliError::Usage("missing mnist_images path".into()))?;
    let labels = map
        .raw("mnist_labels")
        .ok_or_else(|| CliError::Usage("missing mnist_labels path".into()))?;
    for p in [images, labels] {
        if !Path::new(p).exists() {
            return Err(CliError::Usage(format!("data file {p} does not exist")));
        }
    }
    load_mnist(Path::new(images), Path::new(labels))
}

fn cmd_verify(map: &ConfigMap) -> CliResult<String> {
    let seed = map.require::<u64>("seed")?;
    let opts = VerifyOptions {
        swap_instances: map.get_or("swap_instances", 50)?,
        assignment_instances: map.get_or("assignment_instances", 20)?,
        m: map.get("m")?,
        k: map.get("k")?,
        t: map.get_or("t", 0.01)?,
        phase_fault: map.get_or("phase_fault", 0.0)?,
    };
    let report = run_verification_with(seed, &opts)?;
    let text = report.to_string();
    if report.all_passed() {
        Ok(text)
    } else {
        Err(CliError::Failed(text))
    }
}

fn cmd_train_mnist(map: &ConfigMap) -> CliResult<String> {
    let seed = map.require::<u64>("seed")?;
    let cfg = network_config(map, QCapsNetConfig::default(), seed)?;
    let opts = train_options(map, seed, 10)?;
    let out = output_dir(map)?;
    let src = mnist_source(map)?;
    let (train, test) = mnist_datasets(
        &src,
        digits(map)?,
        map.get_or("train_per_class", 100)?,
        map.get_or("test_per_class", 50)?,
        seed,
    )?;
    let run = train_classifier(cfg, opts, &train.samples, &test.samples)?;
    write(&out, "history.csv", run.history.to_csv())?;
    save_checkpoint(&out.join("model.qcpt"), &run.trainer.checkpoint())?;
    Ok(format!(
        "train_inacc={:.6} test_inacc={}",
        run.train_inaccuracy,
        run.test_inaccuracy
            .map_or("none".into(), |v| format!("{v:.6}"))
    ))
}

fn cmd_train_spt(map: &ConfigMap) -> CliResult<String> {
    let seed = map.require::<u64>("seed")?;
    let cfg = network_config(map, QCapsNetConfig::spt(), seed)?;
    let opts = train_options(map, seed, 20)?;
    let d = SptSettings::default();
    let s = SptSettings {
        spins: map.get_or("spins", d.spins)?,
        train_count: map.get_or("train_count", d.train_count)?,
        test_count: map.get_or("test_count", d.test_count)?,
        train_range: (
            map.get_or("train_lo", d.train_range.0)?,
            map.get_or("train_hi", d.train_range.1)?,
        ),
        test_range: (
            map.get_or("test_lo", d.test_range.0)?,
            map.get_or("test_hi", d.test_range.1)?,
        ),
        grid: map.get_or("grid", d.grid)?,
        seed,
    };
    if cfg.total_qubits != s.spins {
        return Err(CliError::Usage(format!(
            "network has {} qubits but the chain has {} spins",
            cfg.total_qubits, s.spins
        )));
    }
    let out = output_dir(map)?;
    let (train, test) = spt_datasets(&s)?;
    let run = train_classifier(cfg, opts, &train.samples, &test.samples)?;
    let grid = activation_grid(&run.trainer.model, s.spins, s.test_range, s.grid)?;
    let crossing = crossing_point(&grid);
    write(&out, "history.csv", run.history.to_csv())?;
    write(&out, "activations.csv", activations_csv(&grid))?;
    save_checkpoint(&out.join("model.qcpt"), &run.trainer.checkpoint())?;
    Ok(format!(
        "train_inacc={:.6} test_inacc={} crossing={}",
        run.train_inaccuracy,
        run.test_inaccuracy
            .map_or("none".into(), |v| format!("{v:.6}")),
        crossing.map_or("none".into(), |c| format!("{c:.4}"))
    ))
}

fn cmd_reconstruct(map: &ConfigMap) -> CliResult<String> {
    let seed = map.require::<u64>("seed")?;
    let cfg = network_config(map, QCapsNetConfig::reconstruction(), seed)?;
    let t = train_options(map, seed, 10)?;
    let h = match t.gradient {
        GradientMethod::FiniteDifference { h } => h,
        GradientMethod::Spsa { .. } => {
            return Err(CliError::Usage(
                "reconstruction trains with finite differences only".into(),
            ))
        }
    };
    let opts = ReconstructionOptions {
        epochs: t.epochs,
        batch_size: t.batch_size,
        learning_rate: t.learning_rate,
        fd_step: h,
        seed,
        train_quantum: map.get_or("train_quantum", true)?,
    };
    let out = output_dir(map)?;
    let src = mnist_source(map)?;
    let per_class = map.get_or("samples_per_class", 10)?;
    let (samples, _) = mnist_datasets(&src, digits(map)?, per_class, 0, seed)?;
    let run = run_reconstruction(cfg, opts, &samples.samples, map.get_or("sweep_samples", 2)?)?;
    write(&out, "history.csv", run.history.to_csv())?;
    for (name, bytes) in &run.images {
        write(&out, name, bytes)?;
    }
    let last = run.history.rows.last().map_or(run.initial.mse, |r| r.mse);
    Ok(format!(
        "mse_initial={:.6} mse_final={last:.6} images={}",
        run.initial.mse,
        run.images.len()
    ))
}

fn cmd_sweep(map: &ConfigMap) -> CliResult<String> {
    let seed = map.require::<u64>("seed")?;
    let base = network_config(map, QCapsNetConfig::default(), seed)?;
    let opts = train_options(map, seed, 10)?;
    let depths: Vec<usize> = map.get_list("depths", vec![1, 2, 3, 4, 5])?;
    if depths.is_empty() || depths.contains(&0) || depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(
            "depths must be increasing positive integers".into(),
        ));
    }
    let out = output_dir(map)?;
    let src = mnist_source(map)?;
    let (train, test) = mnist_datasets(
        &src,
        digits(map)?,
        map.get_or("train_per_class", 100)?,
        map.get_or("test_per_class", 50)?,
        seed,
    )?;
    let rows = run_sweep(
        &sweep_configs(&base, &depths),
        &opts,
        &train.samples,
        &test.samples,
    )?;
    write(&out, "sweep.csv", sweep_csv(&rows))?;
    Ok(format!("{} runs", rows.len()))
}

/// Run one subcommand; returns the summary printed on success.
pub fn execute(command: &Command) -> CliResult<String> {
    let args = match command {
        Command::Verify(a)
        | Command::TrainMnist(a)
        | Command::TrainSpt(a)
        | Command::Reconstruct(a)
        | Command::SweepParams(a) => a,
    };
    let map = collect_config(args)?;
    map.check_keys(&allowed(command))?;
    configure_threads(&map)?;
    info!("config: {:?}", map);
    match command {
        Command::Verify(_) => cmd_verify(&map),
        Command::TrainMnist(_) => cmd_train_mnist(&map),
        Command::TrainSpt(_) => cmd_train_spt(&map),
        Command::Reconstruct(_) => cmd_reconstruct(&map),
        Command::SweepParams(_) => cmd_sweep(&map),
    }
}
