use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Quantum capsule network experiments.
#[derive(Debug, Parser)]
#[command(name = "qcaps", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the overlap and assignment circuits against the routing formulas.
    Verify(CommonArgs),
    /// Train a digit classifier on a two-digit subset.
    TrainMnist(CommonArgs),
    /// Train the spin-chain phase classifier and locate the transition.
    TrainSpt(CommonArgs),
    /// Train the reconstruction decoder and render perturbation sweeps.
    Reconstruct(CommonArgs),
    /// Compare channel families and the plain circuit across depths.
    SweepParams(CommonArgs),
}

/// Flags shared by every subcommand. Each flag overrides the config key of
/// the same name (dashes become underscores).
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Flat key=value config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory, created if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub mnist_images: Option<PathBuf>,
    #[arg(long)]
    pub mnist_labels: Option<PathBuf>,
    #[arg(long)]
    pub epochs: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of input capsules in verification instances.
    #[arg(long)]
    pub m: Option<usize>,
    /// Points in the SPT activation grid.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub channel: Option<String>,
    /// Any other config key, as KEY=VALUE. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}
