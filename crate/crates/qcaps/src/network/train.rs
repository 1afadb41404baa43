use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rand::seq::SliceRandom;

use super::adam::Adam;
use super::checkpoint::{save_checkpoint, Checkpoint};
use super::config::LossKind;
use super::forward::{forward_batch, ForwardOutput};
use super::grad::{grad_finite_diff, grad_spsa, GradientEstimate, GradientMethod};
use super::loss::{classification_loss, LossReport};
use super::model::QCapsNetModel;
use super::readout::predicted_class;
use crate::datasets::{LabeledState, Split};
use crate::error::{Error, Result};
use crate::quantum::PureState;
use crate::random::derived_rng;

pub const DEFAULT_BATCH_SIZE: usize = 16;
pub const DEFAULT_LEARNING_RATE: f64 = 0.01;

/// Optimization settings.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainOptions {
    pub epochs: u32,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub loss: LossKind,
    pub gradient: GradientMethod,
    /// Drives the per-epoch shuffles and SPSA directions.
    pub seed: u64,
    /// Written after every epoch when set.
    pub checkpoint: Option<PathBuf>,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            epochs: 10,
            batch_size: DEFAULT_BATCH_SIZE,
            learning_rate: DEFAULT_LEARNING_RATE,
            loss: LossKind::Margin,
            gradient: GradientMethod::default(),
            seed: 0,
            checkpoint: None,
        }
    }
}

/// One line of the training log.
#[derive(Clone, Debug, PartialEq)]
pub struct HistoryRow {
    pub epoch: u32,
    pub split: Split,
    pub loss: f64,
    pub accuracy: f64,
    pub max_dq: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainingHistory {
    pub rows: Vec<HistoryRow>,
    /// Epochs after which the training loss did not decrease.
    pub warnings: Vec<String>,
}

impl TrainingHistory {
    pub const HEADER: &'static str = "epoch,split,loss,accuracy,max_dq";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::HEADER);
        s.push('\n');
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{:.10},{:.6},{:.6e}",
                r.epoch,
                r.split.as_str(),
                r.loss,
                r.accuracy,
                r.max_dq
            )
            .expect("writing to a String");
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Last row recorded for `split`.
    pub fn last(&self, split: Split) -> Option<&HistoryRow> {
        self.rows.iter().rev().find(|r| r.split == split)
    }
}

fn summarize(outputs: &[ForwardOutput], labels: &[usize], kind: LossKind) -> Result<LossReport> {
    let n = outputs.len() as f64;
    let mut loss = 0.0;
    let mut correct = 0usize;
    let mut dq = 0.0;
    for (out, &y) in outputs.iter().zip(labels) {
        loss += classification_loss(kind, &out.activations, y);
        correct += usize::from(predicted_class(&out.activations) == y);
        dq += out.max_delta_q();
    }
    let mut terms = BTreeMap::new();
    terms.insert(kind.as_str().to_string(), loss / n);
    LossReport::new(loss / n, terms, correct as f64 / n, dq / n)
}

/// Mean loss, accuracy and routing change over `samples`.
pub fn evaluate<S: LabeledState + Sync>(
    model: &QCapsNetModel,
    samples: &[S],
    kind: LossKind,
) -> Result<LossReport> {
    if samples.is_empty() {
        return Err(Error::Argument(
            "cannot evaluate on an empty dataset".into(),
        ));
    }
    let inputs: Vec<&PureState> = samples.iter().map(LabeledState::input_state).collect();
    let labels: Vec<usize> = samples.iter().map(LabeledState::class).collect();
    let outputs = forward_batch(model, &inputs)?;
    summarize(&outputs, &labels, kind)
}

/// Model plus optimizer state; resumable from a checkpoint.
#[derive(Clone, Debug)]
pub struct Trainer {
    pub model: QCapsNetModel,
    pub optimizer: Adam,
    /// Epochs completed so far.
    pub epoch: u32,
    pub options: TrainOptions,
}

impl Trainer {
    pub fn new(model: QCapsNetModel, options: TrainOptions) -> Self {
        let optimizer = Adam::new(model.parameter_count(), options.learning_rate);
        Self {
            model,
            optimizer,
            epoch: 0,
            options,
        }
    }

    pub fn from_checkpoint(ck: Checkpoint, options: TrainOptions) -> Self {
        let optimizer = ck
            .optimizer
            .unwrap_or_else(|| Adam::new(ck.model.parameter_count(), options.learning_rate));
        Self {
            model: ck.model,
            optimizer,
            epoch: ck.epoch,
            options,
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            model: self.model.clone(),
            optimizer: Some(self.optimizer.clone()),
            epoch: self.epoch,
        }
    }

    fn gradient(
        &self,
        inputs: &[&PureState],
        labels: &[usize],
        batch: u64,
    ) -> Result<GradientEstimate> {
        let kind = self.options.loss;
        let loss =
            |s: usize, out: &ForwardOutput| classification_loss(kind, &out.activations, labels[s]);
        match self.options.gradient {
            GradientMethod::FiniteDifference { h } => {
                grad_finite_diff(&self.model, inputs, h, &loss)
            }
            GradientMethod::Spsa { c } => {
                let stream = (u64::from(self.epoch) << 32) | batch;
                let mut rng = derived_rng(self.options.seed ^ 0x5350_5341, stream);
                grad_spsa(&self.model, inputs, c, &mut rng, &loss)
            }
        }
    }

    /// One pass over `train` in a seeded random order. Returns the mean batch loss.
    pub fn train_epoch<S: LabeledState + Sync>(&mut self, train: &[S]) -> Result<f64> {
        if train.is_empty() {
            return Err(Error::Argument("cannot train on an empty dataset".into()));
        }
        if self.options.batch_size == 0 {
            return Err(Error::Argument("batch size must be positive".into()));
        }
        let mut order: Vec<usize> = (0..train.len()).collect();
        order.shuffle(&mut derived_rng(self.options.seed, u64::from(self.epoch)));
        let mut total = 0.0;
        let mut batches = 0;
        for (b, chunk) in order.chunks(self.options.batch_size).enumerate() {
            let inputs: Vec<&PureState> = chunk.iter().map(|&s| train[s].input_state()).collect();
            let labels: Vec<usize> = chunk.iter().map(|&s| train[s].class()).collect();
            let est = self.gradient(&inputs, &labels, b as u64)?;
            self.optimizer.step(self.model.params_mut(), &est.grad)?;
            total += est.loss;
            batches += 1;
        }
        self.epoch += 1;
        Ok(total / batches as f64)
    }

    fn record(
        &self,
        history: &mut TrainingHistory,
        split: Split,
        samples: &[impl LabeledState + Sync],
    ) -> Result<f64> {
        let r = evaluate(&self.model, samples, self.options.loss)?;
        info!(
            "epoch {} {}: loss {:.5} accuracy {:.4} max_dq {:.3e}",
            self.epoch,
            split.as_str(),
            r.loss,
            r.accuracy,
            r.max_dq
        );
        history.rows.push(HistoryRow {
            epoch: self.epoch,
            split,
            loss: r.loss,
            accuracy: r.accuracy,
            max_dq: r.max_dq,
        });
        Ok(r.loss)
    }

    /// Train until `options.epochs` epochs are done, evaluating both splits
    /// after every epoch. A test split may be empty.
    pub fn fit<S: LabeledState + Sync>(
        &mut self,
        train: &[S],
        test: &[S],
    ) -> Result<TrainingHistory> {
        if train.is_empty() {
            return Err(Error::Argument("cannot train on an empty dataset".into()));
        }
        let mut history = TrainingHistory::default();
        let mut previous = f64::INFINITY;
        while self.epoch < self.options.epochs {
            self.train_epoch(train)?;
            let loss = self.record(&mut history, Split::Train, train)?;
            if loss >= previous {
                let msg = format!(
                    "epoch {}: training loss plateaued at {loss:.6} (previous {previous:.6})",
                    self.epoch
                );
                warn!("{msg}");
                history.warnings.push(msg);
            }
            previous = loss;
            if !test.is_empty() {
                self.record(&mut history, Split::Test, test)?;
            }
            if let Some(path) = &self.options.checkpoint {
                save_checkpoint(path, &self.checkpoint())?;
            }
        }
        Ok(history)
    }
}
