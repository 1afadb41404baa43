use std::fmt::Write as _;

use log::{info, warn};
use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::decoder::{DecoderMLP, DEFAULT_DECODER_SIZES};
use super::perturb::{perturb_capsule, PerturbationKind};
use super::tomography::tomography_vector;
use crate::datasets::{ImageSample, PIXELS};
use crate::error::{Error, Result};
use crate::network::{
    combined_loss, forward, forward_batch, grad_finite_diff, margin_loss, mse_loss,
    predicted_class, Adam, ForwardOutput, QCapsNetConfig, QCapsNetModel, FD_STEP, MSE_WEIGHT,
};
use crate::quantum::{DensityMatrix, PureState};
use crate::random::derived_rng;

/// Capsule network plus the decoder reading its digit capsules.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionModel {
    pub network: QCapsNetModel,
    pub decoder: DecoderMLP,
}

impl ReconstructionModel {
    pub fn new(network: QCapsNetModel, decoder: DecoderMLP) -> Result<Self> {
        let features = 1usize << (2 * network.config().qubits_per_digit);
        if decoder.input_size() != features || decoder.output_size() != PIXELS {
            return Err(Error::Argument(format!(
                "decoder shape {:?} does not map {features} features to {PIXELS} pixels",
                decoder.sizes()
            )));
        }
        Ok(Self { network, decoder })
    }

    /// Seeded network angles and decoder weights.
    pub fn init(config: QCapsNetConfig, decoder_sizes: &[usize]) -> Result<Self> {
        let seed = config.seed;
        let network = QCapsNetModel::init(config)?;
        let decoder = DecoderMLP::random(decoder_sizes, &mut derived_rng(seed, 0xDEC0))?;
        Self::new(network, decoder)
    }

    pub fn default_init(seed: u64) -> Result<Self> {
        Self::init(
            QCapsNetConfig {
                seed,
                ..QCapsNetConfig::reconstruction()
            },
            &DEFAULT_DECODER_SIZES,
        )
    }

    pub fn reconstruct(&self, chi: &DensityMatrix) -> Result<Vec<f64>> {
        self.decoder.forward(&tomography_vector(chi))
    }
}

/// Capsule read out for decoding: the most active one, ties to class 0.
pub fn most_active(out: &ForwardOutput) -> usize {
    let c = predicted_class(&out.activations);
    if out
        .activations
        .iter()
        .filter(|&&p| p == out.activations[c])
        .count()
        > 1
    {
        info!("activation tie {:?}; decoding capsule {c}", out.activations);
    }
    c
}

/// One decoded image per θ, perturbing the most active capsule.
pub fn perturbation_sweep(
    model: &ReconstructionModel,
    input: &PureState,
    kind: PerturbationKind,
    thetas: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let out = forward(&model.network, input)?;
    let chi = &out.digit_states[most_active(&out)];
    thetas
        .par_iter()
        .map(|&t| model.reconstruct(&perturb_capsule(chi, kind, t)?))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionOptions {
    pub epochs: u32,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub fd_step: f64,
    pub seed: u64,
    /// When false only the decoder is trained.
    pub train_quantum: bool,
}

impl Default for ReconstructionOptions {
    fn default() -> Self {
        Self {
            epochs: 10,
            batch_size: 16,
            learning_rate: 0.01,
            fd_step: FD_STEP,
            seed: 0,
            train_quantum: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionRow {
    pub epoch: u32,
    pub loss: f64,
    pub margin: f64,
    pub mse: f64,
    pub accuracy: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReconstructionHistory {
    pub rows: Vec<ReconstructionRow>,
}

impl ReconstructionHistory {
    pub const HEADER: &'static str = "epoch,loss,margin,mse,accuracy";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::HEADER);
        s.push('\n');
        for r in &self.rows {
            writeln!(
                s,
                "{},{:.10},{:.10},{:.10},{:.6}",
                r.epoch, r.loss, r.margin, r.mse, r.accuracy
            )
            .expect("writing to a String");
        }
        s
    }
}

/// Margin loss, reconstruction MSE of the labelled capsule, and accuracy.
pub fn evaluate_reconstruction(
    model: &ReconstructionModel,
    samples: &[ImageSample],
) -> Result<ReconstructionRow> {
    if samples.is_empty() {
        return Err(Error::Argument(
            "cannot evaluate on an empty dataset".into(),
        ));
    }
    let inputs: Vec<&PureState> = samples.iter().map(|s| &s.input).collect();
    let outputs = forward_batch(&model.network, &inputs)?;
    let (mut margin, mut mse, mut correct) = (0.0, 0.0, 0usize);
    for (s, out) in samples.iter().zip(&outputs) {
        margin += margin_loss(&out.activations, s.class);
        mse += mse_loss(&model.reconstruct(&out.digit_states[s.class])?, &s.pixels);
        correct += usize::from(predicted_class(&out.activations) == s.class);
    }
    let n = samples.len() as f64;
    let (margin, mse) = (margin / n, mse / n);
    Ok(ReconstructionRow {
        epoch: 0,
        loss: combined_loss(margin, mse),
        margin,
        mse,
        accuracy: correct as f64 / n,
    })
}

/// Joint training: finite differences for the circuit, backpropagation for
/// the decoder. During training the capsule of the true class is decoded.
#[derive(Clone, Debug)]
pub struct ReconstructionTrainer {
    pub model: ReconstructionModel,
    pub network_opt: Adam,
    pub decoder_opt: Adam,
    pub epoch: u32,
    pub options: ReconstructionOptions,
}

impl ReconstructionTrainer {
    pub fn new(model: ReconstructionModel, options: ReconstructionOptions) -> Self {
        let network_opt = Adam::new(model.network.parameter_count(), options.learning_rate);
        let decoder_opt = Adam::new(model.decoder.params().len(), options.learning_rate);
        Self {
            model,
            network_opt,
            decoder_opt,
            epoch: 0,
            options,
        }
    }

    fn step(&mut self, batch: &[&ImageSample]) -> Result<f64> {
        let inputs: Vec<&PureState> = batch.iter().map(|s| &s.input).collect();
        let decoder = &self.model.decoder;
        let sample_loss = |s: usize, out: &ForwardOutput| -> f64 {
            let x = batch[s];
            let mse = decoder
                .forward(&tomography_vector(&out.digit_states[x.class]))
                .map_or(f64::NAN, |img| mse_loss(&img, &x.pixels));
            combined_loss(margin_loss(&out.activations, x.class), mse)
        };
        let (loss, outputs, network_grad) = if self.options.train_quantum {
            let est = grad_finite_diff(
                &self.model.network,
                &inputs,
                self.options.fd_step,
                &sample_loss,
            )?;
            (est.loss, est.outputs, Some(est.grad))
        } else {
            let outputs = forward_batch(&self.model.network, &inputs)?;
            let loss = outputs
                .iter()
                .enumerate()
                .map(|(s, o)| sample_loss(s, o))
                .sum::<f64>()
                / batch.len() as f64;
            (loss, outputs, None)
        };
        let mut grad = vec![0.0; decoder.params().len()];
        let scale = MSE_WEIGHT * 2.0 / (PIXELS as f64 * batch.len() as f64);
        for (x, out) in batch.iter().zip(&outputs) {
            let trace = decoder.trace(&tomography_vector(&out.digit_states[x.class]))?;
            let g: Vec<f64> = trace
                .output()
                .iter()
                .zip(&x.pixels)
                .map(|(y, t)| scale * (y - t))
                .collect();
            decoder.backward(&trace, &g, &mut grad);
        }
        self.decoder_opt
            .step(self.model.decoder.params_mut(), &grad)?;
        if let Some(g) = network_grad {
            let mut params = self.model.network.params().to_vec();
            self.network_opt.step(&mut params, &g)?;
            self.model.network.set_params(params)?;
        }
        Ok(loss)
    }

    pub fn train_epoch(&mut self, samples: &[ImageSample]) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::Argument("cannot train on an empty dataset".into()));
        }
        if self.options.batch_size == 0 {
            return Err(Error::Argument("batch size must be positive".into()));
        }
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.shuffle(&mut derived_rng(self.options.seed, u64::from(self.epoch)));
        let mut total = 0.0;
        let chunks: Vec<Vec<&ImageSample>> = order
            .chunks(self.options.batch_size)
            .map(|c| c.iter().map(|&i| &samples[i]).collect())
            .collect();
        for batch in &chunks {
            total += self.step(batch)?;
        }
        self.epoch += 1;
        Ok(total / chunks.len() as f64)
    }

    pub fn fit(&mut self, samples: &[ImageSample]) -> Result<ReconstructionHistory> {
        let mut history = ReconstructionHistory::default();
        while self.epoch < self.options.epochs {
            self.train_epoch(samples)?;
            let mut row = evaluate_reconstruction(&self.model, samples)?;
            row.epoch = self.epoch;
            info!(
                "epoch {}: loss {:.5} margin {:.5} mse {:.5}",
                row.epoch, row.loss, row.margin, row.mse
            );
            if !row.loss.is_finite() {
                warn!("non-finite reconstruction loss");
                return Err(Error::Numeric(format!(
                    "reconstruction loss is {} at epoch {}",
                    row.loss, row.epoch
                )));
            }
            history.rows.push(row);
        }
        Ok(history)
    }
}
