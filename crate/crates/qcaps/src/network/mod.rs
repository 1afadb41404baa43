//! The trainable quantum capsule network and its baseline.

mod adam;
mod checkpoint;
mod config;
mod forward;
mod grad;
mod loss;
mod model;
mod readout;
mod train;

pub use adam::Adam;
pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint, Checkpoint,
    CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
};
pub use config::{Architecture, LossKind, QCapsNetConfig, Readout};
pub use forward::{forward, forward_batch, ForwardOutput};
pub use grad::{
    batch_loss, central_difference, grad_finite_diff, grad_spsa, richardson_ratios,
    GradientEstimate, GradientMethod, FD_STEP, FLAT_GRADIENT,
};
pub use loss::{
    classification_loss, combined_loss, cross_entropy, margin_loss, mse_loss, one_hot, LossReport,
    LOG_CLAMP, MARGIN_DOWN_WEIGHT, MARGIN_NEGATIVE, MARGIN_POSITIVE, MSE_WEIGHT,
};
pub use model::QCapsNetModel;
pub use readout::{predicted_class, readout, readout_purity, readout_z};
pub use train::{
    evaluate, HistoryRow, TrainOptions, Trainer, TrainingHistory, DEFAULT_BATCH_SIZE,
    DEFAULT_LEARNING_RATE,
};
