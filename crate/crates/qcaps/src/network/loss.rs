use std::collections::BTreeMap;

use super::config::LossKind;
use crate::error::{Error, Result};

pub const MARGIN_POSITIVE: f64 = 0.9;
pub const MARGIN_NEGATIVE: f64 = 0.1;
pub const MARGIN_DOWN_WEIGHT: f64 = 0.5;
pub const MSE_WEIGHT: f64 = 0.1;
pub const LOG_CLAMP: f64 = 1e-12;

/// −Σ_c y_c log P_c with P clamped to [1e-12, 1].
pub fn cross_entropy(p: &[f64], y: &[f64]) -> f64 {
    -p.iter()
        .zip(y)
        .map(|(&pc, &yc)| yc * pc.clamp(LOG_CLAMP, 1.0).ln())
        .sum::<f64>()
}

/// Σ_c T_c max(0, m⁺ − P_c)² + λ (1 − T_c) max(0, P_c − m⁻)².
pub fn margin_loss(p: &[f64], label: usize) -> f64 {
    p.iter()
        .enumerate()
        .map(|(c, &pc)| {
            if c == label {
                (MARGIN_POSITIVE - pc).max(0.0).powi(2)
            } else {
                MARGIN_DOWN_WEIGHT * (pc - MARGIN_NEGATIVE).max(0.0).powi(2)
            }
        })
        .sum()
}

/// Mean squared error.
pub fn mse_loss(x: &[f64], target: &[f64]) -> f64 {
    assert_eq!(
        x.len(),
        target.len(),
        "mse of vectors with different lengths"
    );
    if x.is_empty() {
        return 0.0;
    }
    x.iter()
        .zip(target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / x.len() as f64
}

/// L_M + 0.1 L_MSE.
pub fn combined_loss(margin: f64, mse: f64) -> f64 {
    margin + MSE_WEIGHT * mse
}

pub fn one_hot(label: usize, classes: usize) -> Vec<f64> {
    (0..classes)
        .map(|c| if c == label { 1.0 } else { 0.0 })
        .collect()
}

/// Classification loss of one sample.
pub fn classification_loss(kind: LossKind, p: &[f64], label: usize) -> f64 {
    match kind {
        LossKind::CrossEntropy => cross_entropy(p, &one_hot(label, p.len())),
        LossKind::Margin => margin_loss(p, label),
    }
}

/// Aggregate loss and accuracy over a set of samples.
#[derive(Clone, Debug, PartialEq)]
pub struct LossReport {
    pub loss: f64,
    pub per_term: BTreeMap<String, f64>,
    pub accuracy: f64,
    /// Routing convergence metric averaged over samples.
    pub max_dq: f64,
}

impl LossReport {
    pub fn new(
        loss: f64,
        per_term: BTreeMap<String, f64>,
        accuracy: f64,
        max_dq: f64,
    ) -> Result<Self> {
        if !loss.is_finite() {
            return Err(Error::Numeric(format!("loss is {loss}")));
        }
        Ok(Self {
            loss,
            per_term,
            accuracy,
            max_dq,
        })
    }

    pub fn inaccuracy(&self) -> f64 {
        1.0 - self.accuracy
    }
}
