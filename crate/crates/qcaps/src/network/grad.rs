use rand::Rng;
use rayon::prelude::*;

use super::forward::{Evaluator, ForwardOutput, Trace};
use super::model::QCapsNetModel;
use crate::error::{Error, Result};
use crate::quantum::PureState;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-3;

/// How training estimates the gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GradientMethod {
    /// Central differences on every parameter.
    FiniteDifference { h: f64 },
    /// Simultaneous perturbation with Rademacher directions.
    Spsa { c: f64 },
}

impl Default for GradientMethod {
    fn default() -> Self {
        GradientMethod::FiniteDifference { h: FD_STEP }
    }
}

/// (L(θ + h e_p) − L(θ − h e_p)) / 2h for every p.
pub fn central_difference<F>(params: &[f64], h: f64, f: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    (0..params.len())
        .into_par_iter()
        .map(|p| {
            let mut x = params.to_vec();
            x[p] = params[p] + h;
            let plus = f(&x)?;
            x[p] = params[p] - h;
            let minus = f(&x)?;
            finite_slope(p, plus, minus, h)
        })
        .collect()
}

fn finite_slope(p: usize, plus: f64, minus: f64, h: f64) -> Result<f64> {
    let g = (plus - minus) / (2.0 * h);
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::Numeric(format!(
            "gradient of parameter {p} is not finite (L+ = {plus}, L- = {minus})"
        )))
    }
}

/// Loss and per-sample outputs at the current parameters, plus a gradient.
#[derive(Clone, Debug)]
pub struct GradientEstimate {
    pub loss: f64,
    pub outputs: Vec<ForwardOutput>,
    pub grad: Vec<f64>,
}

fn mean_loss<L>(
    outputs: impl Iterator<Item = Result<(usize, ForwardOutput)>>,
    loss: &L,
    n: usize,
) -> Result<f64>
where
    L: Fn(usize, &ForwardOutput) -> f64,
{
    let mut total = 0.0;
    for item in outputs {
        let (s, out) = item?;
        total += loss(s, &out);
    }
    Ok(total / n as f64)
}

/// Mean of `loss(sample, output)` over the batch.
pub fn batch_loss<L>(
    model: &QCapsNetModel,
    params: &[f64],
    inputs: &[&PureState],
    loss: &L,
) -> Result<f64>
where
    L: Fn(usize, &ForwardOutput) -> f64,
{
    if inputs.is_empty() {
        return Err(Error::Argument("loss over an empty batch".into()));
    }
    let ev = Evaluator::new(model, params);
    let cfg = model.config();
    mean_loss(
        inputs
            .iter()
            .enumerate()
            .map(|(s, x)| Ok((s, ev.trace(x)?.into_output(cfg)))),
        loss,
        inputs.len(),
    )
}

/// Central-difference gradient of the mean batch loss.
///
/// Probes of an edge parameter recompile only that edge and re-route only its
/// output column; the other intermediates come from the unperturbed pass.
pub fn grad_finite_diff<L>(
    model: &QCapsNetModel,
    inputs: &[&PureState],
    h: f64,
    loss: &L,
) -> Result<GradientEstimate>
where
    L: Fn(usize, &ForwardOutput) -> f64 + Sync,
{
    if inputs.is_empty() {
        return Err(Error::Argument("gradient over an empty batch".into()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Argument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let cfg = model.config();
    let theta = model.params();
    let ev = Evaluator::new(model, theta);
    let traces: Vec<Trace> = inputs.iter().map(|x| ev.trace(x)).collect::<Result<_>>()?;
    let outputs: Vec<ForwardOutput> = traces.iter().map(|t| t.clone().into_output(cfg)).collect();
    let base = outputs
        .iter()
        .enumerate()
        .map(|(s, o)| loss(s, o))
        .sum::<f64>()
        / inputs.len() as f64;
    if !base.is_finite() {
        return Err(Error::Numeric(format!("batch loss is {base}")));
    }

    let probe = |p: usize, value: f64| -> Result<f64> {
        let mut x = theta.to_vec();
        x[p] = value;
        match model.edge_of(p) {
            Some(e) => {
                let edge = model.edge_spec_with(e, &x).compile();
                mean_loss(
                    traces
                        .iter()
                        .enumerate()
                        .map(|(s, t)| Ok((s, ev.retrace_edge(t, e, &edge)?.into_output(cfg)))),
                    loss,
                    inputs.len(),
                )
            }
            None => batch_loss(model, &x, inputs, loss),
        }
    };
    let grad = (0..theta.len())
        .into_par_iter()
        .map(|p| finite_slope(p, probe(p, theta[p] + h)?, probe(p, theta[p] - h)?, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradientEstimate {
        loss: base,
        outputs,
        grad,
    })
}

/// SPSA estimate: g_p = (L(θ + cΔ) − L(θ − cΔ)) / (2c Δ_p), Δ_p = ±1.
pub fn grad_spsa<L, R>(
    model: &QCapsNetModel,
    inputs: &[&PureState],
    c: f64,
    rng: &mut R,
    loss: &L,
) -> Result<GradientEstimate>
where
    L: Fn(usize, &ForwardOutput) -> f64,
    R: Rng,
{
    if inputs.is_empty() {
        return Err(Error::Argument("gradient over an empty batch".into()));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Argument(format!(
            "SPSA step must be positive, got {c}"
        )));
    }
    let theta = model.params();
    let outputs = super::forward::forward_batch(model, inputs)?;
    let base = outputs
        .iter()
        .enumerate()
        .map(|(s, o)| loss(s, o))
        .sum::<f64>()
        / inputs.len() as f64;
    let delta: Vec<f64> = (0..theta.len())
        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let shifted = |sign: f64| -> Vec<f64> {
        theta
            .iter()
            .zip(&delta)
            .map(|(t, d)| t + sign * c * d)
            .collect()
    };
    let plus = batch_loss(model, &shifted(1.0), inputs, loss)?;
    let minus = batch_loss(model, &shifted(-1.0), inputs, loss)?;
    let grad = delta
        .iter()
        .enumerate()
        .map(|(p, d)| finite_slope(p, plus, minus, c).map(|g| g / d))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradientEstimate {
        loss: base,
        outputs,
        grad,
    })
}

/// Gradients below this at every step are treated as identically zero.
pub const FLAT_GRADIENT: f64 = 1e-12;

/// Step-halving ratios (D(h) − D(h/2)) / (D(h/2) − D(h/4)) per parameter, where
/// D is the central difference. A truncation-dominated estimate gives ≈ 4.
/// `None` marks a parameter whose gradient is zero at all three steps (a
/// gauge angle the loss cannot see), for which the ratio is undefined.
pub fn richardson_ratios<L>(
    model: &QCapsNetModel,
    inputs: &[&PureState],
    h: f64,
    loss: &L,
) -> Result<Vec<Option<f64>>>
where
    L: Fn(usize, &ForwardOutput) -> f64 + Sync,
{
    let d1 = grad_finite_diff(model, inputs, h, loss)?.grad;
    let d2 = grad_finite_diff(model, inputs, h / 2.0, loss)?.grad;
    let d4 = grad_finite_diff(model, inputs, h / 4.0, loss)?.grad;
    Ok((0..d1.len())
        .map(|p| {
            if [d1[p], d2[p], d4[p]]
                .iter()
                .all(|d| d.abs() < FLAT_GRADIENT)
            {
                None
            } else {
                Some((d1[p] - d2[p]) / (d2[p] - d4[p]))
            }
        })
        .collect())
}
