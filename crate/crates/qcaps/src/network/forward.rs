use super::config::{Architecture, QCapsNetConfig};
use super::model::QCapsNetModel;
use super::readout::readout;
use crate::channels::{apply_circuit_vec, CompiledChannel};
use crate::error::{Error, Result};
use crate::quantum::{reduced_from_pure, DensityMatrix, PureState};
use crate::routing::{route_column, ColumnRouting, RoutingState};

/// Output capsules and their activations for one input.
#[derive(Clone, Debug)]
pub struct ForwardOutput {
    pub digit_states: Vec<DensityMatrix>,
    pub activations: Vec<f64>,
    /// `None` for the baseline circuit.
    pub routing: Option<RoutingState>,
}

impl ForwardOutput {
    pub fn max_delta_q(&self) -> f64 {
        self.routing.as_ref().map_or(0.0, RoutingState::max_delta_q)
    }
}

/// Every intermediate of one forward pass, kept so that a single edge can be
/// re-evaluated without redoing the rest.
#[derive(Clone, Debug)]
pub(crate) struct Trace {
    /// Primary capsules, or the readout groups of the baseline.
    pub capsules: Vec<DensityMatrix>,
    /// ρ_{j|i} at index i * J + j.
    pub predictions: Vec<DensityMatrix>,
    pub columns: Vec<ColumnRouting>,
    pub activations: Vec<f64>,
}

impl Trace {
    pub fn digit_states(&self) -> Vec<DensityMatrix> {
        if self.columns.is_empty() {
            self.capsules.clone()
        } else {
            self.columns.iter().map(|c| c.chi.clone()).collect()
        }
    }

    pub fn into_output(self, config: &QCapsNetConfig) -> ForwardOutput {
        let routing = (!self.columns.is_empty())
            .then(|| RoutingState::from_columns(&self.columns, config.routing_iters));
        ForwardOutput {
            digit_states: self.digit_states(),
            activations: self.activations,
            routing,
        }
    }
}

/// Edge channels compiled once for a fixed parameter vector.
pub(crate) struct Evaluator<'a> {
    pub config: &'a QCapsNetConfig,
    pub pre_params: &'a [f64],
    pub edges: Vec<CompiledChannel>,
}

impl<'a> Evaluator<'a> {
    pub fn new(model: &'a QCapsNetModel, params: &'a [f64]) -> Self {
        let config = model.config();
        Self {
            config,
            pre_params: &params[..config.preprocess_param_count()],
            edges: model.compile_edges(params),
        }
    }

    pub fn capsules(&self, input: &PureState) -> Result<Vec<DensityMatrix>> {
        let c = self.config;
        if input.n_qubits() != c.total_qubits {
            return Err(Error::Argument(format!(
                "network takes {} qubits, input has {}",
                c.total_qubits,
                input.n_qubits()
            )));
        }
        let mut amps = input.amplitudes().to_vec();
        apply_circuit_vec(&mut amps, c.total_qubits, self.pre_params);
        match c.architecture {
            Architecture::Capsule => (0..c.primary_capsules)
                .map(|i| reduced_from_pure(&amps, &c.primary_qubits(i)))
                .collect(),
            Architecture::Baseline => (0..c.digit_capsules)
                .map(|g| reduced_from_pure(&amps, &c.readout_group(g)))
                .collect(),
        }
    }

    pub fn route(&self, predictions: &[DensityMatrix], j: usize) -> Result<ColumnRouting> {
        let jn = self.config.digit_capsules;
        let column: Vec<&DensityMatrix> = (0..self.config.primary_capsules)
            .map(|i| &predictions[i * jn + j])
            .collect();
        route_column(&column, self.config.k, self.config.routing_iters)
    }

    pub fn trace(&self, input: &PureState) -> Result<Trace> {
        let c = self.config;
        let capsules = self.capsules(input)?;
        if c.architecture == Architecture::Baseline {
            let activations = capsules.iter().map(|s| readout(c.readout, s)).collect();
            return Ok(Trace {
                capsules,
                predictions: Vec::new(),
                columns: Vec::new(),
                activations,
            });
        }
        let jn = c.digit_capsules;
        let predictions = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, ch)| ch.apply(&capsules[e / jn]))
            .collect::<Result<Vec<_>>>()?;
        let columns = (0..jn)
            .map(|j| self.route(&predictions, j))
            .collect::<Result<Vec<_>>>()?;
        let activations = columns
            .iter()
            .map(|col| readout(c.readout, &col.chi))
            .collect();
        Ok(Trace {
            capsules,
            predictions,
            columns,
            activations,
        })
    }

    /// Re-evaluate `base` with edge `e` replaced by `edge`. Only column
    /// `e % J` is routed again.
    pub fn retrace_edge(&self, base: &Trace, e: usize, edge: &CompiledChannel) -> Result<Trace> {
        let jn = self.config.digit_capsules;
        let (i, j) = (e / jn, e % jn);
        let mut predictions = base.predictions.clone();
        predictions[e] = edge.apply(&base.capsules[i])?;
        let col = self.route(&predictions, j)?;
        let mut activations = base.activations.clone();
        activations[j] = readout(self.config.readout, &col.chi);
        let mut columns = base.columns.clone();
        columns[j] = col;
        Ok(Trace {
            capsules: base.capsules.clone(),
            predictions,
            columns,
            activations,
        })
    }
}

/// Run the network on one input state.
pub fn forward(model: &QCapsNetModel, input: &PureState) -> Result<ForwardOutput> {
    let ev = Evaluator::new(model, model.params());
    Ok(ev.trace(input)?.into_output(model.config()))
}

/// Run the network on many inputs, compiling the edges once.
pub fn forward_batch(model: &QCapsNetModel, inputs: &[&PureState]) -> Result<Vec<ForwardOutput>> {
    let ev = Evaluator::new(model, model.params());
    inputs
        .iter()
        .map(|s| Ok(ev.trace(s)?.into_output(model.config())))
        .collect()
}
