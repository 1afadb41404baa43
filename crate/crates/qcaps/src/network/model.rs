use super::config::{Architecture, QCapsNetConfig};
use crate::channels::{ChannelSpec, CompiledChannel};
use crate::error::{Error, Result};
use crate::random::{random_angles, rng_from_seed};

/// Network parameters: preprocessing angles first, then each edge channel in
/// row-major (input capsule, output capsule) order.
#[derive(Clone, Debug, PartialEq)]
pub struct QCapsNetModel {
    config: QCapsNetConfig,
    params: Vec<f64>,
}

impl QCapsNetModel {
    pub fn new(config: QCapsNetConfig, params: Vec<f64>) -> Result<Self> {
        config.validate()?;
        if params.len() != config.parameter_count() {
            return Err(Error::Argument(format!(
                "model needs {} parameters, got {}",
                config.parameter_count(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Numeric("non-finite model parameter".into()));
        }
        Ok(Self { config, params })
    }

    /// Angles drawn uniformly from [0, 2π) with the config seed.
    pub fn init(config: QCapsNetConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = rng_from_seed(config.seed);
        let params = random_angles(config.parameter_count(), &mut rng);
        Self::new(config, params)
    }

    pub fn zeros(config: QCapsNetConfig) -> Result<Self> {
        let n = config.parameter_count();
        Self::new(config, vec![0.0; n])
    }

    pub fn config(&self) -> &QCapsNetConfig {
        &self.config
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn parameter_count(&self) -> usize {
        self.params.len()
    }

    pub fn set_params(&mut self, params: Vec<f64>) -> Result<()> {
        *self = Self::new(self.config.clone(), params)?;
        Ok(())
    }

    pub(crate) fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn preprocess_params(&self) -> &[f64] {
        &self.params[..self.config.preprocess_param_count()]
    }

    /// Edge `e = i * J + j`.
    pub fn edge_range(&self, e: usize) -> std::ops::Range<usize> {
        let start = self.config.preprocess_param_count() + e * self.config.edge_param_count();
        start..start + self.config.edge_param_count()
    }

    /// Which edge a parameter belongs to; `None` for preprocessing angles.
    pub fn edge_of(&self, p: usize) -> Option<usize> {
        let pre = self.config.preprocess_param_count();
        (p >= pre).then(|| (p - pre) / self.config.edge_param_count())
    }

    pub fn edge_spec(&self, i: usize, j: usize) -> ChannelSpec {
        self.edge_spec_with(i * self.config.digit_capsules + j, &self.params)
    }

    pub(crate) fn edge_spec_with(&self, e: usize, params: &[f64]) -> ChannelSpec {
        let c = &self.config;
        ChannelSpec::new(
            c.channel_kind,
            c.qubits_per_primary,
            c.qubits_per_digit,
            c.channel_depth,
            params[self.edge_range(e)].to_vec(),
        )
        .expect("edge shape validated with the config")
    }

    /// All M×J edge channels, row-major.
    pub fn edge_channels(&self) -> Vec<ChannelSpec> {
        (0..self.config.edge_count())
            .map(|e| self.edge_spec_with(e, &self.params))
            .collect()
    }

    pub(crate) fn compile_edges(&self, params: &[f64]) -> Vec<CompiledChannel> {
        match self.config.architecture {
            Architecture::Capsule => (0..self.config.edge_count())
                .map(|e| self.edge_spec_with(e, params).compile())
                .collect(),
            Architecture::Baseline => Vec::new(),
        }
    }
}
