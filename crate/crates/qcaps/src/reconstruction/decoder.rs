use rand::Rng;

use crate::error::{Error, Result};

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Dense feed-forward decoder: ReLU hidden layers, sigmoid output.
/// Parameters live in one flat vector, layer by layer as (weights row-major
/// `out × in`, then biases).
#[derive(Clone, Debug, PartialEq)]
pub struct DecoderMLP {
    sizes: Vec<usize>,
    params: Vec<f64>,
}

/// Pre- and post-activation values kept for backpropagation.
#[derive(Clone, Debug)]
pub struct DecoderTrace {
    /// `activations[0]` is the input, the last entry the output.
    pub activations: Vec<Vec<f64>>,
}

impl DecoderTrace {
    pub fn output(&self) -> &[f64] {
        self.activations.last().expect("decoder has layers")
    }
}

pub const DEFAULT_DECODER_SIZES: [usize; 4] = [256, 128, 128, 256];

impl DecoderMLP {
    pub fn zeros(sizes: &[usize]) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::Argument(format!("bad decoder shape {sizes:?}")));
        }
        let n = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        Ok(Self {
            sizes: sizes.to_vec(),
            params: vec![0.0; n],
        })
    }

    /// Uniform ±sqrt(6 / (fan_in + fan_out)) weights, zero biases.
    pub fn random<R: Rng>(sizes: &[usize], rng: &mut R) -> Result<Self> {
        let mut d = Self::zeros(sizes)?;
        let mut off = 0;
        for w in sizes.windows(2) {
            let limit = (6.0 / (w[0] + w[1]) as f64).sqrt();
            for p in &mut d.params[off..off + w[0] * w[1]] {
                *p = rng.gen_range(-limit..limit);
            }
            off += w[0] * w[1] + w[1];
        }
        Ok(d)
    }

    pub fn from_params(sizes: &[usize], params: Vec<f64>) -> Result<Self> {
        let mut d = Self::zeros(sizes)?;
        if params.len() != d.params.len() {
            return Err(Error::Argument(format!(
                "decoder needs {} parameters, got {}",
                d.params.len(),
                params.len()
            )));
        }
        d.params = params;
        Ok(d)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn input_size(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// (weights offset, bias offset) of layer `l`.
    fn offsets(&self, l: usize) -> (usize, usize) {
        let off: usize = self
            .sizes
            .windows(2)
            .take(l)
            .map(|w| w[0] * w[1] + w[1])
            .sum();
        (off, off + self.sizes[l] * self.sizes[l + 1])
    }

    pub fn trace(&self, input: &[f64]) -> Result<DecoderTrace> {
        if input.len() != self.input_size() {
            return Err(Error::Argument(format!(
                "decoder takes {} features, got {}",
                self.input_size(),
                input.len()
            )));
        }
        let layers = self.sizes.len() - 1;
        let mut activations = vec![input.to_vec()];
        for l in 0..layers {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let (w, b) = self.offsets(l);
            let x = &activations[l];
            let y: Vec<f64> = (0..n_out)
                .map(|o| {
                    let row = &self.params[w + o * n_in..w + (o + 1) * n_in];
                    let z = self.params[b + o] + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
                    if l + 1 == layers {
                        sigmoid(z)
                    } else {
                        z.max(0.0)
                    }
                })
                .collect();
            activations.push(y);
        }
        Ok(DecoderTrace { activations })
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.trace(input)?.activations.pop().unwrap())
    }

    /// Accumulate ∂L/∂params into `grad` given ∂L/∂output.
    pub fn backward(&self, trace: &DecoderTrace, grad_output: &[f64], grad: &mut [f64]) {
        assert_eq!(grad.len(), self.params.len(), "gradient buffer size");
        let layers = self.sizes.len() - 1;
        // δ = ∂L/∂z for the current layer.
        let out = trace.output();
        let mut delta: Vec<f64> = grad_output
            .iter()
            .zip(out)
            .map(|(g, y)| g * y * (1.0 - y))
            .collect();
        for l in (0..layers).rev() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let (w, b) = self.offsets(l);
            let x = &trace.activations[l];
            for o in 0..n_out {
                grad[b + o] += delta[o];
                for i in 0..n_in {
                    grad[w + o * n_in + i] += delta[o] * x[i];
                }
            }
            if l > 0 {
                delta = (0..n_in)
                    .map(|i| {
                        if x[i] <= 0.0 {
                            return 0.0;
                        }
                        (0..n_out)
                            .map(|o| self.params[w + o * n_in + i] * delta[o])
                            .sum()
                    })
                    .collect();
            }
        }
    }
}
