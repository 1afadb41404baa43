use num_complex::Complex64;

use super::layers::{self, params_per_layer};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::{partial_trace, DensityMatrix, MAX_QUBITS};

/// Which sub-network family a channel belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    /// Unitary circuit on the capsule itself.
    Pqc,
    /// Embed into fresh output qubits, evolve, trace out the input block.
    Dqfnn,
    /// Evolve, measure the first half, apply a Pauli-X correction to the rest.
    PostDqfnn,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Pqc => "pqc",
            ChannelKind::Dqfnn => "dqfnn",
            ChannelKind::PostDqfnn => "post-dqfnn",
        }
    }

    pub fn tag(self) -> u8 {
        match self {
            ChannelKind::Pqc => 0,
            ChannelKind::Dqfnn => 1,
            ChannelKind::PostDqfnn => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(ChannelKind::Pqc),
            1 => Some(ChannelKind::Dqfnn),
            2 => Some(ChannelKind::PostDqfnn),
            _ => None,
        }
    }

    /// Qubits the circuit acts on for the given block sizes.
    pub fn block_qubits(self, in_qubits: usize, out_qubits: usize) -> usize {
        match self {
            ChannelKind::Dqfnn => in_qubits + out_qubits,
            ChannelKind::Pqc | ChannelKind::PostDqfnn => in_qubits,
        }
    }

    pub fn param_count(self, in_qubits: usize, out_qubits: usize, depth: usize) -> usize {
        depth * params_per_layer(self.block_qubits(in_qubits, out_qubits))
    }
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "pqc" => Ok(ChannelKind::Pqc),
            "dqfnn" => Ok(ChannelKind::Dqfnn),
            "post-dqfnn" | "postdqfnn" => Ok(ChannelKind::PostDqfnn),
            other => Err(Error::Argument(format!("unknown channel kind '{other}'"))),
        }
    }
}

/// A fully parameterized capsule-to-capsule channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    in_qubits: usize,
    out_qubits: usize,
    depth: usize,
    params: Vec<f64>,
}

impl ChannelSpec {
    pub fn new(
        kind: ChannelKind,
        in_qubits: usize,
        out_qubits: usize,
        depth: usize,
        params: Vec<f64>,
    ) -> Result<Self> {
        if in_qubits == 0 || out_qubits == 0 {
            return Err(Error::Argument(
                "channel blocks need at least one qubit".into(),
            ));
        }
        match kind {
            ChannelKind::Pqc if in_qubits != out_qubits => {
                return Err(Error::Argument(format!(
                    "PQC maps {in_qubits} qubits to {in_qubits}, not {out_qubits}"
                )))
            }
            ChannelKind::PostDqfnn if !in_qubits.is_multiple_of(2) => {
                return Err(Error::Argument(format!(
                    "post-DQFNN needs an even input block, got {in_qubits}"
                )))
            }
            ChannelKind::PostDqfnn if out_qubits * 2 != in_qubits => {
                return Err(Error::Argument(format!(
                    "post-DQFNN on {in_qubits} qubits outputs {}, not {out_qubits}",
                    in_qubits / 2
                )))
            }
            _ => {}
        }
        let block = kind.block_qubits(in_qubits, out_qubits);
        if block > MAX_QUBITS {
            return Err(Error::Size {
                qubits: block,
                max: MAX_QUBITS,
            });
        }
        let expected = kind.param_count(in_qubits, out_qubits, depth);
        if params.len() != expected {
            return Err(Error::Argument(format!(
                "{} channel {in_qubits}->{out_qubits} depth {depth} needs {expected} parameters, got {}",
                kind.name(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Argument("non-finite channel parameter".into()));
        }
        Ok(Self {
            kind,
            in_qubits,
            out_qubits,
            depth,
            params,
        })
    }

    /// Same shape, zero angles.
    pub fn zeros(
        kind: ChannelKind,
        in_qubits: usize,
        out_qubits: usize,
        depth: usize,
    ) -> Result<Self> {
        let n = kind.param_count(in_qubits, out_qubits, depth);
        Self::new(kind, in_qubits, out_qubits, depth, vec![0.0; n])
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn in_qubits(&self) -> usize {
        self.in_qubits
    }

    pub fn out_qubits(&self) -> usize {
        self.out_qubits
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn block_qubits(&self) -> usize {
        self.kind.block_qubits(self.in_qubits, self.out_qubits)
    }

    pub fn with_params(&self, params: Vec<f64>) -> Result<Self> {
        Self::new(
            self.kind,
            self.in_qubits,
            self.out_qubits,
            self.depth,
            params,
        )
    }

    /// Unitary on the whole block.
    pub fn unitary(&self) -> ComplexMatrix {
        layers::build_circuit_unitary(self.block_qubits(), &self.params)
            .expect("parameters validated at construction")
    }

    fn check_input(&self, chi: &DensityMatrix, kind: ChannelKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Argument(format!(
                "expected a {} channel, got {}",
                kind.name(),
                self.kind.name()
            )));
        }
        if chi.n_qubits() != self.in_qubits {
            return Err(Error::Argument(format!(
                "channel takes {} qubits, state has {}",
                self.in_qubits,
                chi.n_qubits()
            )));
        }
        Ok(())
    }

    /// Kraus operators of the channel, computed from only the unitary columns it needs.
    pub fn compile(&self) -> CompiledChannel {
        let n = self.block_qubits();
        let in_dim = 1usize << self.in_qubits;
        let out_dim = 1usize << self.out_qubits;
        let kraus = match self.kind {
            ChannelKind::Pqc => vec![self.unitary()],
            ChannelKind::Dqfnn => {
                let cols: Vec<usize> = (0..in_dim).map(|x| x * out_dim).collect();
                let b = layers::circuit_columns(n, &self.params, &cols);
                (0..in_dim)
                    .map(|a| {
                        ComplexMatrix::from_fn(out_dim, in_dim, |o, x| b[(a * out_dim + o, x)])
                    })
                    .collect()
            }
            ChannelKind::PostDqfnn => {
                let u = self.unitary();
                (0..out_dim)
                    .map(|m| {
                        ComplexMatrix::from_fn(out_dim, in_dim, |o, x| {
                            u[(m * out_dim + (o ^ m), x)]
                        })
                    })
                    .collect()
            }
        };
        CompiledChannel {
            in_dim,
            out_dim,
            kraus,
        }
    }
}

/// U χ U†.
pub fn apply_pqc(spec: &ChannelSpec, chi: &DensityMatrix) -> Result<DensityMatrix> {
    spec.check_input(chi, ChannelKind::Pqc)?;
    let mut m = chi.matrix().clone();
    layers::conjugate_by_circuit(&mut m, spec.in_qubits, &spec.params);
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Tr_in[U (χ ⊗ |0⟩⟨0|) U†].
pub fn apply_dqfnn(spec: &ChannelSpec, chi: &DensityMatrix) -> Result<DensityMatrix> {
    spec.check_input(chi, ChannelKind::Dqfnn)?;
    dqfnn_with_unitary(&spec.unitary(), spec.in_qubits, spec.out_qubits, chi)
}

/// DQFNN step with an arbitrary block unitary on in_qubits + out_qubits.
pub fn dqfnn_with_unitary(
    u: &ComplexMatrix,
    in_qubits: usize,
    out_qubits: usize,
    chi: &DensityMatrix,
) -> Result<DensityMatrix> {
    let n = in_qubits + out_qubits;
    if !u.is_square() || u.rows() != 1 << n {
        return Err(Error::Argument(format!(
            "block unitary must be {0}x{0}",
            1usize << n
        )));
    }
    if chi.n_qubits() != in_qubits {
        return Err(Error::Argument(
            "input state does not match the input block".into(),
        ));
    }
    let in_dim = 1usize << in_qubits;
    let out_dim = 1usize << out_qubits;
    // Only the columns with the output block in |0…0⟩ contribute.
    let b = ComplexMatrix::from_fn(1 << n, in_dim, |r, x| u[(r, x * out_dim)]);
    let evolved = b.matmul(chi.matrix()).matmul(&b.adjoint());
    let full = DensityMatrix::from_matrix_unchecked(evolved);
    let keep: Vec<usize> = (in_qubits..n).collect();
    partial_trace(&full, &keep)
}

/// Outcome-averaged measure-and-correct channel.
pub fn apply_post_dqfnn(spec: &ChannelSpec, chi: &DensityMatrix) -> Result<DensityMatrix> {
    spec.check_input(chi, ChannelKind::PostDqfnn)?;
    let mut evolved = chi.matrix().clone();
    layers::conjugate_by_circuit(&mut evolved, spec.in_qubits, &spec.params);
    Ok(measure_and_correct(&evolved, spec.out_qubits))
}

/// Post-DQFNN step with an arbitrary unitary on the input block.
pub fn post_dqfnn_with_unitary(u: &ComplexMatrix, chi: &DensityMatrix) -> Result<DensityMatrix> {
    let n = chi.n_qubits();
    if !n.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "post-DQFNN needs an even input block, got {n}"
        )));
    }
    if !u.is_square() || u.rows() != chi.dim() {
        return Err(Error::Argument(
            "unitary does not match the input block".into(),
        ));
    }
    let evolved = u.matmul(chi.matrix()).matmul(&u.adjoint());
    Ok(measure_and_correct(&evolved, n / 2))
}

// ρ_out[o][o'] = Σ_m ρ[(m, o⊕m), (m, o'⊕m)]
fn measure_and_correct(rho: &ComplexMatrix, half: usize) -> DensityMatrix {
    let h = 1usize << half;
    let out = ComplexMatrix::from_fn(h, h, |o, p| {
        (0..h).fold(Complex64::new(0.0, 0.0), |acc, m| {
            acc + rho[(m * h + (o ^ m), m * h + (p ^ m))]
        })
    });
    DensityMatrix::from_matrix_unchecked(out)
}

/// Dispatch on the channel kind.
pub fn apply_channel(spec: &ChannelSpec, chi: &DensityMatrix) -> Result<DensityMatrix> {
    match spec.kind {
        ChannelKind::Pqc => apply_pqc(spec, chi),
        ChannelKind::Dqfnn => apply_dqfnn(spec, chi),
        ChannelKind::PostDqfnn => apply_post_dqfnn(spec, chi),
    }
}

/// A channel in Kraus form, ρ ↦ Σ_a K_a ρ K_a†.
#[derive(Clone, Debug)]
pub struct CompiledChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl CompiledChannel {
    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// max |Σ K†K − I|.
    pub fn completeness_error(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            sum = &sum + &k.adjoint().matmul(k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.in_dim))
    }

    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(rho.rows(), self.in_dim, "state dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            let t = k.matmul(rho);
            out = &out + &t.matmul(&k.adjoint());
        }
        out
    }

    pub fn apply(&self, chi: &DensityMatrix) -> Result<DensityMatrix> {
        if chi.dim() != self.in_dim {
            return Err(Error::Argument(format!(
                "channel takes dimension {}, state has {}",
                self.in_dim,
                chi.dim()
            )));
        }
        Ok(DensityMatrix::from_matrix_unchecked(
            self.apply_matrix(chi.matrix()),
        ))
    }
}
