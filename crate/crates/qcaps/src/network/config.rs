use std::fmt;
use std::str::FromStr;

use crate::channels::{params_per_layer, ChannelKind};
use crate::error::{Error, Result};
use crate::quantum::MAX_QUBITS;

/// How a digit capsule is turned into an activation probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Readout {
    /// (1 + mean ⟨Z⟩)/2 over the capsule's qubits.
    ZMean,
    /// Tr(χ²).
    Purity,
}

/// Capsule network or the plain circuit it is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Architecture {
    Capsule,
    /// One circuit on all qubits, read out on fixed qubit groups.
    Baseline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LossKind {
    CrossEntropy,
    Margin,
}

macro_rules! named_enum {
    ($ty:ty, $what:literal, $($variant:path => $name:literal),+ $(,)?) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().replace('-', "_").as_str() {
                    $($name => Ok($variant),)+
                    other => Err(Error::Argument(format!(concat!("unknown ", $what, " '{}'"), other))),
                }
            }
        }
    };
}

named_enum!(Readout, "readout", Readout::ZMean => "z_mean", Readout::Purity => "purity");
named_enum!(Architecture, "architecture", Architecture::Capsule => "capsule", Architecture::Baseline => "baseline");
named_enum!(LossKind, "loss", LossKind::CrossEntropy => "cross_entropy", LossKind::Margin => "margin");

/// Shape of a network. Primary capsule `i` holds qubits
/// `i*qubits_per_primary .. (i+1)*qubits_per_primary`.
#[derive(Clone, Debug, PartialEq)]
pub struct QCapsNetConfig {
    pub architecture: Architecture,
    pub total_qubits: usize,
    pub preprocess_depth: usize,
    pub primary_capsules: usize,
    pub qubits_per_primary: usize,
    pub digit_capsules: usize,
    pub qubits_per_digit: usize,
    pub channel_kind: ChannelKind,
    pub channel_depth: usize,
    pub k: u32,
    pub routing_iters: usize,
    pub readout: Readout,
    pub seed: u64,
}

impl Default for QCapsNetConfig {
    /// 9 qubits (8 data + ancilla), depth-5 preprocessing, three 3-qubit primary
    /// capsules, two 3-qubit digit capsules, k = 3.
    fn default() -> Self {
        Self {
            architecture: Architecture::Capsule,
            total_qubits: 9,
            preprocess_depth: 5,
            primary_capsules: 3,
            qubits_per_primary: 3,
            digit_capsules: 2,
            qubits_per_digit: 3,
            channel_kind: ChannelKind::Dqfnn,
            channel_depth: 1,
            k: 3,
            routing_iters: 3,
            readout: Readout::ZMean,
            seed: 0,
        }
    }
}

impl QCapsNetConfig {
    /// Classification preset for a channel family. Post-DQFNN needs an even
    /// primary capsule, so it uses two 4-qubit primaries and 2-qubit digits.
    pub fn mnist(kind: ChannelKind, channel_depth: usize) -> Self {
        let base = Self {
            channel_kind: kind,
            channel_depth,
            ..Self::default()
        };
        match kind {
            ChannelKind::PostDqfnn => Self {
                primary_capsules: 2,
                qubits_per_primary: 4,
                qubits_per_digit: 2,
                ..base
            },
            _ => base,
        }
    }

    /// Eight-spin phase classifier: two 4-qubit primaries, 2-qubit digits.
    pub fn spt() -> Self {
        Self {
            total_qubits: 8,
            preprocess_depth: 2,
            primary_capsules: 2,
            qubits_per_primary: 4,
            qubits_per_digit: 2,
            channel_kind: ChannelKind::Dqfnn,
            channel_depth: 1,
            ..Self::default()
        }
    }

    /// Reconstruction stack: two 4-qubit primaries feeding 4-qubit digit
    /// capsules through PQC channels, purity activations.
    pub fn reconstruction() -> Self {
        Self {
            primary_capsules: 2,
            qubits_per_primary: 4,
            qubits_per_digit: 4,
            channel_kind: ChannelKind::Pqc,
            readout: Readout::Purity,
            ..Self::default()
        }
    }

    /// Plain circuit with the parameter count closest to `target`, read out on
    /// `qubits_per_digit`-qubit groups.
    pub fn baseline_matching(total_qubits: usize, qubits_per_digit: usize, target: usize) -> Self {
        let per = params_per_layer(total_qubits);
        let depth = ((target as f64 / per as f64).round() as usize).max(1);
        Self {
            architecture: Architecture::Baseline,
            total_qubits,
            preprocess_depth: depth,
            primary_capsules: 0,
            qubits_per_primary: 0,
            qubits_per_digit,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Argument(m));
        if self.total_qubits == 0 || self.total_qubits > MAX_QUBITS {
            return Err(Error::Size {
                qubits: self.total_qubits,
                max: MAX_QUBITS,
            });
        }
        if self.digit_capsules != 2 {
            return bad(format!(
                "two output capsules are supported, got {}",
                self.digit_capsules
            ));
        }
        if self.qubits_per_digit == 0 {
            return bad("digit capsules need at least one qubit".into());
        }
        match self.architecture {
            Architecture::Baseline => {
                if self.digit_capsules * self.qubits_per_digit > self.total_qubits {
                    return bad("readout groups exceed the register".into());
                }
            }
            Architecture::Capsule => {
                if self.primary_capsules == 0 || self.qubits_per_primary == 0 {
                    return bad("capsule network needs primary capsules".into());
                }
                if self.primary_capsules * self.qubits_per_primary > self.total_qubits {
                    return bad(format!(
                        "{} capsules of {} qubits exceed {} qubits",
                        self.primary_capsules, self.qubits_per_primary, self.total_qubits
                    ));
                }
                if self.k == 0 || self.routing_iters == 0 {
                    return bad("k and routing_iters must be at least 1".into());
                }
                let (i, o) = (self.qubits_per_primary, self.qubits_per_digit);
                match self.channel_kind {
                    ChannelKind::Pqc if i != o => {
                        return bad("PQC channels need equal capsule sizes".into())
                    }
                    ChannelKind::PostDqfnn if i % 2 != 0 || o * 2 != i => {
                        return bad("post-DQFNN channels halve an even capsule".into())
                    }
                    ChannelKind::Dqfnn if i + o > MAX_QUBITS => {
                        return Err(Error::Size {
                            qubits: i + o,
                            max: MAX_QUBITS,
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn preprocess_param_count(&self) -> usize {
        self.preprocess_depth * params_per_layer(self.total_qubits)
    }

    pub fn edge_param_count(&self) -> usize {
        self.channel_kind.param_count(
            self.qubits_per_primary,
            self.qubits_per_digit,
            self.channel_depth,
        )
    }

    pub fn edge_count(&self) -> usize {
        match self.architecture {
            Architecture::Capsule => self.primary_capsules * self.digit_capsules,
            Architecture::Baseline => 0,
        }
    }

    pub fn parameter_count(&self) -> usize {
        self.preprocess_param_count() + self.edge_count() * self.edge_param_count()
    }

    /// Qubits read out for output capsule `c` in the baseline.
    pub fn readout_group(&self, c: usize) -> Vec<usize> {
        (c * self.qubits_per_digit..(c + 1) * self.qubits_per_digit).collect()
    }

    pub fn primary_qubits(&self, i: usize) -> Vec<usize> {
        (i * self.qubits_per_primary..(i + 1) * self.qubits_per_primary).collect()
    }
}
