//! `QCPT` checkpoints: network shape, parameters and optimizer state.
//!
//! Little-endian layout:
//!
//! ```text
//! "QCPT" u16 version
//! u8 architecture u8 total_qubits u16 preprocess_depth
//! u8 primary_capsules u8 qubits_per_primary u8 digit_capsules u8 qubits_per_digit
//! u8 channel_kind u16 channel_depth u32 k u16 routing_iters u8 readout u64 seed
//! u32 epoch
//! u32 n, n × f64 parameters
//! u8 has_optimizer [f64 lr β1 β2 ε, u64 t, n × f64 m, n × f64 v]
//! ```

use std::path::Path;

use super::adam::Adam;
use super::config::{Architecture, QCapsNetConfig, Readout};
use super::model::QCapsNetModel;
use crate::channels::ChannelKind;
use crate::codec::{put_f64s, Reader};
use crate::error::{parse_err, Result};

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"QCPT";
pub const CHECKPOINT_VERSION: u16 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub model: QCapsNetModel,
    pub optimizer: Option<Adam>,
    /// Epochs completed.
    pub epoch: u32,
}

fn narrow<T: TryFrom<usize>>(x: usize, what: &str) -> T {
    T::try_from(x).unwrap_or_else(|_| panic!("{what} {x} does not fit the checkpoint field"))
}

pub fn encode_checkpoint(ck: &Checkpoint) -> Vec<u8> {
    let c = ck.model.config();
    let mut out = Vec::new();
    out.extend_from_slice(CHECKPOINT_MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.push(match c.architecture {
        Architecture::Capsule => 0,
        Architecture::Baseline => 1,
    });
    out.push(narrow::<u8>(c.total_qubits, "total_qubits"));
    out.extend_from_slice(&narrow::<u16>(c.preprocess_depth, "preprocess_depth").to_le_bytes());
    out.push(narrow::<u8>(c.primary_capsules, "primary_capsules"));
    out.push(narrow::<u8>(c.qubits_per_primary, "qubits_per_primary"));
    out.push(narrow::<u8>(c.digit_capsules, "digit_capsules"));
    out.push(narrow::<u8>(c.qubits_per_digit, "qubits_per_digit"));
    out.push(c.channel_kind.tag());
    out.extend_from_slice(&narrow::<u16>(c.channel_depth, "channel_depth").to_le_bytes());
    out.extend_from_slice(&c.k.to_le_bytes());
    out.extend_from_slice(&narrow::<u16>(c.routing_iters, "routing_iters").to_le_bytes());
    out.push(match c.readout {
        Readout::ZMean => 0,
        Readout::Purity => 1,
    });
    out.extend_from_slice(&c.seed.to_le_bytes());
    out.extend_from_slice(&ck.epoch.to_le_bytes());
    let params = ck.model.params();
    out.extend_from_slice(&narrow::<u32>(params.len(), "parameter count").to_le_bytes());
    put_f64s(&mut out, params);
    match &ck.optimizer {
        None => out.push(0),
        Some(adam) => {
            out.push(1);
            put_f64s(&mut out, &[adam.lr, adam.beta1, adam.beta2, adam.eps]);
            out.extend_from_slice(&adam.t.to_le_bytes());
            put_f64s(&mut out, &adam.m);
            put_f64s(&mut out, &adam.v);
        }
    }
    out
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<Checkpoint> {
    let mut r = Reader::new(bytes);
    r.magic(CHECKPOINT_MAGIC)?;
    let version = r.u16_le("version")?;
    if version != CHECKPOINT_VERSION {
        return Err(parse_err(
            4,
            format!("unsupported checkpoint version {version}"),
        ));
    }
    let config_at = r.pos();
    let architecture = match r.u8("architecture")? {
        0 => Architecture::Capsule,
        1 => Architecture::Baseline,
        t => return Err(r.error(format!("unknown architecture tag {t}"))),
    };
    let total_qubits = r.u8("total_qubits")? as usize;
    let preprocess_depth = r.u16_le("preprocess_depth")? as usize;
    let primary_capsules = r.u8("primary_capsules")? as usize;
    let qubits_per_primary = r.u8("qubits_per_primary")? as usize;
    let digit_capsules = r.u8("digit_capsules")? as usize;
    let qubits_per_digit = r.u8("qubits_per_digit")? as usize;
    let tag = r.u8("channel kind")?;
    let channel_kind =
        ChannelKind::from_tag(tag).ok_or_else(|| r.error(format!("unknown channel tag {tag}")))?;
    let channel_depth = r.u16_le("channel_depth")? as usize;
    let k = r.u32_le("k")?;
    let routing_iters = r.u16_le("routing_iters")? as usize;
    let readout = match r.u8("readout")? {
        0 => Readout::ZMean,
        1 => Readout::Purity,
        t => return Err(r.error(format!("unknown readout tag {t}"))),
    };
    let seed = r.u64_le("seed")?;
    let config = QCapsNetConfig {
        architecture,
        total_qubits,
        preprocess_depth,
        primary_capsules,
        qubits_per_primary,
        digit_capsules,
        qubits_per_digit,
        channel_kind,
        channel_depth,
        k,
        routing_iters,
        readout,
        seed,
    };
    config
        .validate()
        .map_err(|e| parse_err(config_at, e.to_string()))?;
    let epoch = r.u32_le("epoch")?;
    let n_at = r.pos();
    let n = r.count(8, "parameters")?;
    if n != config.parameter_count() {
        return Err(parse_err(
            n_at,
            format!(
                "config needs {} parameters, checkpoint has {n}",
                config.parameter_count()
            ),
        ));
    }
    let params = r.f64_vec(n, "parameters")?;
    let model = QCapsNetModel::new(config, params).map_err(|e| parse_err(n_at, e.to_string()))?;
    let optimizer = match r.u8("optimizer flag")? {
        0 => None,
        1 => {
            let h = r.f64_vec(4, "optimizer settings")?;
            let t = r.u64_le("optimizer step")?;
            let m = r.f64_vec(n, "first moments")?;
            let v = r.f64_vec(n, "second moments")?;
            Some(Adam {
                lr: h[0],
                beta1: h[1],
                beta2: h[2],
                eps: h[3],
                t,
                m,
                v,
            })
        }
        f => return Err(r.error(format!("bad optimizer flag {f}"))),
    };
    r.finish()?;
    Ok(Checkpoint {
        model,
        optimizer,
        epoch,
    })
}

pub fn save_checkpoint(path: &Path, ck: &Checkpoint) -> Result<()> {
    std::fs::write(path, encode_checkpoint(ck))?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    decode_checkpoint(&std::fs::read(path)?)
}
