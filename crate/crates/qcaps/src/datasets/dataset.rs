use rand::seq::SliceRandom;

use super::idx::IdxDataset;
use super::image::{downscale_16, normalize_pixels, ImageSample, SOURCE_SIDE};
use super::spin::{sample_spin_chains, SpinChainSample};
use crate::codec::{put_f64s, Reader};
use crate::error::{parse_err, Error, Result};
use crate::linalg::c64;
use crate::quantum::PureState;
use crate::random::derived_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

/// A state the classifier consumes together with its class index.
pub trait LabeledState {
    fn input_state(&self) -> &PureState;
    fn class(&self) -> usize;
}

impl LabeledState for ImageSample {
    fn input_state(&self) -> &PureState {
        &self.input
    }

    fn class(&self) -> usize {
        self.class
    }
}

impl LabeledState for SpinChainSample {
    fn input_state(&self) -> &PureState {
        &self.state
    }

    fn class(&self) -> usize {
        self.label
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<S> {
    pub samples: Vec<S>,
    pub split: Split,
    pub seed: u64,
}

impl<S> Dataset<S> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.samples.iter()
    }
}

/// Chain ground states at couplings drawn uniformly from [lo, hi).
pub fn sample_spt_dataset(
    n: usize,
    count: usize,
    alpha_lo: f64,
    alpha_hi: f64,
    seed: u64,
    split: Split,
) -> Result<Dataset<SpinChainSample>> {
    let samples = sample_spin_chains(n, count, alpha_lo, alpha_hi, seed)?;
    Ok(Dataset {
        samples,
        split,
        seed,
    })
}

/// Disjoint train and test subsets of two digit classes.
///
/// `digits[c]` becomes class `c`. Each class is shuffled with a seeded generator,
/// the first `train_per_class` go to training and the next `test_per_class` to
/// test; each split is then shuffled again.
pub fn build_mnist_split(
    source: &IdxDataset,
    digits: [u8; 2],
    train_per_class: usize,
    test_per_class: usize,
    seed: u64,
) -> Result<(Dataset<ImageSample>, Dataset<ImageSample>)> {
    if source.images.rows != SOURCE_SIDE || source.images.cols != SOURCE_SIDE {
        return Err(Error::Data(format!(
            "expected {SOURCE_SIDE}x{SOURCE_SIDE} images, got {}x{}",
            source.images.rows, source.images.cols
        )));
    }
    let need = train_per_class + test_per_class;
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for (class, &digit) in digits.iter().enumerate() {
        let mut idx: Vec<usize> = (0..source.labels.len())
            .filter(|&i| source.labels[i] == digit)
            .collect();
        if idx.len() < need {
            return Err(Error::Data(format!(
                "digit {digit}: need {need} images, source has {}",
                idx.len()
            )));
        }
        idx.shuffle(&mut derived_rng(seed, class as u64));
        train_idx.extend(idx[..train_per_class].iter().map(|&i| (i, class)));
        test_idx.extend(idx[train_per_class..need].iter().map(|&i| (i, class)));
    }
    train_idx.shuffle(&mut derived_rng(seed, 100));
    test_idx.shuffle(&mut derived_rng(seed, 101));
    let build = |idx: &[(usize, usize)], split| -> Result<Dataset<ImageSample>> {
        let samples = idx
            .iter()
            .map(|&(i, class)| {
                let px = downscale_16(&normalize_pixels(source.images.image(i)))?;
                ImageSample::new(px, digits[class], class)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            samples,
            split,
            seed,
        })
    };
    Ok((
        build(&train_idx, Split::Train)?,
        build(&test_idx, Split::Test)?,
    ))
}

/// `count_per_class` images of each digit as one training set.
pub fn build_mnist_subset(
    source: &IdxDataset,
    digits: [u8; 2],
    count_per_class: usize,
    seed: u64,
) -> Result<Dataset<ImageSample>> {
    Ok(build_mnist_split(source, digits, count_per_class, 0, seed)?.0)
}

pub const CACHE_MAGIC: &[u8; 4] = b"QCDS";
pub const CACHE_VERSION: u16 = 1;
const KIND_IMAGE: u8 = 1;
const KIND_SPIN: u8 = 2;

/// Records that can live in a dataset cache file.
pub trait CacheRecord: Sized {
    const KIND: u8;
    fn write(&self, out: &mut Vec<u8>);
    fn read(r: &mut Reader) -> Result<Self>;
}

impl CacheRecord for ImageSample {
    const KIND: u8 = KIND_IMAGE;

    fn write(&self, out: &mut Vec<u8>) {
        out.push(self.digit);
        out.push(self.class as u8);
        out.extend_from_slice(&(self.pixels.len() as u32).to_le_bytes());
        put_f64s(out, &self.pixels);
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let at = r.pos();
        let digit = r.u8("digit")?;
        let class = r.u8("class")? as usize;
        let n = r.count(8, "pixel block")?;
        let pixels = r.f64_vec(n, "pixels")?;
        ImageSample::new(pixels, digit, class)
            .map_err(|e| parse_err(at, format!("bad image record: {e}")))
    }
}

impl CacheRecord for SpinChainSample {
    const KIND: u8 = KIND_SPIN;

    fn write(&self, out: &mut Vec<u8>) {
        out.push(self.n as u8);
        out.extend_from_slice(&self.alpha.to_le_bytes());
        out.push(self.label as u8);
        let amps = self.state.amplitudes();
        out.extend_from_slice(&(amps.len() as u32).to_le_bytes());
        for a in amps {
            out.extend_from_slice(&a.re.to_le_bytes());
            out.extend_from_slice(&a.im.to_le_bytes());
        }
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let at = r.pos();
        let n = r.u8("spin count")? as usize;
        let alpha = r.f64_le("coupling")?;
        let label = r.u8("label")? as usize;
        let len = r.count(16, "amplitude block")?;
        if n >= usize::BITS as usize || len != 1usize << n {
            return Err(parse_err(at, format!("{len} amplitudes for {n} spins")));
        }
        let raw = r.f64_vec(2 * len, "amplitudes")?;
        let amps = raw.chunks_exact(2).map(|c| c64(c[0], c[1])).collect();
        let state =
            PureState::new(amps).map_err(|e| parse_err(at, format!("bad spin record: {e}")))?;
        if !alpha.is_finite() || label > 1 {
            return Err(parse_err(at, "bad coupling or label"));
        }
        Ok(SpinChainSample {
            n,
            alpha,
            state,
            label,
        })
    }
}

pub fn encode_cache<S: CacheRecord>(ds: &Dataset<S>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.push(S::KIND);
    out.push(match ds.split {
        Split::Train => 0,
        Split::Test => 1,
    });
    out.extend_from_slice(&ds.seed.to_le_bytes());
    out.extend_from_slice(&(ds.samples.len() as u32).to_le_bytes());
    for s in &ds.samples {
        s.write(&mut out);
    }
    out
}

pub fn decode_cache<S: CacheRecord>(bytes: &[u8]) -> Result<Dataset<S>> {
    let mut r = Reader::new(bytes);
    r.magic(CACHE_MAGIC)?;
    let version = r.u16_le("version")?;
    if version != CACHE_VERSION {
        return Err(parse_err(4, format!("unsupported cache version {version}")));
    }
    let kind = r.u8("record kind")?;
    if kind != S::KIND {
        return Err(parse_err(
            6,
            format!("record kind {kind}, expected {}", S::KIND),
        ));
    }
    let split = match r.u8("split")? {
        0 => Split::Train,
        1 => Split::Test,
        other => return Err(parse_err(7, format!("unknown split {other}"))),
    };
    let seed = r.u64_le("seed")?;
    // Smallest record is a few bytes; bound the count by what is left.
    let count = r.count(3, "sample count")?;
    let samples = (0..count)
        .map(|_| S::read(&mut r))
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ok(Dataset {
        samples,
        split,
        seed,
    })
}
