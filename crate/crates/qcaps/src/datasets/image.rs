use crate::error::{Error, Result};
use crate::quantum::{amplitude_encode, PureState};

pub const SOURCE_SIDE: usize = 28;
pub const TARGET_SIDE: usize = 16;
pub const PIXELS: usize = TARGET_SIDE * TARGET_SIDE;

/// Bilinear resampling of a square image, matching pixel centres.
pub fn resize_bilinear(src: &[f64], side: usize, out_side: usize) -> Result<Vec<f64>> {
    if src.len() != side * side || side == 0 || out_side == 0 {
        return Err(Error::Argument(format!(
            "expected a {side}x{side} image, got {} pixels",
            src.len()
        )));
    }
    let scale = side as f64 / out_side as f64;
    let coord = |o: usize| -> (usize, usize, f64) {
        let x = ((o as f64 + 0.5) * scale - 0.5).clamp(0.0, (side - 1) as f64);
        let x0 = x.floor() as usize;
        let x1 = (x0 + 1).min(side - 1);
        (x0, x1, x - x0 as f64)
    };
    let mut out = Vec::with_capacity(out_side * out_side);
    for oy in 0..out_side {
        let (y0, y1, fy) = coord(oy);
        for ox in 0..out_side {
            let (x0, x1, fx) = coord(ox);
            let top = src[y0 * side + x0] * (1.0 - fx) + src[y0 * side + x1] * fx;
            let bottom = src[y1 * side + x0] * (1.0 - fx) + src[y1 * side + x1] * fx;
            out.push(top * (1.0 - fy) + bottom * fy);
        }
    }
    Ok(out)
}

/// 28x28 → 16x16.
pub fn downscale_16(image28: &[f64]) -> Result<Vec<f64>> {
    let out = resize_bilinear(image28, SOURCE_SIDE, TARGET_SIDE)?;
    Ok(out.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
}

/// u8 grey levels scaled to [0, 1].
pub fn normalize_pixels(raw: &[u8]) -> Vec<f64> {
    raw.iter().map(|&p| p as f64 / 255.0).collect()
}

/// A downscaled digit with its amplitude encoding.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageSample {
    pub pixels: Vec<f64>,
    pub digit: u8,
    pub class: usize,
    /// 8-qubit amplitude encoding of `pixels`.
    pub encoded: PureState,
    /// `encoded` with an ancilla |0⟩ appended as the last qubit.
    pub input: PureState,
}

impl ImageSample {
    pub fn new(pixels: Vec<f64>, digit: u8, class: usize) -> Result<Self> {
        if pixels.len() != PIXELS {
            return Err(Error::Argument(format!(
                "expected {PIXELS} pixels, got {}",
                pixels.len()
            )));
        }
        if pixels.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Argument("pixel outside [0, 1]".into()));
        }
        let encoded = amplitude_encode(&pixels)?;
        let input = encoded.with_ancilla();
        Ok(Self {
            pixels,
            digit,
            class,
            encoded,
            input,
        })
    }
}
