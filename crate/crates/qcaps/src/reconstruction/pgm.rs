//! Binary greymap (PGM P5) images.

use std::path::Path;

use super::perturb::PerturbationKind;
use crate::error::{parse_err, Error, Result};

/// Greymap with 8-bit or 16-bit samples scaled to [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Greymap {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<f64>,
}

/// P5, maxval 255. Values are clamped to [0, 1] and rounded.
pub fn encode_pgm(width: usize, height: usize, pixels: &[f64]) -> Result<Vec<u8>> {
    if pixels.len() != width * height {
        return Err(Error::Argument(format!(
            "{}x{} image needs {} pixels, got {}",
            width,
            height,
            width * height,
            pixels.len()
        )));
    }
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(
        pixels
            .iter()
            .map(|p| (p.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    Ok(out)
}

fn skip_space(b: &[u8], mut i: usize) -> usize {
    loop {
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        if i < b.len() && b[i] == b'#' {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
        } else {
            return i;
        }
    }
}

fn header_number(b: &[u8], i: &mut usize, what: &str) -> Result<usize> {
    *i = skip_space(b, *i);
    let start = *i;
    while *i < b.len() && b[*i].is_ascii_digit() {
        *i += 1;
    }
    if start == *i || *i - start > 9 {
        return Err(parse_err(start, format!("expected {what}")));
    }
    Ok(std::str::from_utf8(&b[start..*i]).unwrap().parse().unwrap())
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Greymap> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(parse_err(0, "not a binary PGM (P5)"));
    }
    let mut i = 2;
    let width = header_number(bytes, &mut i, "width")?;
    let height = header_number(bytes, &mut i, "height")?;
    let max_at = i;
    let maxval = header_number(bytes, &mut i, "maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(parse_err(max_at, format!("maxval {maxval} out of range")));
    }
    if i >= bytes.len() || !bytes[i].is_ascii_whitespace() {
        return Err(parse_err(i, "missing whitespace after header"));
    }
    i += 1;
    let sample = if maxval < 256 { 1 } else { 2 };
    let need = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(sample))
        .ok_or_else(|| parse_err(0, "image size overflows"))?;
    let data = &bytes[i..];
    if data.len() != need {
        return Err(parse_err(
            i,
            format!("expected {need} pixel bytes, found {}", data.len()),
        ));
    }
    let pixels = if sample == 1 {
        data.iter().map(|&v| v as f64).collect::<Vec<_>>()
    } else {
        data.chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64)
            .collect()
    };
    if let Some(at) = pixels.iter().position(|&v| v > maxval as f64) {
        return Err(parse_err(i + at * sample, "sample exceeds maxval"));
    }
    let scale = maxval as f64;
    Ok(Greymap {
        width,
        height,
        maxval: maxval as u16,
        pixels: pixels.into_iter().map(|v| v / scale).collect(),
    })
}

/// `recon_<label>_<kind>_<theta_milli>.pgm`, θ in thousandths.
pub fn pgm_filename(label: &str, kind: PerturbationKind, theta: f64) -> String {
    format!(
        "recon_{label}_{}_{}.pgm",
        kind.as_str(),
        (theta * 1000.0).round() as i64
    )
}

pub fn write_pgm(path: &Path, width: usize, height: usize, pixels: &[f64]) -> Result<()> {
    std::fs::write(path, encode_pgm(width, height, pixels)?)?;
    Ok(())
}
