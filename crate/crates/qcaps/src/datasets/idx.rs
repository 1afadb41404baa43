//! IDX containers for image and label arrays, raw or gzip-compressed.

use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;

use crate::codec::Reader;
use crate::error::{parse_err, Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

/// A stack of u8 images, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxImages {
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

impl IdxImages {
    pub fn count(&self) -> usize {
        if self.rows * self.cols == 0 {
            0
        } else {
            self.pixels.len() / (self.rows * self.cols)
        }
    }

    pub fn image(&self, i: usize) -> &[u8] {
        let n = self.rows * self.cols;
        &self.pixels[i * n..(i + 1) * n]
    }
}

/// Images paired with one label each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxDataset {
    pub images: IdxImages,
    pub labels: Vec<u8>,
}

fn header(r: &mut Reader, magic: u32, what: &str) -> Result<()> {
    let got = r.u32_be("magic")?;
    if got != magic {
        return Err(parse_err(
            0,
            format!("bad {what} magic {got:#010x}, expected {magic:#010x}"),
        ));
    }
    Ok(())
}

pub fn parse_idx_images(bytes: &[u8]) -> Result<IdxImages> {
    let mut r = Reader::new(bytes);
    header(&mut r, IMAGE_MAGIC, "image")?;
    let count = r.u32_be("image count")? as usize;
    let rows = r.u32_be("row count")? as usize;
    let cols = r.u32_be("column count")? as usize;
    let need = count
        .checked_mul(rows)
        .and_then(|x| x.checked_mul(cols))
        .ok_or_else(|| r.error("image dimensions overflow"))?;
    let pixels = r.take(need, "image payload")?.to_vec();
    r.finish()?;
    Ok(IdxImages { rows, cols, pixels })
}

pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let mut r = Reader::new(bytes);
    header(&mut r, LABEL_MAGIC, "label")?;
    let count = r.u32_be("label count")? as usize;
    let labels = r.take(count, "label payload")?.to_vec();
    r.finish()?;
    Ok(labels)
}

/// Parse an image file and a label file and check that their counts agree.
pub fn parse_idx(image_bytes: &[u8], label_bytes: &[u8]) -> Result<IdxDataset> {
    let images = parse_idx_images(image_bytes)?;
    let labels = parse_idx_labels(label_bytes)?;
    if images.count() != labels.len() {
        return Err(parse_err(
            4,
            format!("{} images but {} labels", images.count(), labels.len()),
        ));
    }
    Ok(IdxDataset { images, labels })
}

pub fn serialize_idx_images(images: &IdxImages) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + images.pixels.len());
    for v in [
        IMAGE_MAGIC,
        images.count() as u32,
        images.rows as u32,
        images.cols as u32,
    ] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out.extend_from_slice(&images.pixels);
    out
}

pub fn serialize_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

/// Inflate if the buffer starts with the gzip magic, otherwise return it as is.
pub fn maybe_gunzip(bytes: Vec<u8>) -> Result<Vec<u8>> {
    if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(bytes.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| Error::Data(format!("gzip: {e}")))?;
        Ok(out)
    } else {
        Ok(bytes)
    }
}

pub fn read_idx_files(images: &Path, labels: &Path) -> Result<IdxDataset> {
    let load = |p: &Path| -> Result<Vec<u8>> {
        let raw = std::fs::read(p).map_err(|e| Error::Data(format!("{}: {e}", p.display())))?;
        maybe_gunzip(raw)
    };
    parse_idx(&load(images)?, &load(labels)?)
}
