//! IDX image/label container parsing (big-endian, the MNIST distribution
//! format) and a writer for building fixtures.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{BigEndian, ReadBytesExt, WriteBytesExt};

use crate::data::{Dataset, FeatureVector};
use crate::error::{Error, Result};

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

/// Loads an IDX image/label file pair into a dataset.
///
/// Pixels are scaled to `[0,1]` and each image is flattened row-major into a
/// dense vector of `rows * cols` features. The class count is
/// `max label + 1`.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<Dataset> {
    let images = load_idx_images(images_path)?;
    let labels = load_idx_labels(labels_path)?;
    if images.len() != labels.len() {
        return Err(Error::IdxCountMismatch {
            images: images.len(),
            labels: labels.len(),
        });
    }
    let num_classes = labels.iter().copied().max().unwrap_or(0) as usize + 1;
    let rows = images
        .into_iter()
        .zip(labels)
        .map(|(pixels, label)| Ok((FeatureVector::dense(pixels)?, label as usize)))
        .collect::<Result<Vec<_>>>()?;
    Dataset::from_parts(rows, num_classes)
}

/// Raw images as `[0,1]` pixel rows.
pub fn load_idx_images(path: &Path) -> Result<Vec<Vec<f64>>> {
    let display = path.display().to_string();
    let truncated = |detail: &str| Error::IdxTruncated {
        path: display.clone(),
        detail: detail.to_string(),
    };
    let mut r = BufReader::new(File::open(path)?);
    let magic = r.read_u32::<BigEndian>().map_err(|_| truncated("missing magic"))?;
    if magic != IMAGES_MAGIC {
        return Err(Error::IdxBadMagic {
            path: display,
            got: magic,
            expected: IMAGES_MAGIC,
        });
    }
    let count = r.read_u32::<BigEndian>().map_err(|_| truncated("missing count"))? as usize;
    let rows = r.read_u32::<BigEndian>().map_err(|_| truncated("missing rows"))? as usize;
    let cols = r.read_u32::<BigEndian>().map_err(|_| truncated("missing cols"))? as usize;
    let pixels_per_image = rows * cols;
    if pixels_per_image == 0 {
        return Err(truncated("zero image dimensions"));
    }
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != count * pixels_per_image {
        return Err(truncated(&format!(
            "expected {} pixel bytes, found {}",
            count * pixels_per_image,
            raw.len()
        )));
    }
    Ok(raw
        .chunks_exact(pixels_per_image)
        .map(|chunk| chunk.iter().map(|&b| b as f64 / 255.0).collect())
        .collect())
}

pub fn load_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let display = path.display().to_string();
    let truncated = |detail: &str| Error::IdxTruncated {
        path: display.clone(),
        detail: detail.to_string(),
    };
    let mut r = BufReader::new(File::open(path)?);
    let magic = r.read_u32::<BigEndian>().map_err(|_| truncated("missing magic"))?;
    if magic != LABELS_MAGIC {
        return Err(Error::IdxBadMagic {
            path: display,
            got: magic,
            expected: LABELS_MAGIC,
        });
    }
    let count = r.read_u32::<BigEndian>().map_err(|_| truncated("missing count"))? as usize;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != count {
        return Err(truncated(&format!(
            "expected {count} label bytes, found {}",
            raw.len()
        )));
    }
    Ok(raw)
}

/// Writes images (pixel values in `[0,1]`, quantized to bytes) in IDX format.
pub fn write_idx_images(path: &Path, images: &[Vec<f64>], rows: u32, cols: u32) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_u32::<BigEndian>(IMAGES_MAGIC)?;
    w.write_u32::<BigEndian>(images.len() as u32)?;
    w.write_u32::<BigEndian>(rows)?;
    w.write_u32::<BigEndian>(cols)?;
    for image in images {
        debug_assert_eq!(image.len(), (rows * cols) as usize);
        for &p in image {
            w.write_all(&[(p.clamp(0.0, 1.0) * 255.0).round() as u8])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_idx_labels(path: &Path, labels: &[u8]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_u32::<BigEndian>(LABELS_MAGIC)?;
    w.write_u32::<BigEndian>(labels.len() as u32)?;
    w.write_all(labels)?;
    w.flush()?;
    Ok(())
}
