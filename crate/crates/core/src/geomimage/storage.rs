use std::fs;
use std::path::{Path, PathBuf};

use image::{ImageBuffer, Rgb};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::slicer::Genus;

use super::{GeometryImage, Sampling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StorageFormat {
    /// 16 bits per channel, quantized between the per-channel bounds.
    Png16,
    /// Little-endian `f32` triples, row-major.
    F32,
}

/// JSON metadata stored next to the pixel data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub n: usize,
    pub genus: usize,
    /// Side identification used when decoding.
    pub weld: String,
    pub sampling: Sampling,
    pub min: [f64; 3],
    pub max: [f64; 3],
    pub format: StorageFormat,
}

fn weld_name(g: Genus) -> &'static str {
    match g {
        Genus::Zero => "bottom-left,right-top",
        Genus::One => "bottom-top,left-right",
    }
}

fn sidecar_path(data: &Path) -> PathBuf {
    data.with_extension("json")
}

fn sidecar<T: Real>(img: &GeometryImage<T>, format: StorageFormat) -> Sidecar {
    let (lo, hi) = img.bounds();
    Sidecar {
        n: img.n,
        genus: img.genus.index(),
        weld: weld_name(img.genus).into(),
        sampling: img.sampling,
        min: lo.map(|x| x.as_f64()),
        max: hi.map(|x| x.as_f64()),
        format,
    }
}

fn write_sidecar(path: &Path, meta: &Sidecar) -> Result<()> {
    let text = serde_json::to_string_pretty(meta).map_err(|e| Error::Image(e.to_string()))?;
    fs::write(sidecar_path(path), text + "\n")?;
    Ok(())
}

/// Writes a 16-bit RGB PNG at `path` and its sidecar at `path` with a `.json` extension.
pub fn write_png<T: Real>(img: &GeometryImage<T>, path: &Path) -> Result<Sidecar> {
    let meta = sidecar(img, StorageFormat::Png16);
    let mut data = Vec::with_capacity(img.samples.len() * 3);
    for p in &img.samples {
        for c in 0..3 {
            let range = meta.max[c] - meta.min[c];
            let t = if range > 0.0 { (p[c].as_f64() - meta.min[c]) / range } else { 0.0 };
            data.push((t * 65535.0).round().clamp(0.0, 65535.0) as u16);
        }
    }
    let n = img.n as u32;
    let buf: ImageBuffer<Rgb<u16>, Vec<u16>> =
        ImageBuffer::from_raw(n, n, data).ok_or_else(|| Error::Image("pixel buffer size mismatch".into()))?;
    buf.save_with_format(path, image::ImageFormat::Png).map_err(|e| Error::Image(e.to_string()))?;
    write_sidecar(path, &meta)?;
    Ok(meta)
}

/// Writes raw little-endian `f32` samples at `path` and the sidecar next to it.
pub fn write_f32<T: Real>(img: &GeometryImage<T>, path: &Path) -> Result<Sidecar> {
    let meta = sidecar(img, StorageFormat::F32);
    let mut bytes = Vec::with_capacity(img.samples.len() * 12);
    for p in &img.samples {
        for c in p {
            bytes.extend_from_slice(&(c.as_f64() as f32).to_le_bytes());
        }
    }
    fs::write(path, bytes)?;
    write_sidecar(path, &meta)?;
    Ok(meta)
}

/// Reads an image written by [`write_png`] or [`write_f32`], using the sidecar to pick the format.
pub fn read_image<T: Real>(path: &Path) -> Result<GeometryImage<T>> {
    let text = fs::read_to_string(sidecar_path(path))?;
    let meta: Sidecar = serde_json::from_str(&text).map_err(|e| Error::Image(format!("sidecar: {e}")))?;
    let genus = Genus::from_index(meta.genus).ok_or_else(|| Error::Image(format!("unsupported genus {}", meta.genus)))?;
    let n = meta.n;
    let samples: Vec<[T; 3]> = match meta.format {
        StorageFormat::Png16 => {
            let buf = image::open(path).map_err(|e| Error::Image(e.to_string()))?.into_rgb16();
            if buf.width() as usize != n || buf.height() as usize != n {
                return Err(Error::Image(format!("pixel size {}x{} differs from n = {n}", buf.width(), buf.height())));
            }
            buf.pixels()
                .map(|px| {
                    [0, 1, 2].map(|c| {
                        let t = px.0[c] as f64 / 65535.0;
                        T::lit(meta.min[c] + t * (meta.max[c] - meta.min[c]))
                    })
                })
                .collect()
        }
        StorageFormat::F32 => {
            let bytes = fs::read(path)?;
            if bytes.len() != n * n * 12 {
                return Err(Error::Image(format!("expected {} bytes, found {}", n * n * 12, bytes.len())));
            }
            bytes
                .chunks_exact(12)
                .map(|c| [0, 1, 2].map(|k| T::lit(f32::from_le_bytes(c[4 * k..4 * k + 4].try_into().unwrap()) as f64)))
                .collect()
        }
    };
    Ok(GeometryImage { n, samples, genus, sampling: meta.sampling, fallback_pixels: 0 })
}
