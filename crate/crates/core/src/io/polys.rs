//! Binary polynomial-field files (all little-endian):
//!
//! ```text
//! b"ECIRPLY\0" | width u32 | height u32 | n u32 | 0u32 | t_start f64 | t_end f64
//! per pixel, raster order: n keypoints f64 | n derivative values f64 | constant f64
//! ```

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::repr::{ExposureInterval, IntensityPoly, KeypointSet, PolyField};

pub const POLY_MAGIC: &[u8; 8] = b"ECIRPLY\0";
const HEADER_LEN: usize = 40;

pub fn encode_polys(field: &PolyField) -> Result<Vec<u8>> {
    let n = field.polys()[0].degree();
    if field.polys().iter().any(|p| p.degree() != n) {
        return Err(Error::invalid_argument(
            "all pixels must have the same keypoint count to be stored",
        ));
    }
    let iv = field.interval();
    let mut out = Vec::with_capacity(HEADER_LEN + field.polys().len() * (2 * n + 1) * 8);
    out.extend_from_slice(POLY_MAGIC);
    for v in [field.width() as u32, field.height() as u32, n as u32, 0] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&iv.start().to_le_bytes());
    out.extend_from_slice(&iv.end().to_le_bytes());
    for p in field.polys() {
        for &t in p.keypoints().timestamps() {
            out.extend_from_slice(&t.to_le_bytes());
        }
        for &v in p.derivative_values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&p.integration_constant().to_le_bytes());
    }
    Ok(out)
}

pub fn decode_polys(bytes: &[u8], path: &Path) -> Result<PolyField> {
    let fmt = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    if bytes.len() < HEADER_LEN || &bytes[..8] != POLY_MAGIC {
        return Err(fmt("missing ECIRPLY magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let (width, height, n) = (u32_at(8), u32_at(12), u32_at(16));
    let interval = ExposureInterval::new(f64_at(24), f64_at(32)).map_err(|e| fmt(e.to_string()))?;
    let record = (2 * n + 1) * 8;
    let expected = HEADER_LEN + width * height * record;
    if n == 0 || width * height == 0 || bytes.len() != expected {
        return Err(fmt(format!(
            "{width}x{height} field with {n} keypoints needs {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let mut polys = Vec::with_capacity(width * height);
    for px in 0..width * height {
        let base = HEADER_LEN + px * record;
        let keys: Vec<f64> = (0..n).map(|i| f64_at(base + 8 * i)).collect();
        let vals: Vec<f64> = (0..n).map(|i| f64_at(base + 8 * (n + i))).collect();
        let a = f64_at(base + 16 * n);
        let ks = KeypointSet::new(keys, interval).map_err(|e| fmt(format!("pixel {px}: {e}")))?;
        polys.push(IntensityPoly::new(ks, vals, a)?);
    }
    PolyField::new(width, height, polys)
}

pub fn write_polys(path: &Path, field: &PolyField) -> Result<()> {
    fs::write(path, encode_polys(field)?).map_err(|e| Error::io(path, e))
}

pub fn read_polys(path: &Path) -> Result<PolyField> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_polys(&bytes, path)
}
