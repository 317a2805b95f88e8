//! Frame files.
//!
//! * `.pgm`: binary PGM (P5). Export quantizes `round(clamp(v, 0, 1) * 255)`.
//! * `.f32`: 16-byte header (`b"ECIRF32\0"`, width `u32` LE, height `u32` LE)
//!   followed by one or more row-major planes of little-endian `f32`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::repr::Frame;

pub const F32_MAGIC: &[u8; 8] = b"ECIRF32\0";
const F32_HEADER_LEN: usize = 16;

/// On-disk frame encoding, chosen by file extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameFormat {
    Pgm,
    F32,
}

impl FrameFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("pgm") => Ok(FrameFormat::Pgm),
            Some(e) if e.eq_ignore_ascii_case("f32") => Ok(FrameFormat::F32),
            _ => Err(Error::Format {
                path: path.to_path_buf(),
                message: "unknown frame extension (expected .pgm or .f32)".into(),
            }),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            FrameFormat::Pgm => "pgm",
            FrameFormat::F32 => "f32",
        }
    }
}

pub fn read_frame(path: &Path) -> Result<Frame> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    match FrameFormat::from_path(path)? {
        FrameFormat::Pgm => decode_pgm(&bytes, path),
        FrameFormat::F32 => {
            let mut planes = decode_f32(&bytes, path)?;
            if planes.len() != 1 {
                return Err(Error::Format {
                    path: path.to_path_buf(),
                    message: format!("expected one plane, found {}", planes.len()),
                });
            }
            Ok(planes.pop().unwrap())
        }
    }
}

pub fn write_frame(path: &Path, frame: &Frame) -> Result<()> {
    let bytes = match FrameFormat::from_path(path)? {
        FrameFormat::Pgm => encode_pgm(frame),
        FrameFormat::F32 => encode_f32(std::slice::from_ref(frame))?,
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Reads every plane of an `.f32` file.
pub fn read_planes(path: &Path) -> Result<Vec<Frame>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_f32(&bytes, path)
}

pub fn write_planes(path: &Path, planes: &[Frame]) -> Result<()> {
    let bytes = encode_f32(planes)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn encode_pgm(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend(frame.values().iter().map(|&v| quantize(v)));
    out
}

pub fn decode_pgm(bytes: &[u8], path: &Path) -> Result<Frame> {
    let fmt = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    let mut pos = 0;
    let mut next_token = || -> Option<String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        (pos > start).then(|| String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    if next_token().as_deref() != Some("P5") {
        return Err(fmt("not a binary PGM (missing P5 magic)".into()));
    }
    let mut number = |what: &str| -> Result<usize> {
        next_token()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| fmt(format!("bad PGM {what}")))
    };
    let width = number("width")?;
    let height = number("height")?;
    let maxval = number("maxval")?;
    if width == 0 || height == 0 {
        return Err(fmt(format!("bad PGM dimensions {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(fmt(format!("bad PGM maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    let data = &bytes[(pos + 1).min(bytes.len())..];
    let depth = if maxval < 256 { 1 } else { 2 };
    let needed = width * height * depth;
    if data.len() < needed {
        return Err(fmt(format!(
            "PGM raster truncated: {} of {needed} bytes",
            data.len()
        )));
    }
    let scale = maxval as f64;
    let values = if depth == 1 {
        data[..needed]
            .iter()
            .map(|&b| f64::from(b) / scale)
            .collect()
    } else {
        data[..needed]
            .chunks_exact(2)
            .map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])) / scale)
            .collect()
    };
    Frame::new(width, height, values)
}

pub fn encode_f32(planes: &[Frame]) -> Result<Vec<u8>> {
    let first = planes
        .first()
        .ok_or_else(|| Error::invalid_argument("no planes to encode"))?;
    for p in planes {
        first.ensure_same_shape(p)?;
    }
    let mut out = Vec::with_capacity(F32_HEADER_LEN + 4 * first.len() * planes.len());
    out.extend_from_slice(F32_MAGIC);
    out.extend_from_slice(&(first.width() as u32).to_le_bytes());
    out.extend_from_slice(&(first.height() as u32).to_le_bytes());
    for p in planes {
        for &v in p.values() {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_f32(bytes: &[u8], path: &Path) -> Result<Vec<Frame>> {
    let fmt = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    if bytes.len() < F32_HEADER_LEN || &bytes[..8] != F32_MAGIC {
        return Err(fmt("missing ECIRF32 magic".into()));
    }
    let width = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let plane_bytes = width * height * 4;
    let body = &bytes[F32_HEADER_LEN..];
    if plane_bytes == 0 || body.is_empty() || !body.len().is_multiple_of(plane_bytes) {
        return Err(fmt(format!(
            "{} payload bytes do not hold whole {width}x{height} planes",
            body.len()
        )));
    }
    Ok(body
        .chunks_exact(plane_bytes)
        .map(|plane| {
            let values = plane
                .chunks_exact(4)
                .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
                .collect();
            Frame::new(width, height, values).expect("plane length checked")
        })
        .collect())
}
