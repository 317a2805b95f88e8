//! Frame-sequence directories.
//!
//! A video directory holds `.pgm` or `.f32` frames ordered by file name.
//! An optional `timestamps.txt` (one time in seconds per line) places them;
//! otherwise they are spread evenly over the exposure, endpoints included.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::io::frames::{read_frame, write_frame, FrameFormat};
use crate::repr::{ExposureInterval, Frame};
use crate::sim::SharpVideo;

pub const TIMESTAMPS_FILE: &str = "timestamps.txt";

/// Frame files in `dir`, sorted by name. `.f32` wins when both kinds exist.
pub fn list_frames(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut pgm = Vec::new();
    let mut f32s = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !path.is_file() {
            continue;
        }
        match FrameFormat::from_path(&path) {
            Ok(FrameFormat::Pgm) => pgm.push(path),
            Ok(FrameFormat::F32) => f32s.push(path),
            Err(_) => {}
        }
    }
    let mut chosen = if f32s.is_empty() { pgm } else { f32s };
    chosen.sort();
    if chosen.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{} contains no .pgm or .f32 frames",
            dir.display()
        )));
    }
    Ok(chosen)
}

pub fn read_frame_dir(dir: &Path) -> Result<Vec<Frame>> {
    list_frames(dir)?.iter().map(|p| read_frame(p)).collect()
}

/// Timestamps from `dir/timestamps.txt`, if present.
pub fn read_timestamps(dir: &Path) -> Result<Option<Vec<f64>>> {
    let path = dir.join(TIMESTAMPS_FILE);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut ts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        ts.push(line.parse::<f64>().map_err(|_| Error::Parse {
            path: path.clone(),
            line: i + 1,
            message: format!("bad timestamp `{line}`"),
        })?);
    }
    Ok(Some(ts))
}

pub fn read_video(dir: &Path, interval: ExposureInterval) -> Result<SharpVideo> {
    let frames = read_frame_dir(dir)?;
    match read_timestamps(dir)? {
        Some(ts) => SharpVideo::new(ts, frames, interval),
        None => SharpVideo::uniform(frames, interval),
    }
}

/// Writes `frame_0000.<ext>`, `frame_0001.<ext>`, ... into `dir`.
pub fn write_frame_dir(dir: &Path, frames: &[Frame], format: FrameFormat) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    frames
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let path = dir.join(format!("frame_{i:04}.{}", format.extension()));
            write_frame(&path, f)?;
            Ok(path)
        })
        .collect()
}

pub fn write_timestamps(dir: &Path, timestamps: &[f64]) -> Result<()> {
    let path = dir.join(TIMESTAMPS_FILE);
    let text: String = timestamps.iter().map(|t| format!("{t}\n")).collect();
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

pub fn write_video(dir: &Path, video: &SharpVideo, format: FrameFormat) -> Result<()> {
    write_frame_dir(dir, video.frames(), format)?;
    write_timestamps(dir, video.timestamps())
}
